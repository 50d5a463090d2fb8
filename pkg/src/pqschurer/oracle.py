"""Exact rational reference implementation.

Every formula is evaluated verbatim in :class:`fractions.Fraction`
arithmetic: binomials as factorial ratios, nodes as
``[k] / (p^(k-m-l) [m])`` and the normalizer ``p^((m+l)(m+l-1)/2)``.
Nothing here shares code with the floating-point paths, so agreement
between the two is meaningful.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Sequence

__all__ = [
    "ORACLE_MAX_DEGREE",
    "SYMBOLIC_POINTS",
    "as_rational",
    "oracle_pq_integer",
    "oracle_pq_factorial",
    "oracle_pq_binomial",
    "oracle_falling_product",
    "oracle_evaluate",
    "oracle_evaluate_unnormalized",
    "oracle_moments_closed_form",
    "oracle_moment_identity_check",
]

ORACLE_MAX_DEGREE = 16
SYMBOLIC_POINTS = tuple(Fraction(i, 4) for i in range(5))


def as_rational(value) -> Fraction:
    """Coerce ints, strings (``"9/10"``) and Fractions.  Floats are refused
    because their binary expansion is rarely the intended rational."""
    if isinstance(value, float):
        raise TypeError("pass rationals as Fraction, int or str, not float")
    return Fraction(value)


def _params(p, q) -> tuple[Fraction, Fraction]:
    p, q = as_rational(p), as_rational(q)
    if not 0 < q < p <= 1:
        raise ValueError(f"require 0 < q < p <= 1, got p={p}, q={q}")
    return p, q


def _check_degree(m: int, ell: int) -> int:
    if m < 1 or ell < 0:
        raise ValueError(f"require m >= 1 and ell >= 0, got m={m}, ell={ell}")
    if m + ell > ORACLE_MAX_DEGREE:
        raise ValueError(f"m+ell={m + ell} exceeds oracle ceiling {ORACLE_MAX_DEGREE}")
    return m + ell


@lru_cache(maxsize=4096)
def _pq_int(n: int, p: Fraction, q: Fraction) -> Fraction:
    return sum((p ** (n - 1 - i) * q**i for i in range(n)), Fraction(0))


def oracle_pq_integer(n: int, p, q) -> Fraction:
    """Exact ``[n]_{p,q}`` by the summation form."""
    p, q = _params(p, q)
    if n < 0:
        raise ValueError("n must be nonnegative")
    return _pq_int(n, p, q)


@lru_cache(maxsize=4096)
def _pq_fact(n: int, p: Fraction, q: Fraction) -> Fraction:
    out = Fraction(1)
    for i in range(1, n + 1):
        out *= _pq_int(i, p, q)
    return out


def oracle_pq_factorial(n: int, p, q) -> Fraction:
    p, q = _params(p, q)
    if n < 0:
        raise ValueError("n must be nonnegative")
    return _pq_fact(n, p, q)


@lru_cache(maxsize=8192)
def _pq_binom(n: int, k: int, p: Fraction, q: Fraction) -> Fraction:
    return _pq_fact(n, p, q) / (_pq_fact(k, p, q) * _pq_fact(n - k, p, q))


def oracle_pq_binomial(n: int, k: int, p, q) -> Fraction:
    """Exact binomial as the plain factorial ratio."""
    p, q = _params(p, q)
    if not 0 <= k <= n:
        raise ValueError(f"require 0 <= k <= n, got n={n}, k={k}")
    return _pq_binom(n, k, p, q)


@lru_cache(maxsize=8192)
def _falling(x: Fraction, count: int, p: Fraction, q: Fraction) -> Fraction:
    out = Fraction(1)
    for s in range(count):
        out *= p**s - q**s * x
    return out


def oracle_falling_product(x, count: int, p, q) -> Fraction:
    p, q = _params(p, q)
    return _falling(as_rational(x), count, p, q)


def _poly(coeffs: Sequence, t: Fraction) -> Fraction:
    return sum((c * t**j for j, c in enumerate(coeffs)), Fraction(0))


def _coeffs(poly) -> list[Fraction]:
    return [as_rational(c) for c in poly]


def _check_x(x) -> Fraction:
    x = as_rational(x)
    if not 0 <= x <= 1:
        raise ValueError(f"x must lie in [0, 1], got {x}")
    return x


def oracle_evaluate(m: int, ell: int, p, q, poly: Sequence, x) -> Fraction:
    """Exact value of the revised operator applied to a polynomial.

    ``poly`` holds rational coefficients, constant term first, so
    ``[0, 0, 1]`` is ``t^2``.
    """
    _check_degree(m, ell)
    p, q = _params(p, q)
    coeffs = _coeffs(poly)
    return sum((w * _poly(coeffs, t) for w, t in _revised_terms(m, ell, p, q, _check_x(x))), Fraction(0))


@lru_cache(maxsize=4096)
def _revised_terms(m: int, ell: int, p: Fraction, q: Fraction, x: Fraction) -> tuple:
    """Normalized weights and nodes ``(w_k, t_k)`` of the revised operator."""
    n = m + ell
    denom_m = _pq_int(m, p, q)
    norm = p ** (n * (n - 1) // 2)
    terms = []
    for k in range(n + 1):
        basis = _pq_binom(n, k, p, q) * p ** (k * (k - 1) // 2) * x**k * _falling(x, n - k, p, q)
        node = _pq_int(k, p, q) / (p ** (k - n) * denom_m)
        terms.append((basis / norm, node))
    return tuple(terms)


def oracle_evaluate_unnormalized(m: int, ell: int, p, q, poly: Sequence, x, variant: str = "schurer_eq6") -> Fraction:
    """Exact value of the defective operators without the p-power normalizer.

    ``schurer_eq6`` has degree ``m+ell`` and nodes ``[k]/[m]``;
    ``bernstein_eq4`` is the ``ell = 0`` Bernstein form.
    """
    if variant == "bernstein_eq4" and ell != 0:
        raise ValueError("bernstein_eq4 has no Schurer shift; ell must be 0")
    if variant not in ("schurer_eq6", "bernstein_eq4"):
        raise ValueError(f"unknown variant {variant!r}")
    n = _check_degree(m, ell)
    p, q = _params(p, q)
    x = _check_x(x)
    coeffs = _coeffs(poly)
    denom_m = _pq_int(m, p, q)
    total = Fraction(0)
    for k in range(n + 1):
        basis = _pq_binom(n, k, p, q) * x**k * _falling(x, n - k, p, q)
        total += basis * _poly(coeffs, _pq_int(k, p, q) / denom_m)
    return total


def oracle_moments_closed_form(m: int, ell: int, p, q, x) -> dict[str, Fraction]:
    """Closed-form moments and central moments as exact rationals."""
    n = _check_degree(m, ell)
    p, q = _params(p, q)
    x = _check_x(x)
    i_n, i_m, i_n1 = _pq_int(n, p, q), _pq_int(m, p, q), _pq_int(n - 1, p, q)
    ratio = i_n / i_m
    return {
        "e0": Fraction(1),
        "e1": ratio * x,
        "e2": p ** (n - 1) * i_n * x / i_m**2 + q * i_n * i_n1 * x**2 / i_m**2,
        "shifted": ratio * x - 1,
        "central1": (ratio - 1) * x,
        "central2": p ** (n - 1) * i_n * x / i_m**2 + (1 - 2 * ratio + q * i_n1 * i_n / i_m**2) * x**2,
        "delta_squared": i_n * p ** (n - 1) * x / i_m**2
        + ((ratio - 1) ** 2 + i_n * (q * i_n1 - i_n) / i_m**2) * x**2,
        "radicand": (q * i_n1 - i_n) * x**2 + p ** (n - 1) * x,
    }


def oracle_moment_identity_check(m: int, ell: int, p, q, points: Sequence = SYMBOLIC_POINTS) -> dict[str, bool]:
    """Check every moment identity exactly at the given rational points.

    Keys name the identity; each value is ``True`` only if the identity
    holds with zero tolerance at every point.
    """
    n = _check_degree(m, ell)
    p, q = _params(p, q)
    results = {
        "e0": True,
        "e1": True,
        "e2": True,
        "shifted": True,
        "central1": True,
        "central2": True,
        "delta_squared_is_central2": True,
        "radicand": True,
    }
    for x in points:
        x = _check_x(x)
        b0 = oracle_evaluate(m, ell, p, q, [1], x)
        b1 = oracle_evaluate(m, ell, p, q, [0, 1], x)
        b2 = oracle_evaluate(m, ell, p, q, [0, 0, 1], x)
        cf = oracle_moments_closed_form(m, ell, p, q, x)
        results["e0"] &= b0 == cf["e0"]
        results["e1"] &= b1 == cf["e1"]
        results["e2"] &= b2 == cf["e2"]
        results["shifted"] &= oracle_evaluate(m, ell, p, q, [-1, 1], x) == cf["shifted"]
        results["central1"] &= b1 - x * b0 == cf["central1"]
        results["central2"] &= b2 - 2 * x * b1 + x**2 * b0 == cf["central2"]
        results["delta_squared_is_central2"] &= cf["delta_squared"] == cf["central2"]
        results["radicand"] &= cf["radicand"] == p ** (n - 1) * x * (1 - x)
    return results
