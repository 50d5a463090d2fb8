"""(p,q)-calculus primitives: integers, factorials, binomials and the
recurring product ``prod_s (p^s - q^s x)``.

All functions are pure and work in double precision.  Exact rational
counterparts live in :mod:`pqschurer.oracle`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "MAX_DEGREE",
    "PQParams",
    "pq_integer",
    "pq_integers",
    "pq_factorial",
    "log_pq_factorial",
    "pq_binomial",
    "log_pq_binomials",
    "falling_product",
    "expand_product",
]

#: Largest ``n`` accepted by the primitives in this module.
MAX_DEGREE = 500

_BIG = 1e300
_SMALL = 1e-300


@dataclass(frozen=True)
class PQParams:
    """The deformation pair ``(p, q)`` with ``0 < q < p <= 1``."""

    p: float
    q: float

    def __post_init__(self):
        p, q = float(self.p), float(self.q)
        if not (math.isfinite(p) and math.isfinite(q)):
            raise ValueError(f"p and q must be finite, got p={self.p!r}, q={self.q!r}")
        if not 0.0 < q < p <= 1.0:
            raise ValueError(f"require 0 < q < p <= 1, got p={p!r}, q={q!r}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @property
    def ratio(self) -> float:
        """``q / p``; always in ``(0, 1)``."""
        return self.q / self.p


def _check_n(n, name="n"):
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        raise TypeError(f"{name} must be an integer, got {type(n).__name__}")
    n = int(n)
    if n < 0:
        raise ValueError(f"{name} must be nonnegative, got {n}")
    if n > MAX_DEGREE:
        raise ValueError(f"{name}={n} exceeds the supported ceiling {MAX_DEGREE}")
    return n


def pq_integer(n: int, params: PQParams) -> float:
    """Return ``[n]_{p,q} = sum_{i<n} p^(n-1-i) q^i``.

    The summation form has no cancellation when ``q`` is close to ``p``,
    unlike ``(p^n - q^n) / (p - q)``.
    """
    n = _check_n(n)
    p, q = params.p, params.q
    return math.fsum(p ** (n - 1 - i) * q**i for i in range(n))


def pq_integers(n_max: int, params: PQParams) -> np.ndarray:
    """Array ``[[0], [1], ..., [n_max]]`` via ``[j+1] = p [j] + q^j``.

    Every step adds two nonnegative terms, so the recurrence is stable.
    """
    n_max = _check_n(n_max, "n_max")
    p, q = params.p, params.q
    out = np.zeros(n_max + 1)
    qpow = 1.0
    for j in range(n_max):
        out[j + 1] = p * out[j] + qpow
        qpow *= q
    return out


def log_pq_factorial(n: int, params: PQParams) -> float:
    """Natural log of ``[n]_{p,q}!``."""
    n = _check_n(n)
    ints = pq_integers(n, params)
    return math.fsum(math.log(v) for v in ints[1:])


def pq_factorial(n: int, params: PQParams) -> float:
    """Return ``[1][2]...[n]`` (``1`` for ``n = 0``).

    The running product is kept as a mantissa/exponent pair so that
    intermediate over- or underflow cannot occur; only the final result
    is required to be representable.
    """
    n = _check_n(n)
    ints = pq_integers(n, params)
    mant, expo = 1.0, 0
    for v in ints[1:]:
        mant, e = math.frexp(mant * v)
        expo += e
    try:
        return math.ldexp(mant, expo)
    except OverflowError:
        raise OverflowError(f"[{n}]_{{p,q}}! overflows double precision; use log_pq_factorial") from None


def pq_binomial(n: int, k: int, params: PQParams) -> float:
    """Return the (p,q)-binomial coefficient ``[n choose k]_{p,q}``.

    Uses ``C(n, j) = C(n, j-1) [n-j+1] / [j]`` and switches to a
    log-space accumulation as soon as the running value leaves
    ``[1e-300, 1e300]``.
    """
    n = _check_n(n)
    k = _check_n(k, "k")
    if k > n:
        raise ValueError(f"k={k} exceeds n={n}")
    k = min(k, n - k)
    ints = pq_integers(n, params)
    value = 1.0
    for j in range(1, k + 1):
        value = value * ints[n - j + 1] / ints[j]
        if not _SMALL <= value <= _BIG:
            log_value = math.fsum(
                [math.log(ints[n - i + 1]) - math.log(ints[i]) for i in range(1, k + 1)]
            )
            try:
                return math.exp(log_value)
            except OverflowError:
                raise OverflowError(
                    f"[{n} choose {k}]_{{p,q}} overflows double precision"
                ) from None
    return value


def log_pq_binomials(n: int, params: PQParams) -> np.ndarray:
    """Natural logs of ``[n choose k]_{p,q}`` for ``k = 0..n`` as one array."""
    n = _check_n(n)
    logs = np.log(pq_integers(n, params)[1:])
    cum = np.concatenate(([0.0], np.cumsum(logs)))
    # log [n]! - log [k]! - log [n-k]!
    return cum[n] - cum - cum[::-1]


def falling_product(x: float, count: int, params: PQParams) -> float:
    """Return ``prod_{s=0}^{count-1} (p^s - q^s x)``.

    Nonnegative for ``x`` in ``[0, 1]``.  Past 64 factors the product is
    tracked as a mantissa/exponent pair to avoid spurious underflow.
    """
    count = _check_n(count, "count")
    p, q = params.p, params.q
    x = float(x)
    if count <= 64:
        out = 1.0
        for s in range(count):
            out *= p**s - q**s * x
        return out
    mant, expo = 1.0, 0
    for s in range(count):
        factor = p**s - q**s * x
        if factor == 0.0:
            return 0.0
        mant, e = math.frexp(mant * factor)
        expo += e
    try:
        return math.ldexp(mant, expo)
    except OverflowError:
        raise OverflowError("falling_product overflows double precision") from None


def expand_product(x: float, count: int, params: PQParams) -> float:
    """Evaluate ``prod_s (p^s - q^s x)`` through the (p,q)-binomial expansion

    ``sum_k p^((n-k)(n-k-1)/2) q^(k(k-1)/2) [n choose k]_{p,q} (-x)^k``.

    Mathematically identical to :func:`falling_product`; kept so the two
    formulas can be checked against each other.
    """
    n = _check_n(count, "count")
    p, q = params.p, params.q
    x = float(x)
    terms = []
    for k in range(n + 1):
        coeff = pq_binomial(n, k, params)
        terms.append(p ** ((n - k) * (n - k - 1) // 2) * q ** (k * (k - 1) // 2) * coeff * (-x) ** k)
    return math.fsum(terms)
