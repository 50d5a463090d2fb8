"""Closed-form moments, error radii, moduli of continuity and pointwise
checks of the approximation error bounds."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .calculus import pq_integer
from .functions import FunctionHandle
from .operator import OperatorSpec, _check_x, evaluate_grid

__all__ = [
    "DEFAULT_GRID",
    "MomentSet",
    "BoundRow",
    "BoundReport",
    "moments_closed_form",
    "radicand",
    "radicand_simplified",
    "delta_m",
    "delta_m_verbatim",
    "delta_m_squared_direct",
    "modulus_of_continuity",
    "modulus_upper_estimate",
    "second_modulus",
    "theorem32_bound_check",
    "lipschitz_bound_check",
    "default_tolerance",
]

DEFAULT_GRID = 2001


@dataclass(frozen=True)
class MomentSet:
    """Moments of ``t^j`` and of ``(t - x)^j`` at ``x`` (scalars or arrays)."""

    e0: object
    e1: object
    e2: object
    central1: object
    central2: object
    x: object


def _ints(spec: OperatorSpec):
    n, m, prm = spec.degree, spec.m, spec.params
    return pq_integer(n, prm), pq_integer(m, prm), pq_integer(n - 1, prm)


def _scalar(a):
    return float(a) if np.ndim(a) == 0 else a


def moments_closed_form(spec: OperatorSpec, x) -> MomentSet:
    x = _check_x(x)
    p, q = spec.params.p, spec.params.q
    i_n, i_m, i_n1 = _ints(spec)
    n = spec.degree
    ratio = i_n / i_m
    e1 = ratio * x
    e2 = p ** (n - 1) * i_n * x / i_m**2 + q * i_n * i_n1 * x**2 / i_m**2
    central2 = p ** (n - 1) * i_n * x / i_m**2 + (1.0 - 2.0 * ratio + q * i_n1 * i_n / i_m**2) * x**2
    return MomentSet(
        e0=_scalar(np.ones_like(x)),
        e1=_scalar(e1),
        e2=_scalar(e2),
        central1=_scalar((ratio - 1.0) * x),
        central2=_scalar(central2),
        x=_scalar(x),
    )


def radicand(spec: OperatorSpec, x):
    """``(q [n-1] - [n]) x^2 + p^(n-1) x`` exactly as displayed in the bound."""
    x = _check_x(x)
    i_n, _, i_n1 = _ints(spec)
    return _scalar((spec.params.q * i_n1 - i_n) * x**2 + spec.params.p ** (spec.degree - 1) * x)


def radicand_simplified(spec: OperatorSpec, x):
    """``p^(n-1) x (1 - x)``; equal to :func:`radicand` because
    ``[n] = p^(n-1) + q [n-1]``."""
    x = _check_x(x)
    return _scalar(spec.params.p ** (spec.degree - 1) * x * (1.0 - x))


def _delta(spec: OperatorSpec, x, rad):
    x = _check_x(x)
    i_n, i_m, _ = _ints(spec)
    ratio = i_n / i_m
    rad = np.maximum(np.asarray(rad, dtype=float), 0.0)
    return _scalar(x * abs(ratio - 1.0) + np.sqrt(ratio) * np.sqrt(rad / i_m))


def delta_m(spec: OperatorSpec, x):
    """Radius ``x|[n]/[m] - 1| + sqrt([n]/[m]) sqrt(p^(n-1) x(1-x) / [m])``."""
    return _delta(spec, x, radicand_simplified(spec, x))


def delta_m_verbatim(spec: OperatorSpec, x):
    """Same radius with the unsimplified radicand; for cross-checks only."""
    return _delta(spec, x, radicand(spec, x))


def delta_m_squared_direct(spec: OperatorSpec, x):
    """``[n] p^(n-1) x / [m]^2 + (([n]/[m] - 1)^2 + [n](q[n-1] - [n]) / [m]^2) x^2``.

    Algebraically this is the second central moment ``B((t - x)^2; x)``.
    """
    x = _check_x(x)
    i_n, i_m, i_n1 = _ints(spec)
    p, q = spec.params.p, spec.params.q
    ratio = i_n / i_m
    lin = i_n * p ** (spec.degree - 1) * x / i_m**2
    quad = ((ratio - 1.0) ** 2 + i_n * (q * i_n1 - i_n) / i_m**2) * x**2
    return _scalar(lin + quad)


def _domain_grid(f: FunctionHandle, domain, grid_points: int):
    a, b = map(float, domain if domain is not None else f.domain)
    if not b > a:
        raise ValueError(f"empty domain [{a}, {b}]")
    if grid_points < 2:
        raise ValueError("grid_points must be >= 2")
    return a, b, np.linspace(a, b, grid_points)


def modulus_of_continuity(f: FunctionHandle, delta: float, domain=None,
                          grid_points: int = DEFAULT_GRID) -> float:
    """Grid estimate of ``sup |f(y) - f(x)|`` over ``|y - x| <= delta``.

    Only grid pairs are compared, so this is a lower estimate that
    converges from below as ``grid_points`` grows.
    """
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta}")
    a, b, t = _domain_grid(f, domain, grid_points)
    h = (b - a) / (grid_points - 1)
    span = min(int(math.floor(delta / h * (1 + 1e-12))), grid_points - 1)
    if span == 0:
        return 0.0
    windows = sliding_window_view(np.asarray(f(t)), span + 1)
    return float(np.max(windows.max(axis=1) - windows.min(axis=1)))


def modulus_upper_estimate(f: FunctionHandle, delta: float, domain=None,
                           grid_points: int = DEFAULT_GRID) -> tuple[float, bool]:
    """Grid estimate raised to a guaranteed upper bound when possible.

    With ``holder = (M, nu)`` known, any pair at distance ``<= delta`` can
    be moved onto grid pairs at distance ``<= delta`` by displacing each
    end by at most one cell ``h``, so adding ``2 M h^nu`` bounds the true
    modulus.  Returns ``(value, is_upper_bound)``; without a Hölder
    constant the bare grid estimate is returned with ``False``.
    """
    est = modulus_of_continuity(f, delta, domain, grid_points)
    if f.holder is None:
        return est, False
    a, b, _ = _domain_grid(f, domain, grid_points)
    M, nu = f.holder
    h = (b - a) / (grid_points - 1)
    return est + 2.0 * M * h**nu, True


def second_modulus(f: FunctionHandle, delta_sqrt: float, domain=None,
                   grid_points: int = DEFAULT_GRID, h_points: int = 32) -> float:
    """Grid estimate of ``sup_{0<h<=delta_sqrt} sup_x |f(x+2h) - 2f(x+h) + f(x)|``.

    ``h`` runs over ``h_points`` equally spaced values ending at
    ``delta_sqrt``; for each ``h``, ``x`` runs over ``grid_points`` values
    with ``x + 2h`` inside the domain.  ``h`` is capped at half the
    domain width.
    """
    if not delta_sqrt > 0:
        raise ValueError(f"delta_sqrt must be positive, got {delta_sqrt}")
    a, b, _ = _domain_grid(f, domain, grid_points)
    h_max = min(delta_sqrt, (b - a) / 2.0)
    hs = h_max * np.arange(1, h_points + 1) / h_points
    u = np.linspace(0.0, 1.0, grid_points)
    # x ranges over [a, b - 2h] for each h
    xs = a + u[None, :] * ((b - a) - 2.0 * hs[:, None])
    hh = hs[:, None]
    diff = f(xs + 2.0 * hh) - 2.0 * f(xs + hh) + f(xs)
    return float(np.max(np.abs(diff)))


def default_tolerance(rhs):
    return 1e-9 + 1e-6 * np.abs(rhs)


@dataclass
class BoundRow:
    x: float
    lhs: float
    rhs: float
    delta_m: float
    passed: bool


@dataclass
class BoundReport:
    """Pointwise bound check; ``omega_kind`` is ``"upper-bound"`` when the
    modulus was corrected with a Hölder constant and ``"grid-estimate"``
    otherwise."""

    kind: str
    rows: list[BoundRow]
    omega_kind: str = "exact"
    metadata: dict = field(default_factory=dict)

    COLUMNS = ("x", "lhs", "rhs", "delta_m", "pass")

    @property
    def all_pass(self) -> bool:
        return all(r.passed for r in self.rows)

    @property
    def violations(self) -> list[BoundRow]:
        return [r for r in self.rows if not r.passed]

    def as_records(self) -> list[dict]:
        return [{"x": r.x, "lhs": r.lhs, "rhs": r.rhs, "delta_m": r.delta_m, "pass": r.passed}
                for r in self.rows]


def _lhs(spec, f, xs):
    xs = np.asarray(xs, dtype=float)
    return np.abs(evaluate_grid(spec, f, xs) - np.asarray(f(xs), dtype=float))


def theorem32_bound_check(spec: OperatorSpec, f: FunctionHandle, xs: Sequence[float],
                          grid_points: int = DEFAULT_GRID, tolerance=None) -> BoundReport:
    """Check ``|B(f;x) - f(x)| <= 2 omega(f, delta_m(x))`` at each ``x``.

    The modulus is taken over ``[0, ell+1]``.  ``tolerance`` may be a
    number or a callable of the right-hand side.
    """
    xs = np.asarray(_check_x(xs), dtype=float).ravel()
    domain = spec.domain
    if f.domain[0] > domain[0] or f.domain[1] < domain[1]:
        raise ValueError(f"{f.name} is declared on {f.domain}, which does not cover {domain}")
    lhs = _lhs(spec, f, xs)
    deltas = np.atleast_1d(delta_m(spec, xs))
    rows, upper_all = [], True
    for x, l, d in zip(xs, lhs, deltas):
        if d > 0:
            w, upper = modulus_upper_estimate(f, float(d), domain, grid_points)
            upper_all &= upper
        else:
            w = 0.0
        rhs = 2.0 * w
        tol = tolerance(rhs) if callable(tolerance) else (default_tolerance(rhs) if tolerance is None else tolerance)
        rows.append(BoundRow(float(x), float(l), float(rhs), float(d), bool(l <= rhs + tol)))
    return BoundReport("modulus", rows, "upper-bound" if upper_all else "grid-estimate",
                       {"function": f.name, "m": spec.m, "ell": spec.ell,
                        "p": spec.params.p, "q": spec.params.q, "grid_points": grid_points})


def lipschitz_bound_check(spec: OperatorSpec, f: FunctionHandle, M: float, nu: float,
                          xs: Sequence[float], tolerance=None) -> BoundReport:
    """Check ``|B(f;x) - f(x)| <= M delta^nu`` with ``delta^2`` the second
    central moment, for ``f`` in ``Lip_M(nu)`` (asserted by the caller)."""
    if not 0.0 < nu <= 1.0:
        raise ValueError(f"nu must lie in (0, 1], got {nu}")
    if not M > 0:
        raise ValueError(f"M must be positive, got {M}")
    xs = np.asarray(_check_x(xs), dtype=float).ravel()
    lhs = _lhs(spec, f, xs)
    d2 = np.maximum(np.atleast_1d(delta_m_squared_direct(spec, xs)), 0.0)
    rows = []
    for x, l, s in zip(xs, lhs, d2):
        rhs = M * s ** (nu / 2.0)
        tol = tolerance(rhs) if callable(tolerance) else (default_tolerance(rhs) if tolerance is None else tolerance)
        rows.append(BoundRow(float(x), float(l), float(rhs), float(math.sqrt(s)), bool(l <= rhs + tol)))
    return BoundReport("lipschitz", rows, "exact",
                       {"function": f.name, "m": spec.m, "ell": spec.ell, "p": spec.params.p,
                        "q": spec.params.q, "M": M, "nu": nu})
