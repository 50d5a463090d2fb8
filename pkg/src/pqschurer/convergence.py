"""Parameter schedules ``m -> (p_m, q_m)`` and convergence experiments."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .calculus import PQParams, pq_integer
from .functions import FunctionHandle
from .moments import (
    DEFAULT_GRID,
    delta_m,
    delta_m_squared_direct,
    modulus_upper_estimate,
    second_modulus,
)
from .operator import OperatorSpec, evaluate_grid

__all__ = [
    "DEFAULT_M_VALUES",
    "DEFAULT_X_GRID",
    "SCHEDULE_KINDS",
    "ParamSchedule",
    "ConvergenceRow",
    "ConvergenceReport",
    "make_schedule",
    "parse_schedule",
    "korovkin_experiment",
    "voronovskaja_experiment",
    "omega2_ratio_experiment",
]

DEFAULT_M_VALUES = (4, 8, 16, 32, 64, 128)
DEFAULT_X_GRID = 101
SCHEDULE_KINDS = ("power_root", "one_minus_inverse", "custom")

# points with |f''(x)| below this are left out of the lambda fit
_CURVATURE_FLOOR = 0.1
_OMEGA2_FLOOR = 1e-15
_ROUNDING = 1e-12


@dataclass(frozen=True)
class ParamSchedule:
    """A sequence of deformation pairs indexed by ``m >= 1``."""

    kind: str
    alpha: float = 0.0
    beta: float = 0.0
    p_fn: Optional[Callable[[int], float]] = field(default=None, compare=False)
    q_fn: Optional[Callable[[int], float]] = field(default=None, compare=False)

    def params(self, m: int) -> PQParams:
        if m < 1:
            raise ValueError(f"schedules are indexed by m >= 1, got {m}")
        if self.kind == "power_root":
            p, q = self.alpha ** (1.0 / m), self.beta ** (1.0 / m)
        elif self.kind == "one_minus_inverse":
            p, q = 1.0 - 1.0 / (m + 1) ** 2, 1.0 - 1.0 / (m + 1)
        else:
            p, q = float(self.p_fn(m)), float(self.q_fn(m))
        try:
            return PQParams(p, q)
        except ValueError as exc:
            raise ValueError(f"schedule {self.describe()} is invalid at m={m}: {exc}") from None

    def validate(self, m_values: Sequence[int]) -> None:
        for m in m_values:
            self.params(m)

    @property
    def p_power_limit(self) -> Optional[float]:
        """``lim p_m^m`` where known (``None`` for custom schedules)."""
        if self.kind == "power_root":
            return self.alpha
        if self.kind == "one_minus_inverse":
            return 1.0
        return None

    def describe(self) -> str:
        if self.kind == "power_root":
            return f"power_root:{self.alpha!r}:{self.beta!r}"
        return self.kind


def make_schedule(kind: str, alpha: float = 0.0, beta: float = 0.0,
                  p_fn=None, q_fn=None) -> ParamSchedule:
    """Build a schedule.

    ``power_root``: ``p_m = alpha^(1/m)``, ``q_m = beta^(1/m)``, so that
    ``p_m^m = alpha`` for every ``m``; needs ``0 < beta < alpha < 1``.
    ``one_minus_inverse``: ``p_m = 1 - 1/(m+1)^2``, ``q_m = 1 - 1/(m+1)``.
    ``custom``: ``p_fn`` and ``q_fn`` map ``m`` to the pair.
    """
    if kind == "power_root":
        alpha, beta = float(alpha), float(beta)
        if not 0.0 <= beta < alpha < 1.0:
            raise ValueError(f"power_root needs 0 <= beta < alpha < 1, got alpha={alpha}, beta={beta}")
        if beta == 0.0:
            raise ValueError("power_root with beta = 0 gives q_m = 0, outside 0 < q < p")
        return ParamSchedule(kind, alpha, beta)
    if kind == "one_minus_inverse":
        return ParamSchedule(kind)
    if kind == "custom":
        if p_fn is None or q_fn is None:
            raise ValueError("custom schedules need p_fn and q_fn")
        return ParamSchedule(kind, p_fn=p_fn, q_fn=q_fn)
    raise ValueError(f"unknown schedule kind {kind!r}; expected one of {SCHEDULE_KINDS[:2]}")


def parse_schedule(text: str) -> ParamSchedule:
    """Parse ``kind[:alpha:beta]`` as used on the command line."""
    parts = text.split(":")
    kind = parts[0]
    if kind == "power_root":
        if len(parts) != 3:
            raise ValueError("power_root needs the form power_root:alpha:beta")
        return make_schedule(kind, float(parts[1]), float(parts[2]))
    if kind == "one_minus_inverse" and len(parts) in (1, 3):
        return make_schedule(kind)
    raise ValueError(f"cannot parse schedule {text!r}")


@dataclass
class ConvergenceRow:
    m: int
    p_m: float
    q_m: float
    sup_error: float
    bound: Optional[float] = None
    scaled_sup: Optional[float] = None
    extras: dict = field(default_factory=dict)

    def as_record(self) -> dict:
        rec = {"m": self.m, "p_m": self.p_m, "q_m": self.q_m, "sup_error": self.sup_error,
               "bound": self.bound, "scaled_sup": self.scaled_sup}
        rec.update(self.extras)
        return rec


@dataclass
class ConvergenceReport:
    experiment: str
    rows: list[ConvergenceRow]
    metadata: dict = field(default_factory=dict)

    def column(self, name: str) -> np.ndarray:
        return np.array([r.as_record()[name] for r in self.rows], dtype=float)

    @property
    def columns(self) -> list[str]:
        return list(self.rows[0].as_record()) if self.rows else []

    def as_records(self) -> list[dict]:
        return [r.as_record() for r in self.rows]


def _prepare(schedule: ParamSchedule, m_values: Sequence[int], grid: int):
    m_values = [int(m) for m in m_values]
    if not m_values:
        raise ValueError("m_values is empty")
    if any(b <= a for a, b in zip(m_values, m_values[1:])):
        raise ValueError("m_values must be strictly increasing")
    if grid < 2:
        raise ValueError("grid must have at least two points")
    schedule.validate(m_values)
    return m_values, np.linspace(0.0, 1.0, grid)


def _metadata(schedule, ell, f, grid, **extra):
    return {"schedule": schedule.describe(), "ell": ell, "function": f.name, "grid": grid, **extra}


def korovkin_experiment(schedule: ParamSchedule, ell: int, f: FunctionHandle,
                        m_values: Sequence[int] = DEFAULT_M_VALUES, grid: int = DEFAULT_X_GRID,
                        omega_grid: int = DEFAULT_GRID) -> ConvergenceReport:
    """Uniform error of ``B_m f`` along the schedule.

    Per row: ``sup_error = max |B f - f|`` over the grid, ``bound`` the
    largest ``2 omega(f, delta_m(x))``, ``scaled_sup = [m] * sup_error``
    and, in ``extras``, the test-function errors ``sup |B e_j - x^j|``.
    """
    m_values, xs = _prepare(schedule, m_values, grid)
    fx = np.asarray(f(xs), dtype=float)
    powers = [np.ones_like(xs), xs, xs**2]
    basis = [np.polynomial.Polynomial([0.0] * j + [1.0]) for j in range(3)]
    rows = []
    for m in m_values:
        prm = schedule.params(m)
        spec = OperatorSpec(m, ell, prm)
        err = float(np.max(np.abs(evaluate_grid(spec, f, xs) - fx)))
        deltas = np.atleast_1d(delta_m(spec, xs))
        d_max = float(deltas.max())
        # omega is nondecreasing in delta, so the widest radius gives the largest bound
        bound = 2.0 * modulus_upper_estimate(f, d_max, spec.domain, omega_grid)[0] if d_max > 0 else 0.0
        extras = {}
        for j, (poly, target) in enumerate(zip(basis, powers)):
            handle = FunctionHandle(f"e{j}", poly, spec.domain)
            extras[f"e{j}_error"] = float(np.max(np.abs(evaluate_grid(spec, handle, xs) - target)))
        rows.append(ConvergenceRow(m, prm.p, prm.q, err, bound, pq_integer(m, prm) * err, extras))
    return ConvergenceReport("korovkin", rows, _metadata(schedule, ell, f, grid))


def _fit_lambda(xs: np.ndarray, y: np.ndarray, alpha: float) -> float:
    """Least-squares ``lambda`` for ``y ~ x (lambda - alpha x)``."""
    return float(np.sum(xs * (y + alpha * xs**2)) / np.sum(xs**2))


def voronovskaja_experiment(schedule: ParamSchedule, ell: int, f: FunctionHandle,
                            m_values: Sequence[int] = DEFAULT_M_VALUES, grid: int = DEFAULT_X_GRID,
                            alpha: Optional[float] = None) -> ConvergenceReport:
    """Scaled error ``[m] (B f - f)`` and the fitted constant ``lambda``.

    For each ``m`` the values ``2 [m] (B f - f) / f''`` at points with
    ``|f''| > 0.1`` are fitted to ``x (lambda - alpha x)`` with ``alpha =
    lim p_m^m``.  ``extras`` holds ``lambda_hat`` and
    ``cauchy_increment = |lambda_hat_m - lambda_hat_prev|``; when no grid
    point has enough curvature the fit is skipped and both are ``None``.
    """
    if f.second_derivative is None:
        raise ValueError(f"{f.name} has no registered second derivative")
    m_values, xs = _prepare(schedule, m_values, grid)
    alpha = schedule.p_power_limit if alpha is None else float(alpha)
    if alpha is None:
        raise ValueError("alpha must be given for schedules without a known limit of p_m^m")
    fx = np.asarray(f(xs), dtype=float)
    f2 = np.asarray(f.second_derivative(xs), dtype=float) * np.ones_like(xs)
    mask = (np.abs(f2) > _CURVATURE_FLOOR) & (xs > 0)
    rows, prev = [], None
    for m in m_values:
        prm = schedule.params(m)
        spec = OperatorSpec(m, ell, prm)
        diff = evaluate_grid(spec, f, xs) - fx
        scaled = pq_integer(m, prm) * diff
        lam = inc = None
        if mask.any():
            lam = _fit_lambda(xs[mask], 2.0 * scaled[mask] / f2[mask], alpha)
            inc = None if prev is None else abs(lam - prev)
            prev = lam
        rows.append(ConvergenceRow(m, prm.p, prm.q, float(np.max(np.abs(diff))), None,
                                   float(np.max(np.abs(scaled))),
                                   {"lambda_hat": lam, "cauchy_increment": inc}))
    return ConvergenceReport("voronovskaja", rows, _metadata(schedule, ell, f, grid, alpha=alpha))


def omega2_ratio_experiment(schedule: ParamSchedule, ell: int, f: FunctionHandle,
                            m_values: Sequence[int] = DEFAULT_M_VALUES, grid: int = DEFAULT_X_GRID,
                            omega_grid: int = DEFAULT_GRID) -> ConvergenceReport:
    """Ratio of the bias-corrected error to the second modulus.

    For each grid point the numerator is ``|B f - f - x f'(x) ([n]/[m] - 1)|``
    and the denominator ``omega_2(f, delta_m(x))`` with
    ``delta_m(x)^2`` the second central moment, floored at ``1e-15``.
    Points where ``delta_m(x) = 0`` contribute a ratio of zero, as do
    points where numerator and modulus are both at rounding level
    (``1e-12`` times the largest ``|f|`` on the grid, at least ``1e-12``).
    ``extras["max_ratio"]`` is the largest ratio over the grid and
    ``bound`` the largest second modulus.
    """
    if f.derivative is None:
        raise ValueError(f"{f.name} has no registered derivative")
    m_values, xs = _prepare(schedule, m_values, grid)
    fx = np.asarray(f(xs), dtype=float)
    f1 = np.asarray(f.derivative(xs), dtype=float) * np.ones_like(xs)
    noise = _ROUNDING * max(1.0, float(np.max(np.abs(f(np.linspace(*f.domain, omega_grid))))))
    rows = []
    for m in m_values:
        prm = schedule.params(m)
        spec = OperatorSpec(m, ell, prm)
        bias = pq_integer(spec.degree, prm) / pq_integer(m, prm) - 1.0
        bx = evaluate_grid(spec, f, xs)
        numer = np.abs(bx - fx - xs * f1 * bias)
        radii = np.sqrt(np.maximum(np.atleast_1d(delta_m_squared_direct(spec, xs)), 0.0))
        omegas = np.array([second_modulus(f, float(r), spec.domain, omega_grid) if r > 0 else 0.0
                           for r in radii])
        negligible = (radii == 0) | ((numer <= noise) & (omegas <= noise))
        ratios = np.where(negligible, 0.0, numer / np.maximum(omegas, _OMEGA2_FLOOR))
        rows.append(ConvergenceRow(m, prm.p, prm.q, float(np.max(np.abs(bx - fx))), float(omegas.max()),
                                   pq_integer(m, prm) * float(np.max(np.abs(bx - fx))),
                                   {"max_ratio": float(ratios.max())}))
    return ConvergenceReport("omega2", rows, _metadata(schedule, ell, f, grid))
