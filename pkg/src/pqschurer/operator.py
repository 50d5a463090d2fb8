"""The revised (p,q)-Bernstein-Schurer operator and its reference relatives.

For ``n = m + ell`` and ``x`` in ``[0, 1]`` the operator is

    B(f; x) = p^(-n(n-1)/2) sum_k [n choose k]_{p,q} p^(k(k-1)/2) x^k
              prod_{s<n-k} (p^s - q^s x) f([k] p^(n-k) / [m]).

Collecting powers of ``p`` shows that the normalizer cancels exactly:
with ``r = q/p`` each weight equals ``[n choose k]_r x^k prod_{s<n-k}
(1 - r^s x)`` and each node equals ``p^ell [k]_r / [m]_r``.  The weights
are built from that form in log space, so no factor like
``p^(n(n-1)/2)`` is ever formed and large degrees do not underflow.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .calculus import (
    MAX_DEGREE,
    PQParams,
    falling_product,
    log_pq_binomials,
    pq_binomial,
    pq_integers,
)
from .functions import FunctionHandle

__all__ = [
    "OperatorSpec",
    "WeightTable",
    "weight_table",
    "weight_matrix",
    "operator_nodes",
    "evaluate",
    "evaluate_grid",
    "evaluate_unnormalized",
    "q_schurer_evaluate",
    "classical_schurer_evaluate",
]


@dataclass(frozen=True)
class OperatorSpec:
    """One concrete operator: degree parameter ``m``, Schurer shift ``ell``
    and deformation ``params``."""

    m: int
    ell: int
    params: PQParams

    def __post_init__(self):
        for name in ("m", "ell"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
                raise TypeError(f"{name} must be an integer")
            object.__setattr__(self, name, int(v))
        if self.m < 1:
            raise ValueError(f"m must be >= 1, got {self.m}")
        if self.ell < 0:
            raise ValueError(f"ell must be >= 0, got {self.ell}")
        if self.m + self.ell > MAX_DEGREE:
            raise ValueError(f"m+ell={self.m + self.ell} exceeds ceiling {MAX_DEGREE}")
        if not isinstance(self.params, PQParams):
            raise TypeError("params must be a PQParams")

    @classmethod
    def from_values(cls, m: int, ell: int, p: float, q: float) -> "OperatorSpec":
        return cls(m, ell, PQParams(p, q))

    @property
    def degree(self) -> int:
        """``m + ell``, the number of basis functions minus one."""
        return self.m + self.ell

    @property
    def domain(self) -> tuple[float, float]:
        return (0.0, float(self.ell + 1))


@dataclass(frozen=True)
class WeightTable:
    weights: np.ndarray
    nodes: np.ndarray
    x: float


def _check_x(x) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("x must be finite")
    if np.any(arr < 0.0) or np.any(arr > 1.0):
        raise ValueError("x must lie in [0, 1]")
    return arr


def operator_nodes(spec: OperatorSpec) -> np.ndarray:
    """Sample points ``[k] p^(n-k) / [m]``, computed as ``p^ell [k]_r / [m]_r``."""
    r_params = PQParams(1.0, spec.params.ratio)
    ints = pq_integers(spec.degree, r_params)
    return spec.params.p**spec.ell * ints / ints[spec.m]


def _log_falling_sums(x: float, n: int, r: float) -> np.ndarray:
    """``S[j] = sum_{s<j} log(1 - r^s x)`` for ``j = 0..n``."""
    terms = np.log1p(-(r ** np.arange(n)) * x)
    return np.concatenate(([0.0], np.cumsum(terms)))


def _weights(spec: OperatorSpec, x: float, log_binom: np.ndarray) -> np.ndarray:
    n = spec.degree
    w = np.zeros(n + 1)
    if x == 0.0:
        w[0] = 1.0
        return w
    if x == 1.0:
        w[n] = 1.0
        return w
    k = np.arange(n + 1)
    falling = _log_falling_sums(x, n, spec.params.ratio)
    return np.exp(log_binom + k * math.log(x) + falling[n - k])


def weight_table(spec: OperatorSpec, x: float) -> WeightTable:
    """Normalized basis values and nodes of ``spec`` at one point ``x``."""
    x = float(_check_x(x))
    log_binom = log_pq_binomials(spec.degree, PQParams(1.0, spec.params.ratio))
    return WeightTable(_weights(spec, x, log_binom), operator_nodes(spec), x)


def weight_matrix(spec: OperatorSpec, xs) -> np.ndarray:
    """Weights for many points at once, shape ``(len(xs), m+ell+1)``."""
    xs = np.atleast_1d(_check_x(xs)).ravel()
    log_binom = log_pq_binomials(spec.degree, PQParams(1.0, spec.params.ratio))
    out = np.empty((xs.size, spec.degree + 1))
    for i, x in enumerate(xs):
        out[i] = _weights(spec, float(x), log_binom)
    return out


def evaluate(spec: OperatorSpec, f: FunctionHandle, x: float) -> float:
    table = weight_table(spec, x)
    values = np.asarray(f(table.nodes), dtype=float)
    return float(math.fsum(table.weights * values))


def evaluate_grid(spec: OperatorSpec, f: FunctionHandle, xs: Iterable[float]) -> np.ndarray:
    """Operator values at every point of ``xs``, order preserved."""
    xs = np.asarray(list(xs) if not isinstance(xs, np.ndarray) else xs, dtype=float)
    if xs.size == 0:
        return np.zeros(0)
    w = weight_matrix(spec, xs)
    values = np.asarray(f(operator_nodes(spec)), dtype=float)
    return np.array([math.fsum(row * values) for row in w])


def evaluate_unnormalized(spec: OperatorSpec, f: FunctionHandle, x: float,
                          variant: str = "schurer_eq6") -> float:
    """The earlier operators without the p-power normalizer.

    ``schurer_eq6``: degree ``m+ell``, nodes ``[k]/[m]``.
    ``bernstein_eq4``: the Bernstein form, only defined for ``ell = 0``.

    For ``p < 1`` these do not reproduce constants; they are kept only
    as regression witnesses for that defect.
    """
    if variant not in ("schurer_eq6", "bernstein_eq4"):
        raise ValueError(f"unknown variant {variant!r}")
    if variant == "bernstein_eq4" and spec.ell != 0:
        raise ValueError("bernstein_eq4 has no Schurer shift; ell must be 0")
    x = float(_check_x(x))
    n = spec.degree
    ints = pq_integers(n, spec.params)
    nodes = ints / ints[spec.m]
    values = np.asarray(f(nodes), dtype=float)
    terms = [
        pq_binomial(n, k, spec.params) * x**k * falling_product(x, n - k, spec.params) * values[k]
        for k in range(n + 1)
    ]
    return math.fsum(terms)


def _check_q_schurer(m: int, ell: int):
    if m < 1 or ell < 0:
        raise ValueError(f"require m >= 1 and ell >= 0, got m={m}, ell={ell}")


def q_schurer_evaluate(m: int, ell: int, q: float, f: FunctionHandle, x: float) -> float:
    """The q-Bernstein-Schurer operator, built independently of :func:`evaluate`.

    Gaussian binomials come from the q-Pascal rule and the product
    ``prod (1 - q^s x)`` is multiplied out directly.
    """
    _check_q_schurer(m, ell)
    if not 0.0 < q < 1.0:
        raise ValueError(f"q must lie in (0, 1), got {q}")
    x = float(_check_x(x))
    n = m + ell
    # [n choose k]_q via C(i, k) = C(i-1, k-1) + q^k C(i-1, k)
    row = [1.0]
    for i in range(1, n + 1):
        new = [1.0] * (i + 1)
        for k in range(1, i):
            new[k] = row[k - 1] + q**k * row[k]
        row = new
    q_int = lambda j: sum(q**i for i in range(j))  # noqa: E731
    total = []
    for k in range(n + 1):
        prod = 1.0
        for s in range(n - k):
            prod *= 1.0 - q**s * x
        total.append(row[k] * x**k * prod * float(f(q_int(k) / q_int(m))))
    return math.fsum(total)


def classical_schurer_evaluate(m: int, ell: int, f: FunctionHandle, x: float) -> float:
    """The ordinary Schurer operator with nodes ``k/m``."""
    _check_q_schurer(m, ell)
    x = float(_check_x(x))
    n = m + ell
    terms = [math.comb(n, k) * x**k * (1.0 - x) ** (n - k) * float(f(k / m)) for k in range(n + 1)]
    return math.fsum(terms)
