"""Named test functions on ``[0, ell+1]`` and CSV-sampled functions."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

import numpy as np

__all__ = [
    "FunctionHandle",
    "REGISTRY_NAMES",
    "resolve_function",
    "constant",
    "polynomial",
    "sampled_function",
    "load_sampled_function",
]

REGISTRY_NAMES = ("e0", "e1", "e2", "e3", "exp", "sin_scaled", "abs_half", "sqrt_abs")


@dataclass(frozen=True)
class FunctionHandle:
    """A real function on ``domain`` with optional derivatives.

    ``holder`` is ``(M, nu)`` when ``|f(t) - f(s)| <= M |t - s|^nu`` is
    known on the domain; bound checks use it to correct grid estimates of
    the modulus of continuity.
    """

    name: str
    evaluator: Callable[[np.ndarray], np.ndarray]
    domain: tuple[float, float] = (0.0, 1.0)
    derivative: Optional[Callable[[np.ndarray], np.ndarray]] = None
    second_derivative: Optional[Callable[[np.ndarray], np.ndarray]] = None
    holder: Optional[tuple[float, float]] = None
    meta: dict = field(default_factory=dict, compare=False)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.asarray(self.evaluator(t), dtype=float)
        if out.shape != t.shape:
            out = np.broadcast_to(out, t.shape).copy()
        if not np.all(np.isfinite(out)):
            raise ValueError(f"function {self.name!r} produced non-finite values")
        return out if out.ndim else float(out)

    def with_domain(self, domain) -> "FunctionHandle":
        return FunctionHandle(self.name, self.evaluator, tuple(map(float, domain)),
                              self.derivative, self.second_derivative, self.holder, self.meta)


def constant(c: float, domain=(0.0, 1.0)) -> FunctionHandle:
    c = float(c)
    zero = lambda t: np.zeros_like(t)  # noqa: E731
    return FunctionHandle(f"const({c!r})", lambda t: np.full_like(t, c), tuple(domain),
                          zero, zero, (0.0, 1.0))


def polynomial(coeffs, domain=(0.0, 1.0), name: Optional[str] = None) -> FunctionHandle:
    """Polynomial with coefficients in increasing degree order."""
    poly = np.polynomial.Polynomial(np.asarray(coeffs, dtype=float))
    d1, d2 = poly.deriv(1), poly.deriv(2)
    a, b = map(float, domain)
    # sup |f'| on [a, b] through the extrema of f'
    crit = [r.real for r in d2.roots() if abs(r.imag) < 1e-12 and a <= r.real <= b] if d2.degree() > 0 else []
    lip = max(abs(d1(t)) for t in [a, b, *crit])
    return FunctionHandle(name or f"poly{tuple(coeffs)}", poly, (a, b), d1, d2, (float(lip), 1.0),
                          {"coeffs": list(coeffs)})


def _registry(name: str, ell: int) -> FunctionHandle:
    b = float(ell + 1)
    dom = (0.0, b)
    if name in ("e0", "e1", "e2", "e3"):
        j = int(name[1])
        f = polynomial([0.0] * j + [1.0], dom, name)
        return f
    if name == "exp":
        return FunctionHandle("exp", np.exp, dom, np.exp, np.exp, (math.exp(b), 1.0))
    if name == "sin_scaled":
        w = math.pi / (2.0 * b)
        return FunctionHandle(
            "sin_scaled",
            lambda t: np.sin(w * t),
            dom,
            lambda t: w * np.cos(w * t),
            lambda t: -w * w * np.sin(w * t),
            (w, 1.0),
        )
    if name == "abs_half":
        return FunctionHandle("abs_half", lambda t: np.abs(t - 0.5), dom, holder=(1.0, 1.0))
    if name == "sqrt_abs":
        return FunctionHandle("sqrt_abs", lambda t: np.sqrt(np.abs(t - 0.5)), dom, holder=(1.0, 0.5))
    raise KeyError(f"unknown function {name!r}; known: {', '.join(REGISTRY_NAMES)} or file:PATH")


def resolve_function(spec: str, ell: int = 0) -> FunctionHandle:
    """Look up a registry name or load ``file:PATH``; domain is ``[0, ell+1]``."""
    if spec.startswith("file:"):
        return load_sampled_function(spec[len("file:"):], ell)
    return _registry(spec, ell)


def sampled_function(xs, values, ell: int = 0, name: str = "sampled") -> FunctionHandle:
    """Piecewise-linear interpolant, constant beyond the sample range."""
    xs = np.asarray(xs, dtype=float)
    values = np.asarray(values, dtype=float)
    if xs.ndim != 1 or xs.shape != values.shape or xs.size < 1:
        raise ValueError("need matching one-dimensional x and value samples")
    if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(values))):
        raise ValueError("samples must be finite")
    order = np.argsort(xs, kind="stable")
    xs, values = xs[order], values[order]
    if np.any(np.diff(xs) == 0):
        raise ValueError("duplicate x samples")
    slopes = np.abs(np.diff(values) / np.diff(xs)) if xs.size > 1 else np.zeros(1)
    lip = float(slopes.max()) if slopes.size else 0.0
    return FunctionHandle(name, lambda t: np.interp(t, xs, values), (0.0, float(ell + 1)),
                          holder=(lip, 1.0), meta={"xs": xs, "values": values})


def load_sampled_function(path, ell: int = 0) -> FunctionHandle:
    """Read a two-column ``x,value`` CSV; a non-numeric first row is a header."""
    path = Path(path)
    xs, vals = [], []
    with path.open(newline="") as fh:
        for i, row in enumerate(csv.reader(fh)):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) < 2:
                raise ValueError(f"{path}:{i + 1}: expected two columns")
            try:
                x, v = float(row[0]), float(row[1])
            except ValueError:
                if i == 0:
                    continue
                raise ValueError(f"{path}:{i + 1}: non-numeric row {row!r}") from None
            xs.append(x)
            vals.append(v)
    return sampled_function(xs, vals, ell, name=f"file:{path}")
