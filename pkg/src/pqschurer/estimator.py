"""scikit-learn compatible wrappers around the operator.

``PQSchurerBasis`` expands a single feature ``x`` in ``[0, 1]`` into the
``m + ell + 1`` normalized basis values, the same way ``SplineTransformer``
expands into B-splines.  ``PQSchurerApproximator`` learns a function from
samples on ``[0, ell + 1]`` and predicts ``B(f; x)``.
"""
from __future__ import annotations

import numbers

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .calculus import PQParams
from .functions import sampled_function
from .operator import OperatorSpec, operator_nodes, weight_matrix

__all__ = [
    "PQSchurerBasis",
    "PQSchurerApproximator",
    "check_operator_params",
    "check_unit_interval",
]


def check_operator_params(m, ell, p, q) -> OperatorSpec:
    """Validate hyperparameters and build the matching :class:`OperatorSpec`."""
    for name, value in (("m", m), ("ell", ell)):
        if isinstance(value, bool) or not isinstance(value, numbers.Integral):
            raise TypeError(f"{name} must be an integer, got {value!r}")
    for name, value in (("p", p), ("q", q)):
        if isinstance(value, bool) or not isinstance(value, numbers.Real):
            raise TypeError(f"{name} must be a real number, got {value!r}")
    return OperatorSpec(int(m), int(ell), PQParams(float(p), float(q)))


def check_unit_interval(X) -> np.ndarray:
    """Return ``X`` as a flat float array after checking it is one feature
    with every value in ``[0, 1]``."""
    X = check_array(X, ensure_2d=False, dtype=np.float64)
    if X.ndim == 2:
        if X.shape[1] != 1:
            raise ValueError(f"expected a single feature, got {X.shape[1]}")
        X = X[:, 0]
    if np.any(X < 0.0) or np.any(X > 1.0):
        raise ValueError("operator inputs must lie in [0, 1]")
    return X


class PQSchurerBasis(TransformerMixin, BaseEstimator):
    """Feature expansion into the revised (p,q)-Bernstein-Schurer basis.

    Parameters
    ----------
    m : int, default=8
        Degree parameter, ``m >= 1``.
    ell : int, default=0
        Schurer shift; the basis has ``m + ell + 1`` functions.
    p, q : float, default=1.0, 0.9
        Deformation pair with ``0 < q < p <= 1``.

    Attributes
    ----------
    nodes_ : ndarray of shape (m + ell + 1,)
        Points in ``[0, ell + 1]`` where the approximated function is sampled.
    n_features_in_ : int
    """

    def __init__(self, m=8, ell=0, p=1.0, q=0.9):
        self.m = m
        self.ell = ell
        self.p = p
        self.q = q

    def fit(self, X, y=None):
        X = check_unit_interval(X)
        self.spec_ = check_operator_params(self.m, self.ell, self.p, self.q)
        self.nodes_ = operator_nodes(self.spec_)
        self.n_features_in_ = 1
        return self

    def transform(self, X):
        check_is_fitted(self, "spec_")
        return weight_matrix(self.spec_, check_unit_interval(X))

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "spec_")
        stem = "x0" if input_features is None else str(input_features[0])
        return np.array([f"{stem}_pqbs{k}" for k in range(self.spec_.degree + 1)], dtype=object)


class PQSchurerApproximator(RegressorMixin, BaseEstimator):
    """Approximate a function sampled on ``[0, ell + 1]`` by the operator.

    ``fit`` takes samples ``(t_i, f(t_i))``; the function is interpolated
    linearly (constant beyond the samples) and read off at the operator
    nodes.  ``predict`` returns ``B(f; x)`` for ``x`` in ``[0, 1]``.
    """

    def __init__(self, m=8, ell=0, p=1.0, q=0.9):
        self.m = m
        self.ell = ell
        self.p = p
        self.q = q

    def fit(self, X, y):
        X, y = check_X_y(X, y, ensure_2d=False, dtype=np.float64, y_numeric=True)
        if X.ndim == 2:
            if X.shape[1] != 1:
                raise ValueError(f"expected a single feature, got {X.shape[1]}")
            X = X[:, 0]
        self.spec_ = check_operator_params(self.m, self.ell, self.p, self.q)
        lo, hi = self.spec_.domain
        if np.any(X < lo) or np.any(X > hi):
            raise ValueError(f"training inputs must lie in [{lo}, {hi}]")
        self.function_ = sampled_function(X, y, self.spec_.ell, name="fitted")
        self.nodes_ = operator_nodes(self.spec_)
        self.node_values_ = np.asarray(self.function_(self.nodes_), dtype=float)
        self.n_features_in_ = 1
        return self

    def predict(self, X):
        check_is_fitted(self, "node_values_")
        return weight_matrix(self.spec_, check_unit_interval(X)) @ self.node_values_
