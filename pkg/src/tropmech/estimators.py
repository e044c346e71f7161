"""scikit-learn style front end.

``X`` is always a type space given as an ``(r, m)`` array-like of exact
numbers (ints, Fractions, strings); ``y`` holds 0-based outcomes.  Exact
values are returned in ``dtype=object`` arrays of :class:`~fractions.Fraction`.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .arrangement import (
    cell_of,
    covector,
    default_budget,
    enumerate_ic_outcomes,
    generic_perturbation,
    is_generic,
)
from .exceptions import NotIC
from .mechanism import allocation_matrix, is_weakly_monotone
from .polytrope import Polytrope
from .tropical import NegativeCycleError, min_cycle_mean
from .validation import as_fraction, check_outcomes, check_point, check_type_space


def _object_array(rows):
    out = np.empty((len(rows), len(rows[0]) if rows else 0), dtype=object)
    for i, row in enumerate(rows):
        out[i, :] = list(row)
    return out


class ICMechanism(BaseEstimator):
    """Fit an outcome function on a type space and price it.

    Parameters
    ----------
    payment : array-like of length m, optional
        Payment vector used by :meth:`predict`.  Must be an IC payment of the
        fitted outcome function.  Defaults to the interior point of the IC
        payment set.

    Attributes
    ----------
    allocation_matrix_ : tuple of tuples of Fraction
    eigenvalue_ : Fraction
        Min-plus eigenvalue of the allocation matrix; zero iff IC.
    is_ic_ : bool
    weakly_monotone_ : bool
    payments_ : Polytrope or None
    payment_ : tuple of Fraction or None
    dimension_ : int or None
        Dimension of the payment set; zero means revenue equivalent.
    negative_cycle_ : list of int or None
    """

    def __init__(self, payment=None):
        self.payment = payment

    def fit(self, X, y):
        T = check_type_space(X)
        g = check_outcomes(y, T.r, T.m)
        self.n_features_in_ = T.m
        self.allocation_matrix_ = allocation_matrix(T, g)
        self.eigenvalue_ = min_cycle_mean(self.allocation_matrix_)
        self.is_ic_ = self.eigenvalue_ == 0
        self.weakly_monotone_ = is_weakly_monotone(T, g)
        self.negative_cycle_ = None
        self.payments_ = None
        self.payment_ = None
        self.dimension_ = None
        try:
            self.payments_ = Polytrope.from_constraints(self.allocation_matrix_)
        except NegativeCycleError as exc:
            self.negative_cycle_ = exc.cycle
            return self
        self.dimension_ = self.payments_.dimension()
        if self.payment is None:
            self.payment_ = self.payments_.interior_point()
        else:
            p = check_point(self.payment, T.m)
            if not self.payments_.contains(p):
                raise ValueError("payment is not incentive compatible for this outcome function")
            self.payment_ = p
        return self

    @property
    def revenue_equivalent_(self) -> bool:
        check_is_fitted(self, "is_ic_")
        return self.is_ic_ and self.dimension_ == 0

    def decision_function(self, X):
        """Utility ``t_j - p_j`` of each outcome for each type."""
        check_is_fitted(self, "is_ic_")
        if not self.is_ic_:
            raise NotIC(self.negative_cycle_, message="outcome function is not IC; no payment")
        T = check_type_space(X, self.n_features_in_)
        p = self.payment_
        return _object_array([[t[j] - p[j] for j in range(T.m)] for t in T])

    def predict(self, X):
        """Outcome a utility-maximizing agent picks; ties go to the lowest index."""
        U = self.decision_function(X)
        out = np.empty(U.shape[0], dtype=int)
        for i, row in enumerate(U):
            best = max(row)
            out[i] = next(j for j, u in enumerate(row) if u == best)
        return out


class BasicCells(BaseEstimator):
    """Enumerate the basic cells of a type space.

    Parameters
    ----------
    budget : int, optional
        Maximum number of assignments ``m**r``; defaults to ``TROPMECH_BUDGET``
        or 2,000,000.

    Attributes
    ----------
    cells_ : BasicCellSet
    n_ic_outcomes_ : int
    bound_ : int
    generic_ : bool
    """

    def __init__(self, budget=None):
        self.budget = budget

    def fit(self, X, y=None):
        T = check_type_space(X)
        budget = default_budget() if self.budget is None else self.budget
        self.type_space_ = T
        self.n_features_in_ = T.m
        self.cells_ = enumerate_ic_outcomes(T, budget)
        self.n_ic_outcomes_ = self.cells_.count
        self.bound_ = self.cells_.bound
        self.generic_ = is_generic(T)
        return self

    def predict(self, P):
        """Index of a basic cell containing each payment point, -1 if none."""
        check_is_fitted(self, "cells_")
        return np.array([cell_of(self.cells_, p) for p in P], dtype=int)

    def covectors(self, P):
        """Boolean array of shape ``(n, m, r)``."""
        check_is_fitted(self, "cells_")
        return np.array([covector(self.type_space_, p) for p in P], dtype=bool)


class GenericPerturbation(TransformerMixin, BaseEstimator):
    """Move each type by at most ``epsilon`` so the type space becomes generic."""

    def __init__(self, epsilon="1/100", attempt_limit=64):
        self.epsilon = epsilon
        self.attempt_limit = attempt_limit

    def fit(self, X, y=None):
        T = check_type_space(X)
        if as_fraction(self.epsilon) <= 0:
            raise ValueError("epsilon must be positive")
        self.n_features_in_ = T.m
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        T = check_type_space(X, self.n_features_in_)
        Tp = generic_perturbation(T, self.epsilon, self.attempt_limit)
        return _object_array(Tp.points)
