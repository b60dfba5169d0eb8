"""Estimator-style front ends.

``SymmetricTensorAlgebra`` fits to a fan and transforms points of
Phi^{-1}(0) into the values of the invariant generators.
``HypertoricGIT`` fits to a weight matrix A and predicts theta-semistability
of phase points.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .coxring import PresentationKind, cox_presentation
from .fan import build_exact_sequence, select_sigma1
from .hypertoric import (
    HypertoricProblem,
    PhasePoint,
    central_fiber_components,
    hypertoric_generators,
    is_generic,
    is_semistable,
    is_unimodular,
    moment_eval,
)
from .tensors import generator_report, graded_dims
from .validation import (
    check_fan,
    check_int_matrix,
    check_is_fitted,
    check_points,
    check_positive_int,
)


def _monomial_values(monomials, points) -> np.ndarray:
    out = np.empty((len(points), len(monomials)), dtype=object)
    for r, (z, w) in enumerate(points):
        coords = z + w
        for c, m in enumerate(monomials):
            v = Fraction(1)
            for x, e in zip(coords, m.exponents):
                if e:
                    v *= x**e
            out[r, c] = v
    return out


class SymmetricTensorAlgebra(BaseEstimator, TransformerMixin):
    """Graded dimensions and generators of S(X) for a smooth complete fan.

    Parameters
    ----------
    p_max : int
        Highest fiber degree for ``dims_``.
    presentation : {"R", "Rprime"}
        Presentation used for the dimension count and the generators.
    degree_bound : int
        Fiber degree up to which generators are enumerated.
    """

    def __init__(self, p_max=3, presentation="Rprime", degree_bound=2):
        self.p_max = p_max
        self.presentation = presentation
        self.degree_bound = degree_bound

    def fit(self, X, y=None):
        p_max = check_positive_int(self.p_max, "p_max")
        bound = check_positive_int(self.degree_bound, "degree_bound", 1)
        kind = PresentationKind.parse(self.presentation)
        fan = check_fan(X)
        esd = build_exact_sequence(fan)
        pairing = select_sigma1(fan)
        self.fan_ = fan
        self.exact_sequence_ = esd
        self.pairing_ = pairing
        self.presentation_ = cox_presentation(fan, pairing, kind, esd=esd)
        self.dims_ = graded_dims(fan, kind, p_max, esd=esd, pairing=pairing)
        self.generators_ = generator_report(esd, pairing, bound, kind, f=fan)
        self.n_features_in_ = 2 * fan.n_rays
        return self

    def transform(self, X):
        """Generator values at rows (S_1..S_N, T_1..T_N) of coordinates."""
        check_is_fitted(self, ["generators_"])
        points = check_points(X, self.fan_.n_rays)
        return _monomial_values(self.generators_.generators, points)

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, ["generators_"])
        return np.array([self.presentation_.format_monomial(g.exponents) for g in self.generators_.generators], dtype=object)


class HypertoricGIT(BaseEstimator, TransformerMixin):
    """theta-semistability and moment map for the torus with weight matrix A.

    ``predict`` flags semistable points, ``transform`` evaluates the moment
    map sum_i a_i z_i w_i.
    """

    def __init__(self, theta=None, xi=None, degree_bound=2):
        self.theta = theta
        self.xi = xi
        self.degree_bound = degree_bound

    def fit(self, X, y=None):
        A = check_int_matrix(X)
        bound = check_positive_int(self.degree_bound, "degree_bound", 1)
        self.problem_ = HypertoricProblem(A, self.theta, self.xi)
        self.unimodular_ = is_unimodular(A)
        self.genericity_ = is_generic(self.problem_)
        self.generators_ = hypertoric_generators(self.problem_, bound)
        self.components_ = (
            central_fiber_components(self.problem_, self.generators_) if not any(self.problem_.xi) else []
        )
        self.n_features_in_ = 2 * A.shape[1]
        return self

    def _points(self, X):
        check_is_fitted(self, ["problem_"])
        return [PhasePoint(z, w) for z, w in check_points(X, self.problem_.n_coords)]

    def predict(self, X):
        return np.array([is_semistable(self.problem_, p) for p in self._points(X)], dtype=bool)

    def transform(self, X):
        pts = self._points(X)
        out = np.empty((len(pts), self.problem_.rank), dtype=object)
        for i, p in enumerate(pts):
            out[i, :] = moment_eval(self.problem_, p)
        return out
