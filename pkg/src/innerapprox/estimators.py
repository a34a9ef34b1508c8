"""Estimator-style wrappers (``fit`` / ``predict`` / ``transform``) around the pipelines.

``fit`` takes the function to be approximated rather than a data matrix;
``predict`` evaluates the fitted approximant at points of the disc and returns
an ``(n, N, N)`` stack.  Hyper-parameters live in ``__init__`` so that
``get_params`` / ``set_params`` / ``clone`` work as usual.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .core import BidiscSplit, Colligation, MatrixPolynomial, transfer_on_points
from .dilation import (
    bidisc_transfer,
    circle_unitarity_defect,
    inner_approximant_bidisc,
    unitary_dilation,
)
from .hull import fisher_pipeline
from .indefinite import SignatureSpace, pg_inverse_values, pg_values
from .potapov import BlaschkePotapovProduct
from .realization import contractive_realization
from .validation import check_depth, check_matrix_stack, check_points


def _as_colligation(f) -> Colligation:
    if isinstance(f, Colligation):
        return f
    if isinstance(f, BlaschkePotapovProduct):
        return f.as_colligation()
    if isinstance(f, MatrixPolynomial):
        return contractive_realization(f)
    raise TypeError(f"expected a colligation, polynomial or product, got {type(f).__name__}")


class ContractiveRealization(BaseEstimator):
    """Fit a contractive colligation to a matrix polynomial."""

    def __init__(self, sample_count: int | None = None, rank_tol: float = 1e-10):
        self.sample_count = sample_count
        self.rank_tol = rank_tol

    def fit(self, p: MatrixPolynomial, y=None):
        if not isinstance(p, MatrixPolynomial):
            raise TypeError("ContractiveRealization.fit expects a MatrixPolynomial")
        self.colligation_ = contractive_realization(p, self.sample_count, self.rank_tol)
        self.n_state_ = self.colligation_.n_state
        return self

    def predict(self, zs) -> np.ndarray:
        check_is_fitted(self, "colligation_")
        return transfer_on_points(self.colligation_, check_points(zs, closed=False))


class InnerApproximant(BaseEstimator):
    """Depth-``m`` rational inner approximant on the disc, or the bidisc when ``split`` is set."""

    def __init__(self, m: int = 8, split: tuple[int, int] | None = None):
        self.m = m
        self.split = split

    def fit(self, f, y=None):
        m = check_depth(self.m)
        col = _as_colligation(f)
        self.base_ = col
        if self.split is None:
            self.dilation_ = unitary_dilation(col, m)
            self.approximant_ = self.dilation_.unitary
        else:
            split = BidiscSplit(*self.split)
            self.approximant_ = inner_approximant_bidisc(col, split, m)
            self.base_ = bidisc_transfer(col, split)
        return self

    def predict(self, zs) -> np.ndarray:
        check_is_fitted(self, "approximant_")
        if self.split is None:
            return transfer_on_points(self.approximant_, check_points(zs))
        return self.approximant_.evaluate_many(check_points(zs, allow_pairs=True).reshape(-1, 2))

    def score(self, zs, y=None) -> float:
        """Negative sampled sup distance to the fitted function (higher is better)."""
        check_is_fitted(self, "approximant_")
        if self.split is None:
            base = transfer_on_points(self.base_, check_points(zs))
        else:
            base = self.base_.evaluate_many(check_points(zs, allow_pairs=True).reshape(-1, 2))
        return -float(np.linalg.norm(self.predict(zs) - base, 2, axis=(1, 2)).max())

    def unitarity_defect(self, grid: int = 256) -> float:
        check_is_fitted(self, "approximant_")
        if self.split is not None:
            raise NotImplementedError("use the torus check for bidisc approximants")
        return circle_unitarity_defect(self.approximant_, grid)


class FisherDecomposition(BaseEstimator):
    """Convex combination of rational inner functions within ``eps`` of a contractive function."""

    def __init__(self, eps: float = 0.1, budget: int = 256, seed: int = 0):
        self.eps = eps
        self.budget = budget
        self.seed = seed

    def fit(self, f, y=None):
        self.combination_ = fisher_pipeline(f, self.eps, budget=self.budget, seed=self.seed)
        self.residual_ = self.combination_.residual
        self.n_atoms_ = len(self.combination_)
        return self

    def predict(self, zs) -> np.ndarray:
        check_is_fitted(self, "combination_")
        return self.combination_.evaluate_many(check_points(zs))


class PotapovGinzburg(TransformerMixin, BaseEstimator):
    """Pointwise transform of matrix values ``F -> Sigma`` and back."""

    def __init__(self, p: int = 1, q: int = 1):
        self.p = p
        self.q = q

    def fit(self, x=None, y=None):
        self.signature_ = SignatureSpace(self.p, self.q)
        if x is not None:
            check_matrix_stack(x, self.signature_.n)
        return self

    def transform(self, x) -> np.ndarray:
        check_is_fitted(self, "signature_")
        return pg_values(check_matrix_stack(x, self.signature_.n), self.signature_)

    def inverse_transform(self, x) -> np.ndarray:
        check_is_fitted(self, "signature_")
        return pg_inverse_values(check_matrix_stack(x, self.signature_.n), self.signature_)
