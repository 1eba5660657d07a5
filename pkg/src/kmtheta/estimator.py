"""scikit-learn style wrapper: rows x -> I(x; S)."""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .errfn import QuadratureSpec
from .geometry import FrameConfig
from .quadspace import InnerProductSpace
from .theta import scaled_I


class SurfaceIntegralTransformer(TransformerMixin, BaseEstimator):
    """Maps each row y to I(y; S), the integral of the Schwartz form over the spanning surface.

    fit only validates the configuration; nothing is learned from X.

    Parameters
    ----------
    gram : array (n, n)
        Gram matrix of signature (n - 2, 2).
    C1, C2, C1p, C2p : array (n,)
        The four negative vectors spanning the surface.
    special_tol : float
        Absolute tolerance of the error-function quadrature.
    """

    def __init__(self, gram=None, C1=None, C2=None, C1p=None, C2p=None, special_tol=1e-12):
        self.gram = gram
        self.C1 = C1
        self.C2 = C2
        self.C1p = C1p
        self.C2p = C2p
        self.special_tol = special_tol

    def fit(self, X=None, y=None):
        V = InnerProductSpace(np.asarray(self.gram, dtype=float))
        self.config_ = FrameConfig.build(self.C1, self.C2, self.C1p, self.C2p, V)
        self.spec_ = QuadratureSpec(abs_tol=self.special_tol)
        self.n_features_in_ = V.n
        return self

    def transform(self, X):
        check_is_fitted(self, "config_")
        X = check_array(X, dtype=float)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"expected {self.n_features_in_} features, got {X.shape[1]}")
        return scaled_I(X, self.config_, 0.0, self.spec_)[:, None]
