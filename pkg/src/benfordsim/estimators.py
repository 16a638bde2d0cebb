"""scikit-learn style wrappers around the digit and metric functions."""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from . import metrics
from .digits import first_digits, percents, tally
from .models import power_transform

__all__ = ["FirstDigitTransformer", "BenfordConformance", "NthPowerTransformer"]


def _column(X) -> np.ndarray:
    X = check_array(X, ensure_2d=False, ensure_all_finite=False, dtype=np.float64)
    return X.ravel()


class FirstDigitTransformer(TransformerMixin, BaseEstimator):
    """Replace every value with its first significant digit (0 where undefined)."""

    def fit(self, X, y=None):
        X = check_array(X, ensure_all_finite=False, dtype=np.float64)
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        X = check_array(X, ensure_all_finite=False, dtype=np.float64)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"expected {self.n_features_in_} features, got {X.shape[1]}")
        return first_digits(X).astype(np.int64)


class BenfordConformance(BaseEstimator):
    """Fit a first-digit profile to all values of ``X`` and grade it.

    After ``fit``: ``tally_``, ``percents_``, ``ssd_``, ``pom_``, ``oom_``
    and ``verdict_``. ``score`` is ``-SSD`` of the data passed to it, so
    higher is closer to the logarithmic law.
    """

    def fit(self, X, y=None):
        x = _column(X)
        self.tally_ = tally(x)
        self.percents_ = percents(self.tally_)
        self.ssd_ = metrics.ssd(self.percents_)
        self.pom_ = metrics.empirical_pom(x)
        self.oom_ = float(np.log10(self.pom_))
        self.verdict_ = metrics.conformance(self.ssd_, self.pom_)
        return self

    def score(self, X, y=None) -> float:
        return -metrics.ssd(percents(tally(_column(X))))


class NthPowerTransformer(TransformerMixin, BaseEstimator):
    """Raise positive values to the integer power ``n``."""

    def __init__(self, n: int = 2):
        self.n = n

    def fit(self, X, y=None):
        check_array(X, dtype=np.float64)
        if int(self.n) != self.n or self.n < 1:
            raise ValueError("n must be an integer >= 1")
        self.n_features_in_ = np.asarray(X).shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        return power_transform(check_array(X, dtype=np.float64), self.n)

    def inverse_transform(self, X):
        check_is_fitted(self, "n_features_in_")
        return np.power(check_array(X, dtype=np.float64), 1.0 / self.n)
