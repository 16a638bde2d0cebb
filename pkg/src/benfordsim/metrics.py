"""Distances from the logarithmic distribution and order-of-magnitude measures."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Tuple, Union

import numpy as np

from .sampling import Bound

__all__ = [
    "NoPositiveValues",
    "NonPositiveMin",
    "ConformanceVerdict",
    "benford_expected",
    "ssd",
    "magnitudes",
    "empirical_pom",
    "empirical_oom",
    "theoretical_pom_product",
    "theoretical_pom_sum",
    "conformance",
    "skew_indicator",
    "log_histogram",
    "log_skewness",
    "SSD_LIMITS",
    "POM_LIMITS",
]

SSD_LIMITS = ((2.0, "ideal"), (25.0, "acceptable"), (100.0, "marginal"))
POM_LIMITS = ((300.0, "weak"), (1000.0, "approximate"), (3000.0, "good"))


class NoPositiveValues(ValueError):
    pass


class NonPositiveMin(ValueError):
    pass


_BENFORD = 100.0 * np.log10(1.0 + 1.0 / np.arange(1, 10))
_BENFORD.flags.writeable = False


def benford_expected() -> np.ndarray:
    """``100 * log10(1 + 1/d)`` for d = 1..9."""
    return _BENFORD.copy()


def ssd(observed) -> float:
    """Sum of squared deviations from Benford, in percent units."""
    obs = np.asarray(observed, dtype=np.float64)
    if obs.shape != (9,):
        raise ValueError("observed must hold 9 digit percentages")
    return float(np.sum((obs - _BENFORD) ** 2))


def magnitudes(values) -> np.ndarray:
    """``|v|`` for every finite nonzero value."""
    x = np.abs(np.asarray(values, dtype=np.float64).ravel())
    return x[np.isfinite(x) & (x > 0)]


def empirical_pom(values) -> float:
    m = magnitudes(values)
    if m.size == 0:
        raise NoPositiveValues("no finite nonzero values")
    return float(m.max() / m.min())


def empirical_oom(values) -> float:
    return math.log10(empirical_pom(values))


def theoretical_pom_product(poms: Sequence[float]) -> float:
    return float(math.prod(float(p) for p in poms))


def theoretical_pom_sum(supports: Sequence[Tuple[float, float]]) -> float:
    """POM of a sum of bounded variables: (sum of maxima) / (sum of minima)."""
    lows = [float(lo) for lo, _ in supports]
    highs = [float(hi) for _, hi in supports]
    if not lows:
        raise ValueError("need at least one support")
    if min(lows) <= 0:
        raise NonPositiveMin("every support minimum must be positive")
    return math.fsum(highs) / math.fsum(lows)


@dataclass(frozen=True)
class ConformanceVerdict:
    ssd_class: str
    pom_class: str


def conformance(ssd_value: float, pom: Union[float, Bound]) -> ConformanceVerdict:
    ssd_class = "non-benford"
    for limit, name in SSD_LIMITS:
        if ssd_value < limit:
            ssd_class = name
            break
    pom_class = "very-strong"
    if pom is Bound.UNAVAILABLE:
        raise ValueError("cannot classify an unavailable POM")
    if pom is not Bound.UNBOUNDED:
        for limit, name in POM_LIMITS:
            if pom < limit:
                pom_class = name
                break
    return ConformanceVerdict(ssd_class, pom_class)


def skew_indicator(values) -> Tuple[float, float, float]:
    """Mean, median and their ratio; a ratio well above 1 flags right skew."""
    x = np.asarray(values, dtype=np.float64).ravel()
    x = x[np.isfinite(x)]
    if x.size == 0:
        raise ValueError("need at least one finite value")
    mean = float(x.mean())
    median = float(np.median(x))
    ratio = mean / median if median != 0 else math.nan
    return mean, median, ratio


def log_histogram(values, bin_count: int = 60):
    """Equal-width histogram of ``log10 |v|`` over its observed range.

    A constant set collapses to one degenerate bin holding everything.
    """
    if bin_count < 1:
        raise ValueError("bin_count must be >= 1")
    logs = np.log10(magnitudes(values))
    if logs.size == 0:
        raise NoPositiveValues("no finite nonzero values")
    lo, hi = float(logs.min()), float(logs.max())
    if lo == hi:
        return [lo, hi], [int(logs.size)]
    counts, edges = np.histogram(logs, bins=bin_count, range=(lo, hi))
    return edges.tolist(), counts.tolist()


def log_skewness(values) -> float:
    """Standardized third central moment of ``log10 |v|``."""
    logs = np.log10(magnitudes(values))
    if logs.size < 2:
        raise NoPositiveValues("need at least two finite nonzero values")
    centred = logs - logs.mean()
    sd = math.sqrt(float(np.mean(centred ** 2)))
    if sd == 0:
        return 0.0
    return float(np.mean(centred ** 3)) / sd ** 3
