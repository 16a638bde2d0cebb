import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from benfordsim import metrics as mt
from benfordsim.digits import percents, tally
from benfordsim.sampling import Bound


def test_expected_values():
    p = mt.benford_expected()
    assert p[0] == pytest.approx(30.103, abs=1e-3)
    assert p[8] == pytest.approx(4.576, abs=1e-3)
    assert p.sum() == pytest.approx(100, abs=1e-9)
    assert np.all(np.diff(p) < 0)


def test_expected_is_a_copy():
    mt.benford_expected()[0] = 0
    assert mt.benford_expected()[0] > 30


def test_ssd_examples():
    assert mt.ssd(mt.benford_expected()) == 0
    # (100 - 30.103)^2 plus the squares of the other eight expectations
    assert mt.ssd([100, 0, 0, 0, 0, 0, 0, 0, 0]) == pytest.approx(5633.93, abs=0.01)
    with pytest.raises(ValueError):
        mt.ssd([1, 2, 3])


def test_ssd_ignores_value_order():
    x = np.random.default_rng(1).lognormal(0, 1, 2000)
    a = mt.ssd(percents(tally(x)))
    b = mt.ssd(percents(tally(x[::-1])))
    assert a == b > 0


def test_pom_examples():
    table = np.outer(np.arange(1, 11), np.arange(1, 11))
    assert mt.empirical_pom(table) == 100
    assert mt.empirical_oom(table) == pytest.approx(2)
    assert mt.empirical_pom([2, 20]) == 10
    assert mt.empirical_pom([5, 5, 5]) == 1
    assert mt.empirical_oom([5, 5, 5]) == 0


def test_pom_uses_magnitudes():
    assert mt.empirical_pom([-40, 0, 2, math.nan, math.inf]) == 20
    with pytest.raises(mt.NoPositiveValues):
        mt.empirical_pom([0, math.nan])


def test_product_pom():
    assert mt.theoretical_pom_product([10, 10]) == 100
    assert mt.theoretical_pom_product([7.5]) == 7.5
    assert mt.theoretical_pom_product([3.0] * 5) == pytest.approx(3.0 ** 5)


def test_product_oom_is_additive():
    poms = [40 / 3, 33 / 2, 41 / 7, 29]
    total = math.log10(mt.theoretical_pom_product(poms))
    assert total == pytest.approx(sum(math.log10(p) for p in poms))


def test_sum_pom():
    assert mt.theoretical_pom_sum([(3, 43), (4, 54), (3, 13), (8, 77), (3, 11), (4, 15)]) == \
        pytest.approx(8.52)
    assert mt.theoretical_pom_sum([(2, 9)] * 7) == pytest.approx(4.5)
    with pytest.raises(mt.NonPositiveMin):
        mt.theoretical_pom_sum([(0, 1), (1, 2)])
    with pytest.raises(ValueError):
        mt.theoretical_pom_sum([])


@given(st.lists(st.tuples(st.floats(1e-6, 1e6), st.floats(1, 1e6)), min_size=1, max_size=12))
def test_sum_pom_bounded_by_largest(pairs):
    supports = [(lo, lo * r) for lo, r in pairs]
    assert mt.theoretical_pom_sum(supports) <= max(r for _, r in pairs) * (1 + 1e-12)


@pytest.mark.parametrize("value,cls", [(0.9, "ideal"), (2, "acceptable"), (24.9, "acceptable"),
                                       (25, "marginal"), (58, "marginal"),
                                       (100, "non-benford"), (1e4, "non-benford")])
def test_ssd_classes(value, cls):
    assert mt.conformance(value, 10).ssd_class == cls


@pytest.mark.parametrize("pom,cls", [(10, "weak"), (300, "approximate"), (999, "approximate"),
                                     (1000, "good"), (5386, "very-strong"),
                                     (Bound.UNBOUNDED, "very-strong")])
def test_pom_classes(pom, cls):
    assert mt.conformance(1, pom).pom_class == cls


def test_unavailable_pom_cannot_be_graded():
    with pytest.raises(ValueError):
        mt.conformance(1, Bound.UNAVAILABLE)


def test_skew_indicator():
    assert mt.skew_indicator([1, 2, 3]) == (2, 2, 1)
    assert mt.skew_indicator([1, 2, 3, 10]) == (4, 2.5, 1.6)
    assert math.isnan(mt.skew_indicator([0, 0, 1])[2])


def test_log_histogram():
    edges, counts = mt.log_histogram([1, 10, 100], 2)
    assert edges == [0, 1, 2]
    assert counts == [1, 2]


def test_log_histogram_constant_and_total():
    assert mt.log_histogram([7, 7, 7]) == ([math.log10(7)] * 2, [3])
    x = np.random.default_rng(2).lognormal(0, 2, 999)
    edges, counts = mt.log_histogram(x)
    assert len(edges) == 61 and sum(counts) == 999
    with pytest.raises(ValueError):
        mt.log_histogram(x, 0)
    with pytest.raises(mt.NoPositiveValues):
        mt.log_histogram([0])


def test_log_skewness():
    x = 10 ** np.random.default_rng(4).normal(0, 1, 50000)
    assert abs(mt.log_skewness(x)) < 0.05
    assert mt.log_skewness([3, 3, 3]) == 0
    assert mt.log_skewness(10 ** np.random.default_rng(4).exponential(1, 50000)) > 1.5
