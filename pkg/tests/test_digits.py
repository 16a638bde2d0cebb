import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from benfordsim.digits import (
    DigitTally, EmptyTally, first_digit, first_digit_text, first_digits, percents, tally,
)


def _oracle(x: float) -> int:
    for ch in "%.17e" % abs(x):
        if ch in "123456789":
            return int(ch)
    raise AssertionError(x)


@pytest.mark.parametrize("x,d", [(613, 6), (0.0002867, 2), (1_653_832, 1), (0.456398, 4),
                                 (-62.97, 6), (567.34, 5)])
def test_examples(x, d):
    assert first_digit(x) == d


@pytest.mark.parametrize("k", range(-12, 13))
def test_powers_of_ten(k):
    assert first_digit(float(f"1e{k}")) == 1
    assert first_digits([float(f"1e{k}")])[0] == 1


@pytest.mark.parametrize("x", [0.0, -0.0, math.nan, math.inf, -math.inf])
def test_no_digit(x):
    assert first_digit(x) is None
    assert first_digits([x])[0] == 0


@pytest.mark.parametrize("x,d", [(999.9999999999999, 9), (0.3, 3), (1e23, 1),
                                 (0.7, 7), (5e-324, 5), (1.7976931348623157e308, 1),
                                 (2.2250738585072014e-308, 2), (9.999999999999999e-301, 9)])
def test_representation_edges(x, d):
    assert first_digit(x) == d
    assert first_digits([x])[0] == d


def test_random_doubles_match_string_oracle():
    bits = np.random.default_rng(2024).integers(0, 2 ** 63, 1_000_000, dtype=np.int64)
    x = bits.view(np.float64)
    x = x[np.isfinite(x) & (x != 0)]
    got = first_digits(x)
    want = np.fromiter((_oracle(v) for v in x), dtype=np.int8, count=x.size)
    assert np.array_equal(got, want)


def test_scalar_and_vector_agree():
    x = np.random.default_rng(1).lognormal(0, 30, 5000) * np.sign(np.random.default_rng(2)
                                                                    .normal(size=5000))
    assert [first_digit(v) for v in x] == first_digits(x).tolist()


@given(st.integers(1, 10 ** 15), st.integers(-100, 100), st.integers(-200, 200))
def test_scale_invariance(mantissa, exp, k):
    x = float(f"{mantissa}e{exp}")
    assert first_digit(x) == first_digit(float(f"{mantissa}e{exp + k}")) == int(str(mantissa)[0])


@given(st.floats(allow_nan=False, allow_infinity=False).filter(lambda v: v != 0))
def test_sign_invariance(x):
    assert first_digit(-x) == first_digit(x)


def test_text_digit():
    assert first_digit_text("  -0.00287 ") == 2
    assert first_digit_text("3.1e-5") == 3
    assert first_digit_text("0.000") is None


def test_tally_earthquake_style():
    t = tally([1, 2, 3, 4, 5, 6, 7, 8, 9])
    assert t.counts == (1,) * 9 and t.skipped == 0 and t.total == 9
    assert np.allclose(percents(t), 100 / 9)


def test_tally_skips():
    t = tally([0, math.nan, math.inf, 12, -0.5])
    assert t.counts == (1, 0, 0, 0, 1, 0, 0, 0, 0)
    assert t.skipped == 3


def test_empty_tally():
    t = tally([])
    assert t.counts == (0,) * 9 and t.total == 0
    with pytest.raises(EmptyTally):
        percents(t)


def test_percent_examples():
    assert percents(DigitTally((15, 8, 6, 4, 4, 0, 2, 1, 0))).tolist() == [
        37.5, 20, 15, 10, 10, 0, 5, 2.5, 0]
    assert percents(DigitTally((40,) + (0,) * 8)).tolist() == [100] + [0] * 8


def test_percents_sum_to_hundred():
    t = tally(np.random.default_rng(3).exponential(1, 1234))
    assert percents(t).sum() == pytest.approx(100, abs=1e-9)


def test_tally_merge_is_componentwise():
    x = np.random.default_rng(5).lognormal(0, 3, 1000)
    assert tally(x[:400]) + tally(x[400:]) == tally(x)
    assert tally(x[:400]) + tally(x[400:]) == tally(x[400:]) + tally(x[:400])


def test_tally_dict_round_trip():
    t = DigitTally((1, 2, 3, 4, 5, 6, 7, 8, 9), 4)
    assert DigitTally.from_dict(t.to_dict()) == t


def test_tally_validates():
    with pytest.raises(ValueError):
        DigitTally((1, 2))
    with pytest.raises(ValueError):
        DigitTally((-1,) + (0,) * 8)


def test_tally_accepts_generators():
    assert tally(v for v in (1.0, 20.0, 300.0)).counts[:3] == (1, 1, 1)
