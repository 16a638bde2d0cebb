import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from benfordsim import sampling as smp
from benfordsim.sampling import (
    Bound, Dice, Empirical, Exponential, InvalidSpec, Lognormal, Normal, Reciprocal,
    Triangular, UniformCont, UniformDisc, make_stream, sample, sample_many,
    stream_keys, stream_uniforms, theoretical_support,
)

BOUNDED = [UniformCont(3, 40), UniformCont(0, 1), UniformDisc(-3, 4), Triangular(1, 2, 9),
           Triangular(0, 0, 1), Reciprocal(10, 100), Empirical((2.5, -1.0, 7.0)), Dice(6)]


def test_same_seed_and_index_repeat():
    a = sample_many(UniformCont(0, 1), make_stream(42, 0), 100)
    b = sample_many(UniformCont(0, 1), make_stream(42, 0), 100)
    assert np.array_equal(a, b)


def test_indices_give_different_streams():
    a = make_stream(42, 0).uniforms(10)
    b = make_stream(42, 1).uniforms(10)
    assert not np.any(a == b)


def test_first_draw_in_unit_interval():
    u = make_stream(7, 3).uniform()
    assert 0.0 <= u < 1.0


def test_stream_matches_vectorized_slots():
    rng = make_stream(9, 5)
    seq = rng.uniforms(20)
    keys = stream_keys(9, [5])
    assert np.array_equal(seq, [stream_uniforms(keys, k)[0] for k in range(20)])
    assert rng.position == 20


def test_stream_independent_of_other_streams():
    keys = stream_keys(3, np.arange(1000))
    alone = stream_keys(3, [517])
    assert np.array_equal(stream_uniforms(keys, 4)[517:518], stream_uniforms(alone, 4))


def test_known_values_pin_the_generator():
    # guards against accidental changes to the stream derivation
    u = make_stream(1, 0).uniforms(3)
    assert [v.hex() for v in u.tolist()] == [
        "0x1.a71351a1ec8f4p-3", "0x1.9cb828d5721a8p-3", "0x1.0e5a30ef640acp-2"]


def test_degenerate_uniform():
    assert all(sample(UniformCont(5, 5), make_stream(1, i)) == 5.0 for i in range(20))


def test_zero_shape_lognormal():
    v = sample_many(Lognormal(0, 1.5), make_stream(2), 50)
    assert np.all(v == math.exp(1.5))


def test_uniform_mean():
    assert sample_many(UniformCont(0, 1), make_stream(1), 35000).mean() == pytest.approx(
        0.5, abs=0.01)


def test_exponential_scale_is_mean():
    assert sample_many(Exponential(4), make_stream(1), 35000).mean() == pytest.approx(
        4.0, abs=0.15)


def test_normal_mean_within_four_se():
    n, s = 35000, 13.0
    v = sample_many(Normal(5, s), make_stream(4), n)
    assert abs(v.mean() - 5) < 4 * s / math.sqrt(n)


def test_lognormal_log_mean():
    n, sigma, mu = 35000, 1.4, 4.1
    v = sample_many(Lognormal(sigma, mu), make_stream(8), n)
    assert abs(np.log(v).mean() - mu) < 4 * sigma / math.sqrt(n)


def test_reciprocal_cdf():
    v = sample_many(Reciprocal(10, 100), make_stream(6), 35000)
    for t in (10 * 10 ** 0.25, 10 * 10 ** 0.5, 10 * 10 ** 0.75):
        assert np.mean(v <= t) == pytest.approx(math.log(t / 10) / math.log(10), abs=0.01)


def test_triangular_mean():
    v = sample_many(Triangular(1, 2, 9), make_stream(6), 35000)
    assert v.mean() == pytest.approx(4.0, abs=0.05)


def test_discrete_uniform_hits_every_value():
    v = sample_many(UniformDisc(1, 6), make_stream(3), 6000)
    assert set(v.tolist()) == {1, 2, 3, 4, 5, 6}
    assert np.all(v == np.round(v))


def test_dice_is_discrete_uniform():
    a = sample_many(Dice(6), make_stream(3), 500)
    b = sample_many(UniformDisc(1, 6), make_stream(3), 500)
    assert np.array_equal(a, b)


@pytest.mark.parametrize("spec", BOUNDED, ids=str)
def test_draws_stay_in_support(spec):
    lo, hi = theoretical_support(spec)
    v = sample_many(spec, make_stream(11), 20000)
    assert v.min() >= lo and v.max() <= hi


@settings(max_examples=60, deadline=None)
@given(st.floats(-1e6, 1e6), st.floats(0, 1e6), st.integers(0, 2 ** 32))
def test_uniform_support_property(a, width, seed):
    spec = UniformCont(a, a + width)
    v = sample_many(spec, make_stream(seed), 64)
    assert np.all((v >= spec.a) & (v <= spec.b))


def test_support_examples():
    assert theoretical_support(UniformCont(3, 40)) == (3, 40)
    assert 40 / 3 == pytest.approx(13.3, abs=0.05)
    assert theoretical_support(Dice(6)) == (1, 6)
    assert theoretical_support(Normal(2, 9)) is Bound.UNBOUNDED
    assert theoretical_support(Exponential(1)) is Bound.UNBOUNDED
    assert theoretical_support(Lognormal(1, 0)) is Bound.UNBOUNDED
    assert theoretical_support(Empirical((3, 1, 2))) == (1, 3)


@pytest.mark.parametrize("make", [
    lambda: UniformCont(2, 1),
    lambda: UniformDisc(3, 1),
    lambda: Normal(0, 0),
    lambda: Exponential(-1),
    lambda: Lognormal(-0.1, 0),
    lambda: Triangular(0, 5, 1),
    lambda: Reciprocal(0, 10),
    lambda: Reciprocal(5, 5),
    lambda: Empirical(()),
    lambda: Dice(0),
    lambda: UniformCont(0, math.inf),
])
def test_invalid_specs(make):
    with pytest.raises(InvalidSpec):
        make()


def test_not_a_spec():
    with pytest.raises(InvalidSpec):
        sample("U(0,1)", make_stream(1))


def test_spec_text():
    assert str(UniformCont(3, 40)) == "U(3,40)"
    assert str(Reciprocal(1, 1e6)) == "KX(1,1000000)"
    assert str(Lognormal(1.5, 3.8)) == "LN(1.5,3.8)"


def test_bound_renders_as_word():
    assert str(Bound.UNBOUNDED) == "unbounded"
    assert str(Bound.UNAVAILABLE) == "unavailable"


def test_support_pom():
    assert smp.support_pom(UniformCont(2, 20)) == 10
    assert smp.support_pom(UniformCont(0, 1)) is Bound.UNBOUNDED
    assert smp.support_pom(UniformCont(-1, 1)) is Bound.UNAVAILABLE
