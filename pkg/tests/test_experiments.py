import pytest

import benfordsim as bs
from benfordsim import experiments as ex


def test_ids_are_unique_and_sorted_in_listing():
    ids = [d.id for d in bs.list_experiments()]
    assert len(ids) == len(set(ids)) == len(bs.REGISTRY)
    assert ids == sorted(ids)


def test_definitions_are_consistent():
    for id_, d in bs.REGISTRY.items():
        assert d.id == id_ and d.description and d.default_runs >= 1
        lo, hi = d.ssd_band
        assert 0 <= lo < hi


def test_unknown_experiment():
    with pytest.raises(bs.UnknownExperiment):
        bs.run_experiment("nope")
    with pytest.raises(KeyError):
        ex.get_experiment("nope")


def test_bad_runs():
    with pytest.raises(ValueError):
        bs.run_experiment("fig7-u", runs=0)


def test_four_uniform_product():
    assert bs.run_experiment("fig7-uuuu").ssd <= 5


def test_lognormal_sum_of_eight():
    assert 110 <= bs.run_experiment("lognormal-sum-8").ssd <= 230


def test_report_metadata():
    r = bs.run_experiment("fig7-uu", runs=1000, seed=4)
    assert r.name == "fig7-uu" and r.runs == 1000 and r.seed == 4


def test_seed_changes_result():
    assert bs.run_experiment("fig7-u", seed=1).ssd != bs.run_experiment("fig7-u", seed=2).ssd


@pytest.mark.parametrize("id_", sorted(ex.REGISTRY))
def test_every_experiment_passes_its_bands(id_):
    (report, fails), = bs.run_many([id_])
    assert fails == [], fails


def test_check_report_flags_out_of_band():
    r = bs.run_experiment("two-normals-1")
    assert bs.check_report("two-normals-1", r) == []
    assert bs.check_report("fig7-uuuu", r)


def test_check_report_skips_log_skew_without_values():
    r = bs.run_experiment("fig9-highpom")
    assert bs.check_report("fig9-highpom", r) == []


def test_run_many_order_and_threads():
    ids = ["rlc-3dice", "fig7-u", "cfc", "mult-table"]
    serial = bs.run_many(ids)
    threaded = bs.run_many(ids, jobs=4)
    assert [r.name for r, _ in threaded] == ids
    assert [r.ssd for r, _ in serial] == [r.ssd for r, _ in threaded]
