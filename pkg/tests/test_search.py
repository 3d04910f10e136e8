"""Randomized search: determinism, reproducibility, failure taxonomy."""

import json

import numpy as np
import pytest

from ulrich_forge.presentation import ParityError, linear_span_dimension, load
from ulrich_forge.search import _regenerate, search, sweep
from ulrich_forge.ulrich import certify


def test_search_d7r3_succeeds_first_trial(tmp_path):
    res = search(7, 3, trials=5, master_seed=0, out_dir=tmp_path)
    rep = res.report
    assert rep.success_trial == 0
    assert rep.trials_run == 1
    assert rep.h1_checks == [(2, 0), (3, 0)]
    assert rep.failure_histogram == {}
    assert (tmp_path / rep.presentation_file).exists()


def test_search_parity_error_before_any_trial():
    with pytest.raises(ParityError):
        search(4, 3, trials=5, master_seed=0)


def test_search_d2r2_spans_linear_forms(tmp_path):
    res = search(2, 2, trials=5, master_seed=0, out_dir=tmp_path)
    assert res.report.succeeded
    assert linear_span_dimension(res.presentation) == 3


def test_search_reports_failures_small_field():
    # over F_3 random draws do fail; seed frozen after probing
    res = search(3, 2, trials=8, master_seed=5, p=3)
    rep = res.report
    assert rep.success_trial == 2
    assert rep.failure_histogram == {"h1_t2": 2}
    assert rep.trials_run == 3


def test_search_can_exhaust_trials():
    res = search(3, 2, trials=8, master_seed=6, p=3)
    rep = res.report
    assert rep.success_trial is None
    assert rep.trials_run == 8
    assert sum(rep.failure_histogram.values()) == 8
    assert res.presentation is None


def test_search_byte_reproducible(tmp_path):
    out1, out2 = tmp_path / "one", tmp_path / "two"
    r1 = search(5, 3, trials=5, master_seed=3, out_dir=out1)
    r2 = search(5, 3, trials=5, master_seed=3, out_dir=out2)
    f1 = (out1 / r1.report.presentation_file).read_bytes()
    f2 = (out2 / r2.report.presentation_file).read_bytes()
    assert f1 == f2
    assert json.dumps(r1.report.to_json_dict()) == json.dumps(r2.report.to_json_dict())


def test_search_worker_count_does_not_change_report():
    seq = search(3, 2, trials=8, master_seed=5, p=3, workers=1)
    par = search(3, 2, trials=8, master_seed=5, p=3, workers=4)
    assert seq.report.to_json_dict() == par.report.to_json_dict()


def test_search_trial_outcomes_are_index_pure():
    # the winning presentation equals the one regenerated from its index alone
    res = search(3, 3, trials=5, master_seed=9)
    again = _regenerate(3, 3, 32003, 9, (), res.report.success_trial)
    assert again.content_hash == res.report.presentation_hash


def test_saved_success_recertifies_from_disk(tmp_path):
    res = search(5, 2, trials=5, master_seed=0, out_dir=tmp_path)
    pres = load(tmp_path / res.report.presentation_file)
    cert = certify(pres, level="basic", master_seed=0)
    assert cert.valid
    assert cert.presentation_hash == res.report.presentation_hash


def test_sweep_rank3_odd_degrees(tmp_path):
    rep = sweep([3, 5, 7, 9], 3, trials_per_d=5, master_seed=0, out_dir=tmp_path)
    assert [r.d for r in rep.results] == [3, 5, 7, 9]
    assert all(r.succeeded for r in rep.results)
    assert rep.all_succeeded and not rep.partial
    doc = rep.to_json_dict()
    assert doc["format"] == "ulrich-sweep/1"
    assert all("ms" in row for row in doc["results"])
    assert all(row["ms"] is None for row in doc["results"])


def test_sweep_rank2_low_degrees():
    rep = sweep([2, 3, 4, 5], 2, trials_per_d=5, master_seed=0)
    assert all(r.succeeded for r in rep.results)


def test_sweep_empty_list():
    rep = sweep([], 3, trials_per_d=5, master_seed=0)
    assert rep.results == [] and not rep.partial
    assert rep.all_succeeded


def test_sweep_time_budget_marks_partial():
    rep = sweep([3, 5], 3, trials_per_d=5, master_seed=0, time_budget_s=-1.0)
    assert rep.partial
    assert rep.skipped == [3, 5]
    assert not rep.all_succeeded


def test_sweep_validates_every_degree_first():
    with pytest.raises(ParityError):
        sweep([3, 4], 3, trials_per_d=5, master_seed=0)


def test_sweep_timings_optional():
    rep = sweep([3], 3, trials_per_d=5, master_seed=0, record_timings=True)
    assert rep.results[0].ms is not None and rep.results[0].ms > 0
