import csv
import io
import json
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from loccspan.errors import InvalidInput
from loccspan.harness import (
    CONJECTURE,
    THEOREM,
    ExperimentConfig,
    default_threads,
    run_conjecture_probe,
    run_experiment,
    sample_orthogonal_set,
    trial_seed,
)
from loccspan.stateset import validate


def test_trial_seed_is_stable_and_distinct():
    assert trial_seed(1, 0) == trial_seed(1, 0)
    seeds = {trial_seed(1, t) for t in range(1000)}
    assert len(seeds) == 1000
    assert trial_seed(1, 0) != trial_seed(2, 0)
    assert all(0 <= s < 2**64 for s in seeds)


def test_sample_orthogonal_set():
    s = sample_orthogonal_set([2, 2], 3, 5)
    assert validate(s) == []
    assert np.array_equal(s.states, sample_orthogonal_set([2, 2], 3, 5).states)
    with pytest.raises(InvalidInput):
        sample_orthogonal_set([2, 2], 5, 0)


@pytest.mark.parametrize(
    "kwargs",
    [dict(trials=0), dict(tolerance=0.0), dict(threads=0), dict(N=5), dict(N=1), dict(dims=(1, 2))],
)
def test_config_validation(kwargs):
    base = dict(dims=(2, 2), N=3, trials=10)
    base.update(kwargs)
    with pytest.raises(InvalidInput):
        ExperimentConfig(**base)


def test_tallies_add_up():
    r = run_experiment(ExperimentConfig((2, 2), 3, 50, 3))
    assert r.blocked_count + r.non_blocked_count + r.ambiguous_count == 50
    assert r.mode == THEOREM
    assert len(r.records) == 50


def test_counting_regime():
    r = run_experiment(ExperimentConfig((3, 3), 3, 20, 0))
    assert r.blocked_count == 0 and r.per_party_full_counts == [0, 0]


def test_csv_layout():
    r = run_experiment(ExperimentConfig((2, 2, 2), 4, 7, 1))
    rows = list(csv.reader(io.StringIO(r.to_csv())))
    assert rows[0] == [
        "trial", "seed", "strongly_blocked", "ambiguous",
        "rank_party_0", "rank_party_1", "rank_party_2", "min_sv_accepted", "max_sv_rejected",
    ]
    assert len(rows) == 8
    assert [int(row[0]) for row in rows[1:]] == list(range(7))
    assert all(int(row[1]) == trial_seed(1, int(row[0])) for row in rows[1:])


@given(st.integers(0, 2**63 - 1))
def test_thread_count_invariance(seed):
    outs = set()
    for threads in (1, 3):
        r = run_experiment(ExperimentConfig((2, 2), 3, 12, seed, threads=threads))
        outs.add((r.to_csv(), r.to_json()))
    assert len(outs) == 1


def test_json_excludes_timing_by_default():
    r = run_experiment(ExperimentConfig((2, 2), 3, 5, 0, threads=2))
    data = json.loads(r.to_json())
    assert "wall_time" not in data and "threads" not in data["config"]
    timed = r.to_dict(include_timing=True)
    assert timed["threads"] == 2 and timed["wall_time"] >= 0


def test_blocked_count_monotone_in_tolerance():
    counts = []
    for tol in (1e-10, 1e-8, 1e-6, 1e-4, 1e-3, 1e-2):
        counts.append(run_experiment(ExperimentConfig((3, 3), 4, 40, 11, tolerance=tol)).blocked_count)
    # Larger tolerance can only demote full verdicts.
    assert counts == sorted(counts, reverse=True)
    assert counts[0] == 40 and counts[-1] < 40


def test_non_uniform_dims_labelled_as_conjecture():
    assert run_experiment(ExperimentConfig((2, 3), 4, 5, 0)).mode == CONJECTURE


def test_conjecture_probe():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        r = run_conjecture_probe([2, 3], 4, 50, 0)
    assert r.mode == CONJECTURE and r.blocked_count == 50
    with pytest.warns(UserWarning):
        r = run_conjecture_probe([2, 3], 3, 20, 0)
    # The d = 3 party has at most 3*2 + 1 = 7 < 9 span rows.
    assert r.per_party_full_counts[1] == 0 and r.blocked_count == 0


def test_conjecture_probe_uniform_dims_same_machinery():
    a = run_conjecture_probe([2, 2], 4, 10, 4)
    b = run_experiment(ExperimentConfig((2, 2), 4, 10, 4))
    assert a.to_csv() == b.to_csv()
    assert a.mode == CONJECTURE and b.mode == THEOREM


def test_mixed_mode():
    r = run_experiment(ExperimentConfig((2, 2), 3, 20, 0, mixed=True))
    assert r.blocked_count == 20


def test_default_threads_env(monkeypatch):
    monkeypatch.delenv("LOCC_SPAN_THREADS", raising=False)
    assert default_threads() == 1
    monkeypatch.setenv("LOCC_SPAN_THREADS", "4")
    assert default_threads() == 4
    monkeypatch.setenv("LOCC_SPAN_THREADS", "zero")
    with pytest.raises(InvalidInput):
        default_threads()
