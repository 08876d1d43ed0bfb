import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from loccspan.analyzer import analyze
from loccspan.errors import InvalidInput, InvalidPartition, ReductionError, UnsupportedPartition
from loccspan.harness import sample_orthogonal_mixed_set
from loccspan.stateset import (
    MixedSet,
    StateSet,
    coarse_grain,
    eigen_select,
    from_json,
    load,
    manifold_info,
    pure_to_mixed,
    to_json,
    validate,
    validate_mixed,
)

from conftest import random_set


def basis(k, total=4):
    v = np.zeros(total, dtype=complex)
    v[k] = 1
    return v


# --- construction and validation -------------------------------------------------

def test_validate_computational_basis():
    assert validate(StateSet([2, 2], [basis(0), basis(1), basis(2)])) == []


def test_validate_reports_overlap():
    bad = StateSet([2, 2], [basis(0), (basis(0) + basis(3)) / math.sqrt(2)])
    (v,) = validate(bad)
    assert v.kind == "orthogonality" and (v.i, v.j) == (0, 1)
    assert v.residual == pytest.approx(1 / math.sqrt(2), abs=1e-15)


def test_validate_reports_normalization():
    (v,) = validate(StateSet([2], [[2, 0], [0, 1]]))
    assert v.kind == "normalization" and v.i == 0 and v.j is None


@given(st.integers(0, 2**32 - 1))
def test_validate_haar_output(seed):
    assert validate(random_set([2, 3], 4, seed)) == []


def test_validate_residual_scales_linearly():
    s = random_set([2, 2], 3, 1)
    res = []
    for eps in (1e-6, 2e-6):
        moved = s.states.copy()
        moved[0] = moved[0] + eps * s.states[1]
        res.append(max(v.residual for v in validate(s.with_states(moved), 1e-12) if v.kind == "orthogonality"))
    assert res[1] / res[0] == pytest.approx(2.0, rel=1e-3)


@pytest.mark.parametrize(
    "dims, states",
    [([2, 2], [basis(0)]), ([2, 2], np.zeros((2, 3))), ([1, 2], np.zeros((2, 2))), ([2], [[np.nan, 0], [0, 1]])],
)
def test_stateset_rejects_bad_structure(dims, states):
    with pytest.raises(InvalidInput):
        StateSet(dims, states)


def test_stateset_is_read_only():
    s = random_set([2, 2], 2, 0)
    with pytest.raises(ValueError):
        s.states[0, 0] = 1


@pytest.mark.parametrize(
    "n, dims, expected", [(3, [2, 2], (12, 3, 9)), (2, [2], (4, 1, 3)), (4, [3, 3], (36, 6, 30))]
)
def test_manifold_info(n, dims, expected):
    info = manifold_info(n, dims)
    assert (info.ambient_complex_dim, info.constraint_count, info.manifold_dim) == expected


# --- mixed states ------------------------------------------------------------------

def test_eigen_select_diagonal_tie_break():
    r1 = np.diag([1, 0, 0, 0]).astype(complex)
    r2 = np.diag([0, 0.5, 0.5, 0]).astype(complex)
    out = eigen_select(MixedSet([2, 2], [r1, r2]))
    assert np.allclose(out.states, [basis(0), basis(1)])


@given(st.integers(0, 2**32 - 1))
def test_eigen_select_pure_roundtrip_up_to_phase(seed):
    s = random_set([2, 2], 3, seed)
    out = eigen_select(pure_to_mixed(s))
    overlaps = np.abs(np.einsum("ia,ia->i", out.states.conj(), s.states))
    assert np.allclose(overlaps, 1, atol=1e-10)
    again = eigen_select(pure_to_mixed(out))
    assert np.allclose(again.states, out.states, atol=1e-12)


@given(st.integers(0, 2**32 - 1), st.sampled_from([([2, 2], 3), ([3, 3], 4), ([2, 3], 2)]))
def test_eigen_select_orthogonal_support_mixtures(seed, case):
    dims, n = case
    mixed = sample_orthogonal_mixed_set(dims, n, seed)
    assert validate_mixed(mixed) == []
    assert validate(eigen_select(mixed), 1e-8) == []


def test_eigen_select_rejects_overlapping_supports():
    r = np.diag([1, 0, 0, 0]).astype(complex)
    with pytest.raises(ReductionError):
        eigen_select(MixedSet([2, 2], [r, r]))


def test_validate_mixed_flags_problems():
    r1 = np.diag([1, 0, 0, 0]).astype(complex)
    r2 = np.diag([0.6, 0.6, 0, 0]).astype(complex)
    kinds = {v.kind for v in validate_mixed(MixedSet([2, 2], [r1, r2]))}
    assert kinds == {"trace", "support_overlap"}
    r3 = r1.copy()
    r3[0, 1] = 0.1
    assert "hermiticity" in {v.kind for v in validate_mixed(MixedSet([2, 2], [r3, r1]))}


# --- coarse graining --------------------------------------------------------------

def test_coarse_grain_pairs_of_qubits():
    s = random_set([2, 2, 2, 2], 5, 3)
    g = coarse_grain(s, [[0, 1], [2, 3]])
    assert g.dims == (4, 4)
    assert np.array_equal(g.states, s.states)
    assert validate(g) == validate(s) == []


def test_coarse_grain_identity_partition():
    s = random_set([2, 3], 3, 0)
    g = coarse_grain(s, [[0], [1]])
    assert g.dims == (2, 3) and np.array_equal(g.states, s.states)


@given(st.integers(0, 2**32 - 1))
def test_coarse_grain_matches_direct_analysis(seed):
    s = random_set([2, 2, 2, 2], 5, seed)
    grouped = analyze(coarse_grain(s, [[0, 1], [2, 3]]))
    direct = analyze(StateSet([4, 4], s.states))
    assert grouped == direct


@pytest.mark.parametrize(
    "partition, error",
    [
        ([[0, 1], [2]], InvalidPartition),
        ([[0, 1], [1, 2, 3]], InvalidPartition),
        ([[0, 1], [], [2, 3]], InvalidPartition),
        ([[0, 2], [1, 3]], UnsupportedPartition),
        ([[2, 3], [0, 1]], UnsupportedPartition),
    ],
)
def test_coarse_grain_errors(partition, error):
    with pytest.raises(error):
        coarse_grain(random_set([2, 2, 2, 2], 2, 0), partition)


# --- JSON ------------------------------------------------------------------------

def test_json_roundtrip_is_exact(tmp_path):
    s = StateSet([2, 2], random_set([2, 2], 3, 5).states, ["a", "b", "c"])
    text = to_json(s)
    back = from_json(text)
    assert back.dims == s.dims and back.labels == s.labels
    assert np.array_equal(back.states, s.states)
    assert to_json(back) == text
    path = tmp_path / "s.json"
    path.write_text(text, encoding="utf-8")
    assert np.array_equal(load(path).states, s.states)


def test_json_mixed_roundtrip():
    m = sample_orthogonal_mixed_set([2, 2], 2, 4)
    back = from_json(to_json(m))
    assert isinstance(back, MixedSet)
    assert np.array_equal(back.density_matrices, m.density_matrices)


@pytest.mark.parametrize(
    "payload",
    [
        {"dims": [2], "states": [{"amplitudes": [[1, 0], [0, 0]]}, {"amplitudes": [[0, 0], [1, 0]]}], "extra": 1},
        {"dims": [2], "states": [{"amplitudes": [[1, 0]]}, {"amplitudes": [[0, 0], [1, 0]]}]},
        {"dims": [2], "states": [{"amplitudes": [[1, 0], [0, 0]], "phase": 0}, {"amplitudes": [[0, 0], [1, 0]]}]},
        {"dims": "2", "states": []},
        {"states": []},
        {"dims": [2], "density_matrices": [[[1, 0]]]},
        [1, 2],
    ],
)
def test_json_rejects_malformed(payload):
    with pytest.raises(InvalidInput):
        from_json(json.dumps(payload))


def test_json_rejects_non_json():
    with pytest.raises(InvalidInput):
        from_json("{not json")
