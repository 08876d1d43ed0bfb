import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from loccspan.elimination.poly import ONE, FormalVar, SparsePoly, amp, amp_conj, gmul
from loccspan.elimination.procedure import (
    EliminatedPoly,
    EliminationStep,
    check_point,
    choose_pivot,
    conjugate_closed_point,
    degenerate_point,
    eliminate_variable,
    initial_constraints,
    pit_check,
    prime_constraints,
    random_orthogonal_gaussian_integers,
    run_elimination,
    split_constraint,
    symbolic_span_det,
)
from loccspan.errors import BadConstraint, DegeneratePivot, InstanceTooLarge
from loccspan.linalg import haar_orthonormal_columns
from loccspan.stateset import StateSet
from loccspan.analyzer import analyze_party


def V(j, k, c=False):
    return FormalVar(j, k, c)


def exact_point(vectors):
    return conjugate_closed_point({(j, k): x for j, v in enumerate(vectors) for k, x in enumerate(v)})


# --- single-step elimination --------------------------------------------------------

def test_eliminate_variable_single_term():
    constraint = amp_conj(1, 0) * amp(2, 0) + amp_conj(1, 1) * amp(2, 1)
    result, mult = eliminate_variable(amp_conj(1, 1), constraint, V(1, 1, True), V(2, 1))
    assert result == -(amp_conj(1, 0) * amp(2, 0))
    assert mult == amp(2, 1)


def test_eliminate_variable_pivot_free():
    constraint = amp_conj(1, 0) * amp(2, 0) + amp_conj(1, 1) * amp(2, 1)
    p = amp(3, 3) * 2 + 1
    assert eliminate_variable(p, constraint, V(1, 1, True)) == (p, SparsePoly.const(1))


def test_eliminate_variable_rejects_nonlinear():
    constraint = amp_conj(1, 1) ** 2 * amp(2, 1) + amp(0, 0)
    with pytest.raises(BadConstraint):
        eliminate_variable(amp(0, 0), constraint, V(1, 1, True))
    with pytest.raises(BadConstraint):
        split_constraint(amp_conj(1, 1) * amp(1, 1), V(1, 1, True))


def test_eliminate_variable_rejects_wrong_partner():
    constraint = amp_conj(1, 0) * amp(2, 0) + amp_conj(1, 1) * amp(2, 1)
    with pytest.raises(BadConstraint):
        eliminate_variable(amp(0, 0), constraint, V(1, 1, True), V(2, 0))


@given(st.integers(0, 2**32 - 1))
def test_eliminate_variable_identity_at_constrained_points(seed):
    rng = random.Random(seed)
    a1, a2 = random_orthogonal_gaussian_integers(2, 3, rng)
    p = SparsePoly.from_terms(
        ({rng.choice([V(j, k, c) for j in (1, 2) for k in range(3) for c in (False, True)]): rng.randint(1, 3)},
         (rng.randint(-4, 4), rng.randint(-4, 4)))
        for _ in range(4)
    )
    p = p * amp_conj(1, 1) ** 2 * amp(1, 1) + p
    constraint = sum((amp_conj(1, k) * amp(2, k) for k in range(3)), SparsePoly.zero())
    result, mult = eliminate_variable(p, constraint, V(1, 1, True))
    assert result.degree(V(1, 1, True)) == 0 and result.degree(V(1, 1)) == 0
    point = exact_point([[0] * 3, a1, a2])
    if mult.evaluate(point) != (0, 0):
        assert result.evaluate(point) == gmul(mult.evaluate(point), p.evaluate(point))


# --- constraints and priming ----------------------------------------------------------

def test_initial_constraints_order():
    cs = initial_constraints(3, 4)
    assert [(c.left, c.right) for c in cs.constraints] == [(0, 1), (0, 2), (1, 2)]
    assert len(cs) == 3


def test_priming_cancels_pivot_component():
    cs = initial_constraints(4, 4)
    used = cs.constraints[0]
    comp = choose_pivot(used)
    primed = prime_constraints(cs, used, comp)
    assert len(primed) == len(cs)
    pivot = V(0, comp, True)
    for c in primed.constraints:
        if c.primed:
            assert c.right_vec[comp].is_zero()
            assert c.poly.degree(pivot) == 0
    assert sum(c.primed for c in primed.constraints) == 2


def test_priming_preserves_span_at_random_points():
    cs = initial_constraints(4, 4)
    used = cs.constraints[0]
    primed = prime_constraints(cs, used, 0)
    rng = np.random.default_rng(0)
    vals = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    point = {V(j, k): vals[j, k] for j in range(4) for k in range(4)}
    point.update({V(j, k, True): vals[j, k].conjugate() for j in range(4) for k in range(4)})

    def numeric(vec):
        return np.array([p.evaluate_float(point) for p in vec])

    before = np.array([numeric(c.right_vec) for c in cs.constraints if c.left == 0])
    after = np.array([numeric(c.right_vec) for c in primed.constraints if c.left == 0])
    assert np.linalg.matrix_rank(before) == np.linalg.matrix_rank(after) == np.linalg.matrix_rank(np.vstack([before, after]))


def test_priming_degenerate_partner():
    cs = initial_constraints(3, 2)
    used = cs.constraints[0]
    zeroed = type(used)(used.left, used.right, used.left_vec, (SparsePoly.zero(),) * 2)
    with pytest.raises(DegeneratePivot):
        prime_constraints(cs, zeroed, 0)
    with pytest.raises(DegeneratePivot):
        choose_pivot(zeroed)


# --- staged polynomial on a small base ------------------------------------------------------

def small_staged():
    rng = random.Random(3)
    variables = [V(j, k, c) for j in range(3) for k in range(2) for c in (False, True)]
    base = SparsePoly.from_terms(
        ({rng.choice(variables): rng.randint(1, 2), rng.choice(variables): 1}, (rng.randint(-3, 3), rng.randint(-3, 3)))
        for _ in range(8)
    )
    base = base + base.conj()
    cs = initial_constraints(3, 2)
    staged = EliminatedPoly(base)
    for _ in range(2):
        con = next(c for c in cs.constraints if c.left == 0)
        comp = choose_pivot(con)
        pivot = V(con.left, comp, True)
        partner, remainder = split_constraint(con.poly, pivot)
        e = staged.expand().degree(pivot)
        f = staged.expand().degree(pivot.conj())
        staged = staged.extend(EliminationStep(pivot, partner, remainder, sigma=f, tau=e, constraint=(con.left, con.right)))
        cs = prime_constraints(cs, con, comp).without(con)
    return staged


def test_staged_matches_expanded():
    staged = small_staged()
    full = staged.expand()
    assert full.variables() <= staged.variables()
    rng = random.Random(0)
    for _ in range(5):
        point = {v: (rng.randint(-9, 9), rng.randint(-9, 9)) for v in staged.variables() | staged.base.variables()}
        assert staged.evaluate(point) == full.evaluate(point)
        fpoint = {v: complex(*x) for v, x in point.items()}
        try:
            got = staged.evaluate_float(fpoint)
        except ArithmeticError:
            continue
        assert got == pytest.approx(full.evaluate_float(fpoint), rel=1e-9, abs=1e-9)
    assert pit_check(staged.specialize({}), full, trials=5, rng=1)


def test_expand_limit():
    with pytest.raises(InstanceTooLarge):
        small_staged().expand(max_terms=1)


# --- the (2, 2, 3) instance --------------------------------------------------------------

@pytest.fixture(scope="module")
def span_det():
    return symbolic_span_det()


@pytest.fixture(scope="module")
def eliminated():
    return run_elimination(seed=0)


def test_span_det_instance_gate():
    with pytest.raises(InstanceTooLarge):
        symbolic_span_det(3, 2, 4)


@pytest.mark.slow
def test_span_det_shape(span_det):
    assert span_det.total_degree() == 16
    assert len(span_det.variables()) == 24
    assert span_det.conj() == span_det


@pytest.mark.slow
def test_span_det_matches_float(span_det):
    from loccspan.elimination.procedure import float_point

    for seed in range(3):
        v = haar_orthonormal_columns(4, 3, seed).T
        m = np.vstack(
            [np.einsum("ar,br->ab", v[i].reshape(2, 2), v[j].conj().reshape(2, 2)).ravel()
             for i in range(3) for j in range(3) if i != j] + [np.eye(2).ravel()]
        )
        expected = np.linalg.det(m.conj().T @ m).real
        value, scale = span_det.evaluate_float(float_point(v), with_scale=True)
        assert abs(value - expected) / scale < 1e-6


@pytest.mark.slow
def test_run_elimination_structure(eliminated):
    staged, trace = eliminated
    assert len(trace.steps) == 3
    assert [str(v) for v in trace.eliminated] == ["a_00", "a_01", "a_10"]
    assert len(staged.slots()) == 9
    assert all(not (set(staged.variables()) & {s.pivot, s.pivot.conj()}) for s in trace.steps)
    for s in trace.steps:
        assert s.multiplier == s.partner**s.tau * s.partner.conj() ** s.sigma


@pytest.mark.slow
def test_trace_identity_exact(eliminated):
    staged, trace = eliminated
    vecs = random_orthogonal_gaussian_integers(3, 4, random.Random(5), bound=2)
    point = exact_point(vecs)
    lhs = staged.evaluate(point)
    rhs = gmul(staged.base.evaluate(point), trace.multiplier_value(point))
    assert lhs == rhs
    assert trace.multiplier_value(point) != (0, 0)


@pytest.mark.slow
def test_degenerate_point_has_rank_three(eliminated):
    staged, _ = eliminated
    pts = degenerate_point(np.random.default_rng(1))
    assert analyze_party(StateSet([2, 2], pts), 0).rank == 3
    chk = check_point(staged, pts)
    assert chk.base_value < 1e-12 and chk.eliminated_value < 1e-12
