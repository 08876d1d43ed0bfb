"""Exact polynomial elimination of orthogonality constraints from the span determinant."""

from .poly import FormalVar, SparsePoly, amp, amp_conj, gauss
from .procedure import (
    Constraint,
    ConstraintSet,
    EliminatedPoly,
    EliminationStep,
    EliminationTrace,
    PointCheck,
    check_point,
    check_points,
    constrained_points,
    degenerate_point,
    eliminate_variable,
    initial_constraints,
    pit_check,
    prime_constraints,
    run_elimination,
    symbolic_span_det,
)
