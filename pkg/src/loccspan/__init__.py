"""Span-criterion tests for strong local indistinguishability of orthogonal states."""

from .analyzer import (
    MeasurementWitness,
    PairOperator,
    SpanReport,
    Verdict,
    analyze,
    analyze_party,
    counting_blocked_possible,
    measurement_witness,
    pair_operators,
    span_matrix,
)
from .families import (
    CohenFamilyParams,
    CounterexampleParams,
    ExclusionCertificate,
    cohen_family,
    counterexample_family,
    exclusion_certificate,
    fixture_store,
    generalized_bell_set,
    verify_family_blocked,
)
from .stateset import (
    ManifoldInfo,
    MixedSet,
    StateSet,
    coarse_grain,
    eigen_select,
    manifold_info,
    validate,
)

__version__ = "0.1.0"
