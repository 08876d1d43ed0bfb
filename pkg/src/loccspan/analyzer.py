"""Span criterion for strong local indistinguishability.

For each party ``a`` and each ordered pair ``i != j`` the pair operator is
``A_ij = Tr_{not a} |psi_i><psi_j|``. A first measurement by party ``a``
with Kraus operator ``K`` keeps the set orthogonal iff ``Tr(K^dag K A_ij) = 0``
for all pairs. Stacking the row-major vectorizations of every ``A_ij``
together with the identity gives the span matrix; if it has full column
rank ``d_a^2`` then ``K^dag K`` must be proportional to the identity and the
party is blocked. A set is strongly indistinguishable when every party is
blocked.

A non-full span only means the test is inconclusive: some nontrivial
orthogonality-preserving first measurement exists (see
:func:`measurement_witness`), which says nothing about whether a full LOCC
protocol succeeds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInput, InvalidParty, WitnessUnavailable
from .linalg import RankResult, numerical_rank, split_party
from .stateset import StateSet

DEFAULT_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class PairOperator:
    party: int
    i: int
    j: int
    matrix: np.ndarray


@dataclass(frozen=True)
class SpanReport:
    party: int
    dim: int
    pair_count: int
    span_matrix_rows: int
    rank: int
    full: bool
    log_abs_det: float
    log_det_threshold: float
    ambiguous: bool
    tolerance: float
    singular_values: tuple[float, ...]
    rank_threshold: float

    @property
    def min_accepted(self) -> float:
        """Smallest singular value counted toward the rank (inf if none)."""
        return self.singular_values[self.rank - 1] if self.rank else math.inf

    @property
    def max_rejected(self) -> float:
        """Largest singular value below threshold (0 if none)."""
        return self.singular_values[self.rank] if self.rank < len(self.singular_values) else 0.0

    def to_dict(self) -> dict:
        return {
            "party": self.party,
            "dim": self.dim,
            "rank": self.rank,
            "full": self.full,
            "log_abs_det": None if math.isinf(self.log_abs_det) else self.log_abs_det,
            "ambiguous": self.ambiguous,
            "tolerance": self.tolerance,
        }


@dataclass(frozen=True)
class Verdict:
    per_party: tuple[SpanReport, ...]

    @property
    def strongly_indistinguishable(self) -> bool:
        return all(r.full for r in self.per_party)

    @property
    def any_ambiguous(self) -> bool:
        return any(r.ambiguous for r in self.per_party)

    @property
    def ranks(self) -> tuple[int, ...]:
        return tuple(r.rank for r in self.per_party)

    def summary(self) -> str:
        if self.strongly_indistinguishable:
            text = "strongly indistinguishable: every party is limited to trivial first measurements"
        else:
            open_parties = [r.party for r in self.per_party if not r.full]
            text = (
                f"not blocked (inconclusive for LOCC): parties {open_parties} admit a "
                "nontrivial orthogonality-preserving first measurement"
            )
        if self.any_ambiguous:
            text += " [AMBIGUOUS: singular values near the rank threshold]"
        return text

    def to_dict(self) -> dict:
        return {
            "per_party": [r.to_dict() for r in self.per_party],
            "strongly_indistinguishable": self.strongly_indistinguishable,
            "any_ambiguous": self.any_ambiguous,
        }


@dataclass(frozen=True, eq=False)
class MeasurementWitness:
    party: int
    H: np.ndarray
    epsilon_max: float

    def kraus(self, epsilon: float) -> np.ndarray:
        """Return ``K = sqrt(I + epsilon H)`` so that ``K^dag K = I + epsilon H``."""
        w, u = np.linalg.eigh(np.eye(len(self.H)) + epsilon * self.H)
        return (u * np.sqrt(np.clip(w, 0.0, None))) @ u.conj().T


def _check_party(states: StateSet, party: int) -> None:
    if not 0 <= party < states.n_parties:
        raise InvalidParty(f"party {party} out of range for {states.n_parties} parties")


def pair_operator_tensor(states: StateSet, party: int) -> np.ndarray:
    """All ``A_ij`` at once as an ``(N, N, d, d)`` array (diagonal ``i == j`` included)."""
    _check_party(states, party)
    t = split_party(states.states, states.dims, party)
    return np.einsum("iar,jbr->ijab", t, t.conj())


def pair_operators(states: StateSet, party: int) -> list[PairOperator]:
    """Pair operators for every ordered ``(i, j)``, ``i != j``, in lexicographic order."""
    full = pair_operator_tensor(states, party)
    n = states.n_states
    return [
        PairOperator(party, i, j, full[i, j])
        for i in range(n)
        for j in range(n)
        if i != j
    ]


def span_matrix(ops: list[PairOperator], party_dim: int) -> np.ndarray:
    """Stack ``vec(A_ij)`` rows (given order) and ``vec(I)`` last."""
    parties = {op.party for op in ops}
    if len(parties) > 1:
        raise InvalidInput(f"operators from several parties: {sorted(parties)}")
    rows = [np.asarray(op.matrix, dtype=complex).reshape(-1) for op in ops]
    if any(r.size != party_dim * party_dim for r in rows):
        raise InvalidInput(f"operators must be {party_dim}x{party_dim}")
    rows.append(np.eye(party_dim, dtype=complex).reshape(-1))
    return np.vstack(rows)


def party_span_matrix(states: StateSet, party: int) -> np.ndarray:
    return span_matrix(pair_operators(states, party), states.dims[party])


def _log_abs_det(rank_result: RankResult, cols: int, rows: int) -> float:
    # det(M^dag M) = prod of the d^2 largest sigma^2; zero when rows < cols.
    sv = rank_result.singular_values
    if rows < cols or len(sv) < cols or min(sv[:cols]) == 0.0:
        return -math.inf
    return float(2.0 * np.sum(np.log(sv[:cols])))


def _log_det_threshold(rank_result: RankResult, cols: int) -> float:
    # log det(M^dag M) the matrix would have if its d^2-th singular value sat
    # exactly at the rank threshold, so log_abs_det > this iff the span is full.
    sv = rank_result.singular_values
    if not sv or sv[0] == 0.0:
        return -math.inf
    lead = sv[: cols - 1]
    if len(lead) < cols - 1 or min(lead, default=1.0) == 0.0:
        return -math.inf
    return float(2.0 * (np.sum(np.log(lead)) + math.log(rank_result.tolerance_used)))


def analyze_party(states: StateSet, party: int, tol: float = DEFAULT_TOL) -> SpanReport:
    _check_party(states, party)
    d = states.dims[party]
    m = party_span_matrix(states, party)
    rr = numerical_rank(m, tol)
    cols = d * d
    n = states.n_states
    return SpanReport(
        party=party,
        dim=d,
        pair_count=n * (n - 1),
        span_matrix_rows=m.shape[0],
        rank=rr.rank,
        full=rr.rank == cols,
        log_abs_det=_log_abs_det(rr, cols, m.shape[0]),
        log_det_threshold=_log_det_threshold(rr, cols),
        ambiguous=rr.ambiguous,
        tolerance=tol,
        singular_values=rr.singular_values,
        rank_threshold=rr.tolerance_used,
    )


def analyze(states: StateSet, tol: float = DEFAULT_TOL) -> Verdict:
    return Verdict(tuple(analyze_party(states, p, tol) for p in range(states.n_parties)))


def counting_blocked_possible(n_states: int, d: int) -> bool:
    """Whether there are enough ordered pairs to span the traceless operators.

    With ``N(N-1) < d^2 - 1`` pair operators the span test cannot be full,
    whatever the states; this happens exactly when ``N <= d``.
    """
    if n_states < 2 or d < 2:
        raise InvalidInput("need N >= 2 and d >= 2")
    return n_states * (n_states - 1) >= d * d - 1


def measurement_witness(states: StateSet, party: int, tol: float = DEFAULT_TOL) -> MeasurementWitness:
    """Hermitian traceless ``H`` orthogonal to every pair operator.

    ``K^dag K = I + eps H`` then describes a nontrivial measurement outcome
    that keeps the set orthogonal for ``0 < eps <= epsilon_max``. Raises
    :class:`WitnessUnavailable` when the party's span is full.
    """
    _check_party(states, party)
    d = states.dims[party]
    m = party_span_matrix(states, party)
    rr = numerical_rank(m, tol)
    if rr.rank == d * d:
        raise WitnessUnavailable(f"party {party} is blocked: span matrix has full rank {d * d}")
    _, _, vh = np.linalg.svd(m)
    # Null vectors are the conjugated trailing rows of Vh. They satisfy
    # sum_ab (A_r)_ab h_ab = Tr(A_r H) = 0 with H = reshape(h)^T.
    best, best_norm = None, -1.0
    for h in vh[rr.rank:].conj():
        g = h.reshape(d, d).T
        for cand in (g + g.conj().T, 1j * (g - g.conj().T)):
            nrm = np.linalg.norm(cand)
            if nrm > best_norm:
                best, best_norm = cand, nrm
    H = best / best_norm
    H = (H + H.conj().T) / 2
    H -= np.trace(H).real / d * np.eye(d)
    H /= np.linalg.norm(H)
    lowest = float(np.linalg.eigvalsh(H)[0])
    eps_max = math.inf if lowest >= 0 else 1.0 / abs(lowest)
    return MeasurementWitness(party, H, eps_max)
