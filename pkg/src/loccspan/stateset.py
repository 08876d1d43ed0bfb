"""Sets of mutually orthogonal multipartite states.

A :class:`StateSet` holds ``N`` pure states as the rows of an ``(N, D)``
complex array, ``D = prod(dims)``. Construction checks structure only
(shapes, finiteness, N >= 2); normalization and orthogonality are reported
by :func:`validate` as data, so callers can inspect slightly-off inputs.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    InvalidInput,
    InvalidPartition,
    ReductionError,
    UnsupportedPartition,
)
from .linalg import check_dims

ORTHOGONALITY_TOL = 1e-10

# Eigenvalues this close to the largest one are treated as degenerate with it.
_EIGEN_DEGENERACY_TOL = 1e-10


def _as_states(states, total: int) -> np.ndarray:
    arr = np.array(states, dtype=complex)
    if arr.ndim != 2 or arr.shape[1] != total:
        raise InvalidInput(f"states must form an (N, {total}) array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInput("state amplitudes must be finite")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class StateSet:
    dims: tuple[int, ...]
    states: np.ndarray
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        dims = check_dims(self.dims)
        object.__setattr__(self, "dims", dims)
        states = _as_states(self.states, math.prod(dims))
        if states.shape[0] < 2:
            raise InvalidInput(f"a state set needs at least 2 states, got {states.shape[0]}")
        object.__setattr__(self, "states", states)
        if self.labels is not None:
            labels = tuple(str(s) for s in self.labels)
            if len(labels) != states.shape[0]:
                raise InvalidInput("need exactly one label per state")
            object.__setattr__(self, "labels", labels)

    @property
    def n_states(self) -> int:
        return self.states.shape[0]

    @property
    def n_parties(self) -> int:
        return len(self.dims)

    @property
    def total_dim(self) -> int:
        return self.states.shape[1]

    def subset(self, indices: Iterable[int]) -> "StateSet":
        idx = list(indices)
        labels = None if self.labels is None else [self.labels[i] for i in idx]
        return StateSet(self.dims, self.states[idx], labels)

    def with_states(self, states) -> "StateSet":
        return StateSet(self.dims, states, self.labels)


@dataclass(frozen=True, eq=False)
class MixedSet:
    dims: tuple[int, ...]
    density_matrices: np.ndarray
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        dims = check_dims(self.dims)
        object.__setattr__(self, "dims", dims)
        total = math.prod(dims)
        rhos = np.array(self.density_matrices, dtype=complex)
        if rhos.ndim != 3 or rhos.shape[1:] != (total, total):
            raise InvalidInput(f"density matrices must form an (N, {total}, {total}) array, got {rhos.shape}")
        if rhos.shape[0] < 2:
            raise InvalidInput("a mixed set needs at least 2 density matrices")
        if not np.all(np.isfinite(rhos)):
            raise InvalidInput("density matrix entries must be finite")
        rhos.setflags(write=False)
        object.__setattr__(self, "density_matrices", rhos)

    @property
    def n_states(self) -> int:
        return self.density_matrices.shape[0]


@dataclass(frozen=True)
class Violation:
    """One failed invariant; ``j`` is None for normalization problems."""

    kind: str
    i: int
    j: int | None
    residual: float

    def __str__(self):
        if self.j is None:
            return f"{self.kind}: state {self.i} residual {self.residual:.3e}"
        return f"{self.kind}: states ({self.i}, {self.j}) residual {self.residual:.3e}"


def validate(states: StateSet, tol: float = ORTHOGONALITY_TOL) -> list[Violation]:
    """List normalization and orthogonality violations; empty means valid."""
    v = states.states
    gram = v.conj() @ v.T
    out = []
    for i in range(states.n_states):
        r = abs(math.sqrt(max(gram[i, i].real, 0.0)) - 1.0)
        if r >= tol:
            out.append(Violation("normalization", i, None, r))
    for i in range(states.n_states):
        for j in range(i + 1, states.n_states):
            r = float(abs(gram[i, j]))
            if r >= tol:
                out.append(Violation("orthogonality", i, j, r))
    return out


def validate_mixed(mixed: MixedSet, tol: float = 1e-10) -> list[Violation]:
    """Check Hermiticity, positivity, unit trace and orthogonal supports."""
    out = []
    rhos = mixed.density_matrices
    for i, rho in enumerate(rhos):
        herm = float(np.max(np.abs(rho - rho.conj().T)))
        if herm > 1e-12:
            out.append(Violation("hermiticity", i, None, herm))
        evals = np.linalg.eigvalsh((rho + rho.conj().T) / 2)
        if evals[0] < -1e-12:
            out.append(Violation("positivity", i, None, float(-evals[0])))
        tr = abs(np.trace(rho) - 1.0)
        if tr > tol:
            out.append(Violation("trace", i, None, float(tr)))
    for i in range(len(rhos)):
        for j in range(i + 1, len(rhos)):
            overlap = float(abs(np.trace(rhos[i] @ rhos[j])))
            if overlap >= tol:
                out.append(Violation("support_overlap", i, j, overlap))
    return out


@dataclass(frozen=True)
class ManifoldInfo:
    ambient_complex_dim: int
    constraint_count: int
    manifold_dim: int


def manifold_info(n_states: int, dims: Sequence[int]) -> ManifoldInfo:
    """Dimension count of the space of orthogonal N-sets.

    Ambient dimension is ``N * prod(dims)`` (``N d^n`` for uniform dims), one
    constraint per unordered pair.
    """
    dims = check_dims(dims)
    ambient = n_states * math.prod(dims)
    constraints = n_states * (n_states - 1) // 2
    return ManifoldInfo(ambient, constraints, ambient - constraints)


def _top_eigenvector(rho: np.ndarray) -> np.ndarray:
    """Largest-eigenvalue eigenvector with a basis-independent tie-break.

    Within the (possibly degenerate) top eigenspace we take the projection of
    the computational basis vector it overlaps most, lowest index on ties,
    and fix the phase so the largest-magnitude amplitude is real positive.
    """
    h = (rho + rho.conj().T) / 2
    evals, evecs = np.linalg.eigh(h)
    top = evals[-1]
    block = evecs[:, evals >= top - _EIGEN_DEGENERACY_TOL * max(1.0, abs(top))]
    proj = block @ block.conj().T
    weights = np.real(np.diagonal(proj))
    k = int(np.flatnonzero(weights >= weights.max() - _EIGEN_DEGENERACY_TOL)[0])
    v = proj[:, k] / math.sqrt(weights[k])
    lead = int(np.argmax(np.abs(v)))
    return v * (abs(v[lead]) / v[lead])


def eigen_select(mixed: MixedSet, tol: float = 1e-8) -> StateSet:
    """Reduce a mixed set to pure states by picking one eigenstate per member."""
    vecs = np.array([_top_eigenvector(rho) for rho in mixed.density_matrices])
    out = StateSet(mixed.dims, vecs, mixed.labels)
    bad = validate(out, tol)
    if bad:
        raise ReductionError(
            "selected eigenstates are not orthonormal (inconsistent supports): "
            + "; ".join(str(b) for b in bad[:3])
        )
    return out


def pure_to_mixed(states: StateSet) -> MixedSet:
    rhos = np.einsum("ia,ib->iab", states.states, states.states.conj())
    return MixedSet(states.dims, rhos, states.labels)


def coarse_grain(states: StateSet, partition: Sequence[Sequence[int]]) -> StateSet:
    """Merge contiguous groups of parties into single parties.

    Only groups of consecutive parties listed in increasing order are
    supported; under the big-endian flattening that is a pure relabelling of
    dimensions and the amplitudes are returned unchanged.
    """
    n = states.n_parties
    groups = [sorted(int(p) for p in g) for g in partition]
    flat = [p for g in groups for p in g]
    if any(not g for g in groups):
        raise InvalidPartition("partition groups must be non-empty")
    if len(flat) != len(set(flat)):
        raise InvalidPartition(f"partition groups overlap: {partition}")
    if sorted(flat) != list(range(n)):
        raise InvalidPartition(f"partition {partition} does not cover parties 0..{n - 1} exactly")
    for g in groups:
        if g != list(range(g[0], g[0] + len(g))):
            raise UnsupportedPartition(f"group {g} is not contiguous")
    if flat != list(range(n)):
        raise UnsupportedPartition("groups must follow the global party order")
    new_dims = [math.prod(states.dims[p] for p in g) for g in groups]
    return StateSet(new_dims, states.states, states.labels)


# --- JSON interchange -------------------------------------------------------

_PURE_KEYS = {"dims", "states"}
_MIXED_KEYS = {"dims", "density_matrices"}


def _pairs(values) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in np.ravel(values)]


def _from_pairs(pairs, what: str) -> np.ndarray:
    try:
        arr = np.array(pairs, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InvalidInput(f"{what}: expected a list of [re, im] pairs") from exc
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise InvalidInput(f"{what}: expected a list of [re, im] pairs")
    return arr[:, 0] + 1j * arr[:, 1]


def stateset_to_dict(states: StateSet) -> dict:
    out = []
    for i, v in enumerate(states.states):
        entry = {}
        if states.labels is not None:
            entry["label"] = states.labels[i]
        entry["amplitudes"] = _pairs(v)
        out.append(entry)
    return {"dims": list(states.dims), "states": out}


def mixedset_to_dict(mixed: MixedSet) -> dict:
    return {"dims": list(mixed.dims), "density_matrices": [_pairs(r) for r in mixed.density_matrices]}


def to_json(obj: StateSet | MixedSet) -> str:
    """Serialize to the canonical interchange format (stable across runs)."""
    data = stateset_to_dict(obj) if isinstance(obj, StateSet) else mixedset_to_dict(obj)
    return json.dumps(data, indent=1) + "\n"


def from_dict(data: dict) -> StateSet | MixedSet:
    if not isinstance(data, dict):
        raise InvalidInput("top level must be a JSON object")
    keys = set(data)
    if "dims" not in keys:
        raise InvalidInput("missing 'dims'")
    if "states" in keys and "density_matrices" in keys:
        raise InvalidInput("give either 'states' or 'density_matrices', not both")
    allowed = _MIXED_KEYS if "density_matrices" in keys else _PURE_KEYS
    unknown = keys - allowed
    if unknown:
        raise InvalidInput(f"unknown top-level keys: {sorted(unknown)}")
    dims = data["dims"]
    if not isinstance(dims, list) or not all(isinstance(d, int) for d in dims):
        raise InvalidInput("'dims' must be a list of integers")
    dims = check_dims(dims)
    total = math.prod(dims)

    if "density_matrices" in keys:
        rhos = []
        for i, entries in enumerate(data["density_matrices"]):
            flat = _from_pairs(entries, f"density_matrices[{i}]")
            if flat.size != total * total:
                raise InvalidInput(f"density_matrices[{i}] has {flat.size} entries, expected {total * total}")
            rhos.append(flat.reshape(total, total))
        return MixedSet(dims, rhos)

    if "states" not in keys:
        raise InvalidInput("missing 'states'")
    vecs, labels = [], []
    for i, entry in enumerate(data["states"]):
        if not isinstance(entry, dict) or "amplitudes" not in entry:
            raise InvalidInput(f"states[{i}] must be an object with 'amplitudes'")
        extra = set(entry) - {"label", "amplitudes"}
        if extra:
            raise InvalidInput(f"states[{i}] has unknown keys {sorted(extra)}")
        amp = _from_pairs(entry["amplitudes"], f"states[{i}]")
        if amp.size != total:
            raise InvalidInput(f"states[{i}] has {amp.size} amplitudes, expected {total}")
        vecs.append(amp)
        labels.append(entry.get("label"))
    if any(lab is None for lab in labels):
        labels = None
    return StateSet(dims, vecs, labels)


def from_json(text: str) -> StateSet | MixedSet:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"not valid JSON: {exc}") from exc
    return from_dict(data)


def load(path: str | Path) -> StateSet | MixedSet:
    return from_json(Path(path).read_text(encoding="utf-8"))
