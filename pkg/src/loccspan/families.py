"""Named state families and stored fixtures."""

from __future__ import annotations

import cmath
import hashlib
import json
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .analyzer import DEFAULT_TOL, Verdict, analyze, pair_operator_tensor
from .errors import InvalidInput, NotFound, UnsupportedFamilyParams
from .linalg import haar_orthonormal_columns, numerical_rank, tensor_index
from .stateset import StateSet, from_json, to_json


@dataclass(frozen=True)
class CounterexampleParams:
    """Local dimension ``d`` and party count ``n`` of the counter-example family."""

    d: int
    n: int

    def __post_init__(self):
        if self.d < 2:
            raise UnsupportedFamilyParams(f"need d >= 2, got d={self.d}")
        if self.n < 3:
            # At n = 2 the cross terms of psi_1 and psi_d coincide and the
            # overlap <psi_1|psi_d> = d(2n - 8) = -4d is nonzero.
            raise UnsupportedFamilyParams(
                f"the family is orthogonal only for n >= 3 parties, got n={self.n}"
            )

    @property
    def omega(self) -> complex:
        return cmath.exp(2j * math.pi / self.d)

    @property
    def n_states(self) -> int:
        return self.d + 1


def _counterexample_vectors(d: int, n: int) -> np.ndarray:
    """Unnormalized family vectors; no parameter checks (used by oracles too)."""
    dims = [d] * n
    omega = cmath.exp(2j * math.pi / d)
    total = d**n
    out = np.zeros((d + 1, total), dtype=complex)

    def ghz_like(phase_power):
        v = np.zeros(total, dtype=complex)
        for m in range(d):
            v[tensor_index([m] * n, dims)] += omega ** (phase_power * m)
        return v

    def flips(j):
        # sum over beta of |0>_beta |j>^(n-1) + |j>_beta |0>^(n-1)
        v = np.zeros(total, dtype=complex)
        for beta in range(n):
            a = [j] * n
            a[beta] = 0
            b = [0] * n
            b[beta] = j
            v[tensor_index(a, dims)] += 1
            v[tensor_index(b, dims)] += 1
        return v

    out[0] = ghz_like(0)
    for j in range(1, d):
        out[j] = ghz_like(j) + flips(j)
    out[d] = 2 * n * ghz_like(1) - d * flips(1)
    return out


def counterexample_family(params: CounterexampleParams) -> StateSet:
    """The ``d + 1`` state counter-example on ``[d] * n``, each state normalized."""
    vecs = _counterexample_vectors(params.d, params.n)
    vecs /= np.linalg.norm(vecs, axis=1)[:, np.newaxis]
    labels = [f"psi{j}" for j in range(params.d + 1)]
    return StateSet([params.d] * params.n, vecs, labels)


def verify_family_blocked(params: CounterexampleParams, tol: float = DEFAULT_TOL) -> Verdict:
    return analyze(counterexample_family(params), tol)


@dataclass(frozen=True)
class ExclusionCertificate:
    excluded_pairs: tuple[tuple[int, int], ...]
    retained_pairs: tuple[tuple[int, int], ...]
    retained_rank: int
    independent: bool
    ambiguous: bool


def excluded_pairs(d: int) -> tuple[tuple[int, int], ...]:
    return ((0, d), (1, d)) + tuple((i, 0) for i in range(1, d))


def exclusion_certificate(params: CounterexampleParams, tol: float = DEFAULT_TOL) -> ExclusionCertificate:
    """Check that the ``d^2 - 1`` retained party-0 operators are linearly independent.

    Drops ``A_{0d}``, ``A_{1d}`` and ``A_{i0}`` (``i = 1..d-1``) from the
    ``d(d+1)`` pair operators and computes the numerical rank of the rest,
    without the identity row.
    """
    d = params.d
    states = counterexample_family(params)
    ops = pair_operator_tensor(states, 0)
    excluded = excluded_pairs(d)
    retained = tuple(
        (i, j) for i in range(d + 1) for j in range(d + 1) if i != j and (i, j) not in excluded
    )
    m = np.vstack([ops[i, j].reshape(-1) for i, j in retained])
    rr = numerical_rank(m, tol)
    return ExclusionCertificate(excluded, retained, rr.rank, rr.rank == d * d - 1, rr.ambiguous)


def generalized_bell_set(d: int, count: int) -> StateSet:
    """First ``count`` generalized Bell states on ``[d, d]``.

    State ``(a, b)`` is ``d^{-1/2} sum_m omega^{a m} |m>|m + b mod d>``,
    enumerated with ``b`` as the outer (slow) index.
    """
    if d < 2:
        raise InvalidInput(f"need d >= 2, got {d}")
    if not 2 <= count <= d * d:
        raise InvalidInput(f"count must be in [2, {d * d}], got {count}")
    omega = cmath.exp(2j * math.pi / d)
    vecs, labels = [], []
    for b in range(d):
        for a in range(d):
            v = np.zeros(d * d, dtype=complex)
            for m in range(d):
                v[m * d + (m + b) % d] = omega ** (a * m) / math.sqrt(d)
            vecs.append(v)
            labels.append(f"bell_a{a}_b{b}")
    return StateSet([d, d], vecs[:count], labels[:count])


# --- fixtures ---------------------------------------------------------------

def _fixture_files():
    return resources.files("loccspan") / "fixtures"


def fixture_manifest() -> dict:
    return json.loads((_fixture_files() / "manifest.json").read_text(encoding="utf-8"))


def fixture_names() -> list[str]:
    return sorted(fixture_manifest())


def fixture_bytes(name: str) -> bytes:
    manifest = fixture_manifest()
    if name not in manifest:
        raise NotFound(f"unknown fixture {name!r}; known: {sorted(manifest)}")
    entry = manifest[name]
    data = (_fixture_files() / entry["file"]).read_bytes()
    digest = hashlib.sha256(data).hexdigest()
    if digest != entry["sha256"]:
        raise InvalidInput(f"fixture {name!r} does not match its pinned sha256")
    return data


def fixture_store(name: str) -> StateSet:
    """Load a version-pinned fixture by name (checked against its sha256)."""
    return from_json(fixture_bytes(name).decode("utf-8"))


def _haar_fixture(dims, n_states, seed) -> StateSet:
    frame = haar_orthonormal_columns(math.prod(dims), n_states, np.random.default_rng(seed))
    return StateSet(dims, frame.T, [f"h{k}" for k in range(n_states)])


def _product_basis(dims) -> StateSet:
    total = math.prod(dims)
    return StateSet(dims, np.eye(total, dtype=complex), [f"e{k}" for k in range(total)])


FIXTURE_BUILDERS = {
    "bell3": lambda: generalized_bell_set(2, 3),
    "product_basis_2x2": lambda: _product_basis([2, 2]),
    "haar_2x2_N3_seed42": lambda: _haar_fixture([2, 2], 3, 42),
}


def write_fixtures(directory) -> dict:
    """Regenerate every fixture file and the manifest under ``directory``."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    manifest = {}
    for name, build in sorted(FIXTURE_BUILDERS.items()):
        states = build()
        text = to_json(states)
        fname = f"{name}.json"
        (directory / fname).write_text(text, encoding="utf-8")
        verdict = analyze(states)
        manifest[name] = {
            "file": fname,
            "sha256": hashlib.sha256(text.encode("utf-8")).hexdigest(),
            "verdict": {
                "ranks": list(verdict.ranks),
                "strongly_indistinguishable": verdict.strongly_indistinguishable,
            },
        }
    (directory / "manifest.json").write_text(json.dumps(manifest, indent=1, sort_keys=True) + "\n", encoding="utf-8")
    return manifest


# Aliases kept for the published interface names.
CohenFamilyParams = CounterexampleParams
cohen_family = counterexample_family
