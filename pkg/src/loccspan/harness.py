"""Monte Carlo runner for random orthogonal sets.

Each trial draws a Haar-random orthonormal ``N``-frame, runs the span
analysis and tallies the verdict. Trial seeds are derived from the master
seed with BLAKE2b, so any trial can be replayed on its own and results do
not depend on how trials are spread over worker threads.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import math
import os
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .analyzer import DEFAULT_TOL, analyze
from .errors import InvalidInput
from .linalg import check_dims, haar_orthonormal_columns
from .stateset import MixedSet, StateSet, eigen_select

log = logging.getLogger(__name__)

THEOREM = "theorem"
CONJECTURE = "conjecture evidence"
THREADS_ENV = "LOCC_SPAN_THREADS"


def trial_seed(master_seed: int, trial: int) -> int:
    """Stable 64-bit seed for one trial: BLAKE2b-64 of ``"<master>:<trial>"``."""
    digest = hashlib.blake2b(f"{int(master_seed)}:{int(trial)}".encode("ascii"), digest_size=8).digest()
    return int.from_bytes(digest, "big")


def default_threads() -> int:
    raw = os.environ.get(THREADS_ENV)
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError as exc:
        raise InvalidInput(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from exc
    if n < 1:
        raise InvalidInput(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return n


def sample_orthogonal_set(dims, N: int, seed: int) -> StateSet:
    dims = check_dims(dims)
    total = math.prod(dims)
    if not 2 <= N <= total:
        raise InvalidInput(f"need 2 <= N <= {total} for dims {list(dims)}, got N={N}")
    frame = haar_orthonormal_columns(total, N, np.random.default_rng(seed))
    return StateSet(dims, frame.T)


def sample_orthogonal_mixed_set(dims, N: int, seed: int) -> MixedSet:
    """Random mixtures with mutually orthogonal supports cut from one Haar frame.

    The ``prod(dims)`` frame vectors are split into ``N`` non-empty blocks of
    random sizes; each density matrix is a random convex mixture of its
    block's projectors.
    """
    dims = check_dims(dims)
    total = math.prod(dims)
    if not 2 <= N <= total:
        raise InvalidInput(f"need 2 <= N <= {total} for dims {list(dims)}, got N={N}")
    rng = np.random.default_rng(seed)
    frame = haar_orthonormal_columns(total, total, rng)
    # Random composition of `total` into N positive parts (some vectors may go unused).
    used = int(rng.integers(N, total + 1))
    cuts = np.sort(rng.choice(np.arange(1, used), size=N - 1, replace=False))
    bounds = np.concatenate(([0], cuts, [used]))
    rhos = []
    for a, b in zip(bounds[:-1], bounds[1:]):
        weights = rng.dirichlet(np.ones(b - a))
        block = frame[:, a:b]
        rhos.append((block * weights) @ block.conj().T)
    return MixedSet(dims, rhos)


@dataclass(frozen=True)
class ExperimentConfig:
    dims: tuple[int, ...]
    N: int
    trials: int
    master_seed: int = 0
    tolerance: float = DEFAULT_TOL
    threads: int | None = None
    mixed: bool = False

    def __post_init__(self):
        object.__setattr__(self, "dims", check_dims(self.dims))
        if self.trials < 1:
            raise InvalidInput("trials must be >= 1")
        if not self.tolerance > 0:
            raise InvalidInput("tolerance must be positive")
        if self.threads is not None and self.threads < 1:
            raise InvalidInput("threads must be a positive integer")
        total = math.prod(self.dims)
        if not 2 <= self.N <= total:
            raise InvalidInput(f"need 2 <= N <= {total} for dims {list(self.dims)}, got N={self.N}")


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    seed: int
    strongly_blocked: bool
    ambiguous: bool
    ranks: tuple[int, ...]
    min_sv_accepted: float
    max_sv_rejected: float
    gap: float


CSV_FIXED_COLUMNS = ["trial", "seed", "strongly_blocked", "ambiguous"]


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    mode: str
    blocked_count: int
    non_blocked_count: int
    ambiguous_count: int
    per_party_full_counts: list[int]
    min_singular_gap: float
    records: list[TrialRecord] = field(repr=False)
    wall_time: float = 0.0

    @property
    def blocked_fraction(self) -> float:
        return self.blocked_count / self.config.trials

    def to_dict(self, include_timing: bool = False) -> dict:
        """Deterministic summary; thread count and timing are excluded unless asked."""
        cfg = asdict(self.config)
        cfg["dims"] = list(cfg["dims"])
        threads = cfg.pop("threads")
        out = {
            "mode": self.mode,
            "config": cfg,
            "blocked_count": self.blocked_count,
            "non_blocked_count": self.non_blocked_count,
            "ambiguous_count": self.ambiguous_count,
            "blocked_fraction": self.blocked_fraction,
            "per_party_full_counts": list(self.per_party_full_counts),
            "min_singular_gap": None if math.isinf(self.min_singular_gap) else self.min_singular_gap,
        }
        if include_timing:
            out["threads"] = threads
            out["wall_time"] = self.wall_time
        return out

    def to_json(self, include_timing: bool = False) -> str:
        return json.dumps(self.to_dict(include_timing), indent=2) + "\n"

    def to_csv(self) -> str:
        n_parties = len(self.config.dims)
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(
            CSV_FIXED_COLUMNS
            + [f"rank_party_{p}" for p in range(n_parties)]
            + ["min_sv_accepted", "max_sv_rejected"]
        )
        for r in self.records:
            w.writerow(
                [r.trial, r.seed, int(r.strongly_blocked), int(r.ambiguous), *r.ranks,
                 repr(r.min_sv_accepted), repr(r.max_sv_rejected)]
            )
        return buf.getvalue()


def _run_trial(cfg: ExperimentConfig, t: int) -> TrialRecord:
    seed = trial_seed(cfg.master_seed, t)
    if cfg.mixed:
        states = eigen_select(sample_orthogonal_mixed_set(cfg.dims, cfg.N, seed))
    else:
        states = sample_orthogonal_set(cfg.dims, cfg.N, seed)
    verdict = analyze(states, cfg.tolerance)
    # Singular values are reported relative to each party's largest one.
    accepted, rejected, gap = math.inf, 0.0, math.inf
    for rep in verdict.per_party:
        smax = rep.singular_values[0] if rep.singular_values else 0.0
        if smax == 0.0:
            continue
        lo, hi = rep.min_accepted / smax, rep.max_rejected / smax
        accepted = min(accepted, lo)
        rejected = max(rejected, hi)
        if hi > 0:
            gap = min(gap, lo / hi)
    return TrialRecord(
        trial=t,
        seed=seed,
        strongly_blocked=verdict.strongly_indistinguishable,
        ambiguous=verdict.any_ambiguous,
        ranks=verdict.ranks,
        min_sv_accepted=accepted,
        max_sv_rejected=rejected,
        gap=gap,
    )


def _tally(cfg: ExperimentConfig, mode: str, records: list[TrialRecord], wall: float) -> ExperimentResult:
    blocked = sum(1 for r in records if r.strongly_blocked and not r.ambiguous)
    ambiguous = sum(1 for r in records if r.ambiguous)
    per_party = [
        sum(1 for r in records if r.ranks[p] == d * d) for p, d in enumerate(cfg.dims)
    ]
    return ExperimentResult(
        config=cfg,
        mode=mode,
        blocked_count=blocked,
        non_blocked_count=len(records) - blocked - ambiguous,
        ambiguous_count=ambiguous,
        per_party_full_counts=per_party,
        min_singular_gap=min((r.gap for r in records), default=math.inf),
        records=records,
        wall_time=wall,
    )


def _execute(cfg: ExperimentConfig, mode: str) -> ExperimentResult:
    threads = cfg.threads or default_threads()
    start = time.perf_counter()
    if threads == 1:
        records = [_run_trial(cfg, t) for t in range(cfg.trials)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            records = list(pool.map(lambda t: _run_trial(cfg, t), range(cfg.trials)))
    wall = time.perf_counter() - start
    result = _tally(cfg, mode, records, wall)
    log.info(
        "%s dims=%s N=%d trials=%d: blocked=%d ambiguous=%d (%.2fs)",
        mode, list(cfg.dims), cfg.N, cfg.trials, result.blocked_count, result.ambiguous_count, wall,
    )
    return result


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    """Theorem-mode sweep. Unequal local dimensions are labelled as conjecture evidence."""
    mode = THEOREM if len(set(cfg.dims)) == 1 else CONJECTURE
    return _execute(cfg, mode)


def run_conjecture_probe(
    dims, N: int, trials: int, seed: int = 0, tolerance: float = DEFAULT_TOL, threads: int | None = None
) -> ExperimentResult:
    """Same sweep for arbitrary local dimensions, always labelled conjecture evidence."""
    cfg = ExperimentConfig(tuple(dims), N, trials, seed, tolerance, threads)
    if N < max(cfg.dims) + 1:
        warnings.warn(
            f"N={N} is below max(dims)+1={max(cfg.dims) + 1}; the largest party can never be blocked",
            stacklevel=2,
        )
    return _execute(cfg, CONJECTURE)
