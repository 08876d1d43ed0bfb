"""Command-line interface.

Exit codes: 0 success, 1 invalid input (including usage errors), 2 numerical
failure, 3 a verdict was produced but at least one rank decision is ambiguous.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
import warnings
from pathlib import Path

import numpy as np

from . import __version__
from .analyzer import DEFAULT_TOL, analyze, measurement_witness
from .errors import InvalidInput, LoccSpanError, NumericalError, WitnessUnavailable
from .families import (
    CounterexampleParams,
    counterexample_family,
    exclusion_certificate,
    fixture_store,
    generalized_bell_set,
    verify_family_blocked,
)
from .harness import ExperimentConfig, default_threads, run_conjecture_probe, run_experiment
from .stateset import MixedSet, eigen_select, load, to_json, validate

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_NUMERICAL = 2
EXIT_AMBIGUOUS = 3

# Points below this scaled |D_A| count as lying on the degenerate set.
DEGENERATE_BASE = 1e-9
CONTAINMENT_BOUND = 1e-6


class _Parser(argparse.ArgumentParser):
    """argparse with usage errors mapped to exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _dims(text: str) -> tuple[int, ...]:
    try:
        dims = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not dims or any(d < 2 for d in dims):
        raise argparse.ArgumentTypeError(f"every local dimension must be >= 2, got {text!r}")
    return dims


def _positive_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return n


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _pairs(matrix: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in matrix]


# --- analyze -----------------------------------------------------------------

def _cmd_analyze(args) -> int:
    data = load(args.input)
    if isinstance(data, MixedSet):
        data = eigen_select(data)
    bad = validate(data)
    if bad:
        raise InvalidInput("input states are not orthonormal: " + "; ".join(str(b) for b in bad[:3]))
    verdict = analyze(data, args.tol)

    witnesses = {}
    if args.witness:
        for rep in verdict.per_party:
            try:
                w = measurement_witness(data, rep.party, args.tol)
            except WitnessUnavailable:
                continue
            witnesses[rep.party] = w

    if args.json:
        report = verdict.to_dict()
        if args.witness:
            report["witnesses"] = [
                {"party": p, "H": _pairs(w.H), "epsilon_max": None if math.isinf(w.epsilon_max) else w.epsilon_max}
                for p, w in sorted(witnesses.items())
            ]
        sys.stdout.write(json.dumps(report, indent=2) + "\n")
    elif args.csv:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["party", "dim", "rank", "full", "log_abs_det", "ambiguous", "tolerance"])
        for rep in verdict.per_party:
            w.writerow([rep.party, rep.dim, rep.rank, int(rep.full), repr(rep.log_abs_det), int(rep.ambiguous), repr(rep.tolerance)])
        sys.stdout.write(buf.getvalue())
    else:
        lines = [verdict.summary()]
        for rep in verdict.per_party:
            flag = " ambiguous" if rep.ambiguous else ""
            lines.append(f"  party {rep.party}: d={rep.dim} rank={rep.rank}/{rep.dim ** 2} full={rep.full}{flag}")
        for p, wit in sorted(witnesses.items()):
            lines.append(f"  witness for party {p}: epsilon_max={wit.epsilon_max:.6g}")
            lines.append("    H = " + np.array2string(wit.H, precision=6, suppress_small=True).replace("\n", "\n        "))
        sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_AMBIGUOUS if verdict.any_ambiguous else EXIT_OK


# --- family ------------------------------------------------------------------

def _cmd_family_counterexample(args) -> int:
    _emit(to_json(counterexample_family(CounterexampleParams(args.d, args.n))), args.out)
    return EXIT_OK


def _cmd_family_bell(args) -> int:
    _emit(to_json(generalized_bell_set(args.d, args.count)), args.out)
    return EXIT_OK


def _cmd_family_fixture(args) -> int:
    _emit(to_json(fixture_store(args.name)), args.out)
    return EXIT_OK


def _cmd_family_verify(args) -> int:
    params = CounterexampleParams(args.d, args.n)
    verdict = verify_family_blocked(params, args.tol)
    cert = exclusion_certificate(params, args.tol)
    report = {
        "d": params.d,
        "n": params.n,
        "verdict": verdict.to_dict(),
        "exclusion_certificate": {
            "excluded_pairs": [list(p) for p in cert.excluded_pairs],
            "retained_count": len(cert.retained_pairs),
            "retained_rank": cert.retained_rank,
            "independent": cert.independent,
            "ambiguous": cert.ambiguous,
        },
    }
    sys.stdout.write(json.dumps(report, indent=2) + "\n")
    return EXIT_AMBIGUOUS if verdict.any_ambiguous or cert.ambiguous else EXIT_OK


# --- Monte Carlo ---------------------------------------------------------------

def _finish_experiment(result, args) -> int:
    if args.csv:
        Path(args.csv).write_text(result.to_csv(), encoding="utf-8")
    sys.stdout.write(result.to_json())
    logging.getLogger(__name__).info("wall time %.3fs", result.wall_time)
    return EXIT_AMBIGUOUS if result.ambiguous_count else EXIT_OK


def _cmd_mc(args) -> int:
    cfg = ExperimentConfig(args.dims, args.N, args.trials, args.seed, args.tol, args.threads, args.mixed)
    return _finish_experiment(run_experiment(cfg), args)


def _cmd_conjecture(args) -> int:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        result = run_conjecture_probe(args.dims, args.N, args.trials, args.seed, args.tol, args.threads)
    for w in caught:
        sys.stderr.write(f"warning: {w.message}\n")
    return _finish_experiment(result, args)


# --- elimination ---------------------------------------------------------------

def _cmd_eliminate(args) -> int:
    from .elimination.procedure import check_point, check_points, run_elimination

    staged, trace = run_elimination(seed=args.seed)
    checks = check_points(staged, args.check_points, args.seed)
    degenerate = [c for c in checks if c.base_value < DEGENERATE_BASE]
    worst = max((c.eliminated_value for c in degenerate), default=0.0)
    residual = max((c.identity_residual for c in checks), default=0.0)
    fixture = check_point(staged, fixture_store("haar_2x2_N3_seed42").states, "fixture")
    contained = worst < CONTAINMENT_BOUND
    report = {
        "instance": {"d": 2, "n": 2, "N": 3, "party": 0},
        "base_terms": len(staged.base),
        "steps": [
            {"pivot": str(s.pivot), "constraint": list(s.constraint), "sigma": s.sigma, "tau": s.tau}
            for s in trace.steps
        ],
        "remaining_variables": len(staged.variables()),
        "points": len(checks),
        "degenerate_points": len(degenerate),
        "max_eliminated_on_degenerate": worst,
        "containment_holds": contained,
        "max_identity_residual": residual,
        "fixture_eliminated_value": fixture.eliminated_value,
    }
    sys.stdout.write(json.dumps(report, indent=2) + "\n")
    return EXIT_OK if contained and fixture.eliminated_value > 0 else EXIT_NUMERICAL


# --- parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="loccspan", description="Span-criterion checks for local indistinguishability of orthogonal states.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="run the span test on a JSON state set")
    p.add_argument("--input", required=True, help="state-set JSON (pure or mixed)")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--witness", action="store_true", help="also report a nontrivial measurement for non-blocked parties")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--csv", action="store_true")
    p.set_defaults(func=_cmd_analyze)

    fam = sub.add_parser("family", help="named state families").add_subparsers(dest="family", required=True)
    p = fam.add_parser("counterexample", aliases=["cohen"], help="the d+1 state counter-example family on n parties")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_family_counterexample)
    p = fam.add_parser("bell", help="first COUNT generalized Bell states on [d, d]")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_family_bell)
    p = fam.add_parser("verify", help="span test plus exclusion certificate for the counter-example family")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.set_defaults(func=_cmd_family_verify)
    p = fam.add_parser("fixture", help="print a stored fixture")
    p.add_argument("name")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_family_fixture)

    for name, func, help_text in (
        ("mc", _cmd_mc, "Monte Carlo sweep over Haar-random orthogonal sets"),
        ("conjecture", _cmd_conjecture, "same sweep for unequal local dimensions"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--dims", type=_dims, required=True, help="comma-separated local dimensions, e.g. 2,2")
        p.add_argument("--N", type=int, required=True, help="number of states per set")
        p.add_argument("--trials", type=_positive_int, default=1000)
        p.add_argument("--seed", type=int, default=0, help="master seed")
        p.add_argument("--tol", type=float, default=DEFAULT_TOL)
        p.add_argument("--threads", type=_positive_int, default=None, help="worker threads (default: $LOCC_SPAN_THREADS or 1)")
        p.add_argument("--csv", metavar="FILE", help="write one row per trial")
        if name == "mc":
            p.add_argument("--mixed", action="store_true", help="sample orthogonal-support mixtures and reduce them first")
        p.set_defaults(func=func)

    p = sub.add_parser("eliminate", help="symbolic elimination check at (d, n, N) = (2, 2, 3)")
    p.add_argument("--check-points", type=_positive_int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_eliminate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        if getattr(args, "threads", "unset") is None:
            args.threads = default_threads()
        return args.func(args)
    except NumericalError as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_NUMERICAL
    except (LoccSpanError, OSError) as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_INVALID
