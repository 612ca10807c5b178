"""Command line interface: ``slopelab <group> <command> ...``.

Exit codes: 0 clean, 1 some check FAILed, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import filtrations as fl
from . import geometric as git
from . import harness
from .automorphisms import AutomorphismCapExceeded, automorphism_group, commutant_dimension, is_absolutely_irreducible
from .formats import (
    FormatError,
    filtration_json,
    load_filtration,
    load_lattice,
    load_tensor_subspace,
    parse_matrix,
    parse_rational,
    read_json,
)
from .hn import hn_data, is_semistable
from .lattice import LatticeError, ndeg, slope
from .logs import Enclosure, render
from .reports import FAIL, INCONCLUSIVE, PASS
from .tensor import TensorElement, hs_norm_sq, line_degree, rho_profile, tensorial_rank

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _value(x) -> str:
    e = x if isinstance(x, Enclosure) else Enclosure.exact(x)
    return f"{e} ≈ {float(e):.6f}"


def _emit(key: str, val) -> None:
    print(f"{key}: {val}")


# ------------------------------------------------------------ lat


def cmd_lat_info(args) -> int:
    L = load_lattice(args.file)
    hn = hn_data(L)
    cert = is_semistable(L)
    _emit("label", L.label or "-")
    _emit("rank", L.rank)
    _emit("det", L.det)
    _emit("ndeg", _value(ndeg(L)))
    _emit("slope", _value(slope(L)))
    _emit("mu_max", f"{_value(hn.mu_max)} ({hn.mode})")
    verdict = {"SEMISTABLE": "true", "UNSTABLE": "false"}.get(cert.status, "unknown")
    _emit("semistable", f"{verdict} ({cert.reason})")
    if cert.witness is not None:
        _emit("destabilizing", json.dumps(cert.witness))
    return EXIT_OK


def cmd_lat_hn(args) -> int:
    L = load_lattice(args.file)
    hn = hn_data(L)
    _emit("mode", hn.mode)
    for k, (step, s) in enumerate(zip(hn.flag, hn.slopes), 1):
        _emit(f"step {k}", f"rank {len(step)}, slope {_value(s)}, basis {json.dumps(step)}")
    _emit("polygon", ", ".join(f"({r}, {render(d)})" for r, d in hn.polygon))
    return EXIT_OK


def cmd_lat_aut(args) -> int:
    L = load_lattice(args.file)
    try:
        grp = automorphism_group(L, args.cap)
    except AutomorphismCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    _emit("order", len(grp))
    _emit("commutant_dim", commutant_dimension(grp))
    _emit("absolutely_irreducible", str(is_absolutely_irreducible(grp)).lower())
    if args.list:
        for g in grp:
            print(json.dumps(g))
    return EXIT_OK


# ------------------------------------------------------------ tensor


def _element_matrix(text: str, base: Path) -> list[list[Fraction]]:
    p = Path(text)
    if not text.lstrip().startswith("[") and (p.exists() or (base / p).exists()):
        obj = read_json(p if p.exists() else base / p)
    else:
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise FormatError(f"--element: column {exc.colno}: {exc.msg}") from None
    return parse_matrix(obj, "element")


def cmd_tensor_deg(args) -> int:
    E, F = load_lattice(args.E), load_lattice(args.F)
    M = _element_matrix(args.element, Path.cwd())
    if len(M) != E.rank or len(M[0]) != F.rank:
        raise FormatError(f"element: expected a {E.rank}x{F.rank} matrix")
    if any(x.denominator != 1 for row in M for x in row):
        raise FormatError("element: entries must be integers")
    s = TensorElement(E, F, [[int(x) for x in row] for row in M])
    _emit("tensorial_rank", tensorial_rank(s))
    _emit("hs_norm_sq", hs_norm_sq(s.primitive()))
    _emit(f"degree[{args.metric}]", _value(line_degree(s, args.metric)))
    return EXIT_OK


def cmd_tensor_rho(args) -> int:
    V = load_tensor_subspace(args.V)
    prof = rho_profile(V, args.seed)
    _emit("dim", V.dim)
    for i, (a, b) in enumerate(zip(prof.lo, prof.hi), 1):
        _emit(f"rho_{i}", a if a == b else f"[{a}, {b}]")
    _emit("certified", str(prof.exact).lower())
    for k, w in prof.witnesses.items():
        _emit(f"witness {k}", json.dumps(w, default=str))
    return EXIT_OK


# ------------------------------------------------------------ git


def _print_verdict(v: git.SemistabilityVerdict) -> None:
    _emit(f"{v.side.lower()}", v.status)
    if v.margin is not None:
        _emit(f"{v.side.lower()} margin", v.margin)
    if v.witness is not None:
        _emit(f"{v.side.lower()} witness", json.dumps(v.witness, default=str))


def cmd_git_check(args) -> int:
    V = load_tensor_subspace(args.V)
    if args.side == "both":
        _print_verdict(git.left_right_check(V, "left", seed=args.seed))
        _print_verdict(git.left_right_check(V, "right", seed=args.seed))
        _print_verdict(git.both_sided_check(V, budget=args.budget, seed=args.seed))
    else:
        _print_verdict(git.left_right_check(V, args.side, seed=args.seed))
    return EXIT_OK


# ------------------------------------------------------------ filt


FILT_OPS = ("expectation", "norm", "jumps", "dual", "exterior", "translate", "dilate", "tensor", "direct-sum", "inner")


def cmd_filt_eval(args) -> int:
    F = load_filtration(args.file)
    op = args.op
    needs_other = op in ("tensor", "direct-sum", "inner")
    if needs_other and not args.other:
        raise UsageError(f"--op {op} needs --other <file>")
    if op in ("exterior", "translate", "dilate") and args.arg is None:
        raise UsageError(f"--op {op} needs --arg <value>")
    G = load_filtration(args.other) if needs_other else None
    arg = parse_rational(args.arg, "--arg") if args.arg is not None else None
    if op == "expectation":
        _emit("expectation", fl.expectation(F))
        return EXIT_OK
    if op == "norm":
        _emit("norm_sq", fl.norm_sq(F))
        return EXIT_OK
    if op == "jumps":
        _emit("jumps", " ".join(str(z) for z in F.Z()))
        return EXIT_OK
    if op == "inner":
        _emit("inner", fl.inner(F, G))
        return EXIT_OK
    if op == "dual":
        out = fl.dual(F)
    elif op == "exterior":
        if arg.denominator != 1 or not 0 <= arg <= F.dim:
            raise UsageError("exterior power needs an integer 0 <= k <= dim")
        out = fl.exterior(F, int(arg))
    elif op == "translate":
        out = fl.translate(F, arg)
    elif op == "dilate":
        if arg <= 0:
            raise UsageError("dilation factor must be positive")
        out = fl.dilate(F, arg)
    elif op == "tensor":
        out = fl.tensor(F, G)
    else:
        out = fl.direct_sum(F, G)
    print(json.dumps(filtration_json(out)))
    return EXIT_OK


# ------------------------------------------------------------ harness


def cmd_harness_run(args) -> int:
    suites = [s.strip() for s in args.suite.split(",") if s.strip()]
    for s in suites:
        if s != "all" and s not in harness.SUITES:
            raise UsageError(f"unknown suite {s!r}; choose from all, {', '.join(harness.SUITES)}")
    try:
        cfg = harness.TrialConfig(args.seed, args.rank_min, args.rank_max, args.entry_bound, args.trials)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    reports = harness.run(["all"] if "all" in suites else suites, cfg, args.jobs)
    if args.out:
        harness.write_csv(reports, args.out)
    counts = harness.summary(reports)
    print(f"{PASS} {counts[PASS]}  {FAIL} {counts[FAIL]}  {INCONCLUSIVE} {counts[INCONCLUSIVE]}")
    for r in reports:
        if r.status == FAIL or (args.verbose and r.status == INCONCLUSIVE):
            print(f"{r.status} {r.suite} {r.case_id} seed={r.seed} lhs={r.lhs} rhs={r.rhs}")
    return EXIT_FAIL if counts[FAIL] else EXIT_OK


# ------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="slopelab", description="Slopes, HN filtrations and tensor semistability of Euclidean lattices.")
    groups = p.add_subparsers(dest="group", required=True)

    lat = groups.add_parser("lat", help="lattice invariants").add_subparsers(dest="cmd", required=True)
    q = lat.add_parser("info", help="rank, degree, slope, semistability")
    q.add_argument("file")
    q.set_defaults(func=cmd_lat_info)
    q = lat.add_parser("hn", help="Harder-Narasimhan flag and polygon")
    q.add_argument("file")
    q.set_defaults(func=cmd_lat_hn)
    q = lat.add_parser("aut", help="automorphism group")
    q.add_argument("file")
    q.add_argument("--cap", type=int, default=2000, help="maximal group order")
    q.add_argument("--list", action="store_true", help="print every element")
    q.set_defaults(func=cmd_lat_aut)

    ten = groups.add_parser("tensor", help="tensor products").add_subparsers(dest="cmd", required=True)
    q = ten.add_parser("deg", help="degree of the line through a tensor")
    q.add_argument("E")
    q.add_argument("F")
    q.add_argument("--element", required=True, help="JSON matrix or a file holding one")
    q.add_argument("--metric", choices=("eps", "herm"), default="herm")
    q.set_defaults(func=cmd_tensor_deg)
    q = ten.add_parser("rho", help="tensorial rank profile of a subspace")
    q.add_argument("V")
    q.add_argument("--seed", type=int, default=0)
    q.set_defaults(func=cmd_tensor_rho)

    g = groups.add_parser("git", help="GIT semistability of tensor subspaces").add_subparsers(dest="cmd", required=True)
    q = g.add_parser("check")
    q.add_argument("V")
    q.add_argument("--side", choices=("left", "right", "both"), default="both")
    q.add_argument("--budget", type=int, default=200_000)
    q.add_argument("--seed", type=int, default=0)
    q.set_defaults(func=cmd_git_check)

    f = groups.add_parser("filt", help="R-filtration calculus").add_subparsers(dest="cmd", required=True)
    q = f.add_parser("eval")
    q.add_argument("file")
    q.add_argument("--op", choices=FILT_OPS, required=True)
    q.add_argument("--other", help="second filtration for tensor, direct-sum, inner")
    q.add_argument("--arg", help="k for exterior, a for translate, eps for dilate")
    q.set_defaults(func=cmd_filt_eval)

    h = groups.add_parser("harness", help="randomized verification suites").add_subparsers(dest="cmd", required=True)
    q = h.add_parser("run")
    q.add_argument("--suite", default="all", help=f"comma separated, from all, {', '.join(harness.SUITES)}")
    q.add_argument("--trials", type=int, default=20)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--rank-min", type=int, default=1)
    q.add_argument("--rank-max", type=int, default=3)
    q.add_argument("--entry-bound", type=int, default=5)
    q.add_argument("--jobs", type=int, default=1)
    q.add_argument("--out", help="CSV report path")
    q.add_argument("--verbose", action="store_true", help="also list INCONCLUSIVE rows")
    q.set_defaults(func=cmd_harness_run)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except (FormatError, UsageError, LatticeError, fl.FiltrationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
