"""Command-line front end.

Subcommands:

* ``ecvx eval <file>``: the four optimal values, gap classification,
  condition verdicts.
* ``ecvx check <file> --check <ac|eccq|eccq2|ecc|all>``: individual
  regularity conditions with witnesses.
* ``ecvx reproduce <id>``: rerun a built-in example against its published
  reference facts; nonzero exit on mismatch.
* ``ecvx subdiff <file> --at X --eps E``: subdifferential descriptors at a
  point plus the conjugate-reconstruction residual.

Exit codes: 0 success, 2 parse/usage error, 3 invalid problem or query,
4 reproduction mismatch.  Reports are deterministic: identical input and
flags produce byte-identical output.  ``ECVX_THREADS`` caps worker
parallelism (the default evaluators are single-threaded; the cap is
reported in provenance).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import fixtures
from .config import DEFAULT, EvalConfig
from .duality import (LambdaGrid, check_AC, check_ECC, check_ECCQ,
                      check_ECCQII, feasible_set, lam_str, set_B,
                      tfl_strong_duality, thm31ii_conjugate_formula)
from .errors import (EcvxError, EmptyDomain, InvalidProblem, NoMinorant,
                     OutOfDomain, ProblemParseError, UnknownExample)
from .extreal import ExtReal
from .hull import is_econvex
from .problemio import ProblemSpec, parse_problem, parse_scalar
from .pwfn import DCFn, PiecewiseFn
from .subdiff import c_subdiff, lemma9_reconstruct, thm31iii_check

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_INVALID = 3
EXIT_MISMATCH = 4


def ext_str(v: ExtReal) -> str:
    """Deterministic rendering: rationals as p/q, floats via repr."""
    if v.is_pinf:
        return "inf"
    if v.is_minf:
        return "-inf"
    x = v.value
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 \
            else f"{x.numerator}/{x.denominator}"
    return repr(float(x))


def ext_json(v: ExtReal):
    if not v.is_finite:
        return "inf" if v.is_pinf else "-inf"
    return float(v)


def _bool(b: bool) -> str:
    return "true" if b else "false"


# ---------------------------------------------------------------------------
# report plumbing


class Report:
    """Accumulates a deterministic two-part report: text plus machine JSON."""

    def __init__(self, command: str, subject: str):
        self.lines: list[str] = [f"ecvx {command}: {subject}"]
        self.payload: dict = {"command": command, "subject": subject}

    def section(self, title: str) -> None:
        self.lines.append("")
        self.lines.append(f"== {title} ==")

    def line(self, text: str) -> None:
        self.lines.append(text)

    def kv(self, key: str, value) -> None:
        self.payload[key] = value

    def render(self, cfg: EvalConfig | None = None,
               grid: LambdaGrid | None = None,
               notes: tuple[str, ...] = ()) -> str:
        out = list(self.lines)
        out.append("")
        out.append("== machine ==")
        out.append(json.dumps(self.payload, sort_keys=True))
        out.append("")
        out.append("== provenance ==")
        if cfg is not None:
            out.append(f"x window: [{cfg.x_window[0]}, {cfg.x_window[1]}], "
                       f"{cfg.grid_n} nodes")
            out.append(f"W window: [{cfg.w_window[0]}, {cfg.w_window[1]}] per axis, "
                       f"{cfg.w_axis_n} nodes per axis")
            out.append(f"tolerances: envelope {cfg.tol:g}, pointwise {cfg.value_tol:g}")
            out.append(f"worker cap (ECVX_THREADS): {cfg.threads}")
        if grid is not None:
            pats = ", ".join(lam_str(lam) for lam in grid)
            out.append(f"multiplier grid ({len(grid)} patterns): {pats}")
        out.append("conventions: indicator functions are 0 on their set; "
                   "clashing infinities add to -inf; dual inner infima run "
                   "over the domain of the left conjugate with "
                   "finite - (+inf) = -inf")
        for n in notes:
            out.append(f"note: {n}")
        return "\n".join(out) + "\n"


def _load(path: str) -> ProblemSpec:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ProblemParseError(f"cannot read problem file: {exc}", path) from None
    return parse_problem(text)


def _objective_pw(spec: ProblemSpec) -> PiecewiseFn:
    p = spec.problem()
    if spec.g_id is None:
        return p.f
    return DCFn.of(p.f, p.g).to_piecewise()


def _cfg_for(spec: ProblemSpec, args) -> EvalConfig:
    cfg = spec.config(DEFAULT)
    kw = {}
    if getattr(args, "grid", None) is not None:
        kw["grid_n"] = args.grid
    if getattr(args, "tol", None) is not None:
        kw["tol"] = args.tol
    if getattr(args, "lambda_max", None) is not None:
        kw["lambda_max_active"] = args.lambda_max
    return cfg.with_overrides(**kw) if kw else cfg


# ---------------------------------------------------------------------------
# subcommands


def cmd_eval(args) -> int:
    spec = _load(args.file)
    cfg = _cfg_for(spec, args)
    p = spec.problem(name=args.file)
    grid = LambdaGrid.default(p, cfg)
    rep = tfl_strong_duality(p, grid, cfg)

    r = Report("eval", args.file)
    r.section("optimal values")
    for label, key, v, lam in (
        ("v(P)", "vP", rep.vP, None),
        ("v(D_L)", "vDL", rep.vDL, rep.lamDL),
        ("v(D-bar_L)", "vDLbar", rep.vDLbar, rep.lamDLbar),
        ("v(D-tilde_L)", "vDLtilde", rep.vDLtilde, rep.lamDLtilde),
    ):
        at = f"  (attained at lambda = {lam_str(lam)})" if lam is not None else ""
        r.line(f"{label:<14} = {ext_str(v)}{at}")
        r.kv(key, ext_json(v))
    r.kv("lamDL", lam_str(rep.lamDL) if rep.lamDL is not None else None)
    r.kv("lamDLtilde", lam_str(rep.lamDLtilde) if rep.lamDLtilde is not None else None)
    r.line(f"gap classification: {rep.gap}")
    r.kv("gap", rep.gap)

    r.section("conditions")
    for k in sorted(rep.conditions):
        r.line(f"{k:<10} = {_bool(rep.conditions[k])}")
    r.kv("conditions", {k: rep.conditions[k] for k in sorted(rep.conditions)})
    r.kv("hypotheses_met", rep.hypotheses_met)

    sys.stdout.write(r.render(cfg, grid, rep.notes))
    return EXIT_OK


_CHECKS = ("ac", "eccq", "eccq2", "ecc", "all")


def cmd_check(args) -> int:
    spec = _load(args.file)
    cfg = _cfg_for(spec, args)
    p = spec.problem(name=args.file)
    grid = LambdaGrid.default(p, cfg)
    which = args.check
    wanted = ("ac", "eccq", "eccq2", "ecc", "g_econvex", "thm31") \
        if which == "all" else (which,)

    r = Report("check", args.file)
    r.section("verdicts")
    results: dict[str, bool] = {}

    if "ac" in wanted:
        A = feasible_set(p)
        fg = _objective_pw(spec)
        if A.is_empty:
            ok = False
            r.line("AC: false  (feasible set is empty)")
        else:
            try:
                ok = check_AC(fg, PiecewiseFn.indicator(A), cfg)
            except NoMinorant:
                ok = False
            r.line(f"AC (objective difference with the feasible-set "
                   f"indicator): {_bool(ok)}")
        results["ac"] = ok
    if "eccq" in wanted:
        cmp = check_ECCQ(p, grid, cfg)
        results["eccq"] = cmp.equal
        r.line(f"ECCQ (multiplier union covers the conjugate epigraph of "
               f"the feasible-set indicator): {_bool(cmp.equal)}")
        if not cmp.equal and cmp.witness is not None:
            w = ", ".join(str(t) for t in cmp.witness)
            r.line(f"  witness in the symmetric difference: ({w})  "
                   f"[{cmp.note}]")
            r.kv("eccq_witness", [float(t) for t in cmp.witness])
    if "eccq2" in wanted:
        ok = check_ECCQII(p, grid, cfg)
        results["eccq2"] = ok
        r.line(f"ECCQII (multiplier union is e'-convex): {_bool(ok)}")
    if "ecc" in wanted:
        ok = check_ECC(p, grid, cfg)
        results["ecc"] = ok
        r.line(f"ECC (objective conjugate epigraph plus the union is "
               f"e'-convex): {_bool(ok)}")
    if "g_econvex" in wanted:
        ok = is_econvex(p.g, cfg)
        results["g_econvex"] = ok
        r.line(f"g is e-convex: {_bool(ok)}")
    if "thm31" in wanted:
        hyp = results.get("ac", False) and results.get("eccq2", False)
        th = thm31ii_conjugate_formula(p, grid, cfg)
        B = set_B(p, grid, cfg)
        agree = None
        if hyp and not B.is_empty:
            pts = B.intersect(p.f.domain_hull()).sample(3)
            iii_ok = all(
                thm31iii_check(p.f, [h for _, h in p.constraints], B, x,
                               cfg=cfg).equal
                for x in pts) if p.constraints else True
            ecc_ok = results["ecc"] if "ecc" in results \
                else check_ECC(p, grid, cfg)
            agree = (ecc_ok == th.holds == iii_ok)
            r.line(f"three-way agreement (set test, conjugate formula, "
                   f"subdifferential sum rule): {_bool(agree)}")
            results["thm31_agree"] = agree
        else:
            r.line("three-way cross-validation: diagnostic only "
                   "(hypotheses not verified on this grid); conjugate "
                   f"formula holds: {_bool(th.holds)}")
            results["thm31_diagnostic"] = th.holds

    r.kv("results", {k: results[k] for k in sorted(results)})
    sys.stdout.write(r.render(cfg, grid))
    return EXIT_OK


def cmd_reproduce(args) -> int:
    fx = fixtures.get(args.example_id)
    rows = fx.reproduce(DEFAULT)
    r = Report("reproduce", fx.id)
    r.line(f"title: {fx.title}")
    r.section("reference table")
    all_ok = True
    table = []
    for row in rows:
        mark = "PASS" if row.ok else "FAIL"
        all_ok = all_ok and row.ok
        r.line(f"[{mark}] {row.label}: expected {row.expected}, got {row.got}")
        table.append({"label": row.label, "expected": row.expected,
                      "got": row.got, "ok": row.ok})
    r.kv("rows", table)
    r.kv("all_ok", all_ok)
    r.section("summary")
    r.line(f"{sum(row.ok for row in rows)}/{len(rows)} rows match")
    sys.stdout.write(r.render(DEFAULT))
    return EXIT_OK if all_ok else EXIT_MISMATCH


def cmd_subdiff(args) -> int:
    spec = _load(args.file)
    cfg = _cfg_for(spec, args)
    xbar = parse_scalar(args.at, "--at")
    eps = parse_scalar(args.eps, "--eps")
    if eps < 0:
        raise InvalidProblem("--eps must be nonnegative")
    fg = _objective_pw(spec)
    if not fg.domain_contains(xbar):
        raise OutOfDomain(f"point {args.at} is outside the objective domain")

    r = Report("subdiff", args.file)
    r.section(f"subdifferentials at x = {args.at}, eps = {args.eps}")
    d = c_subdiff(fg, xbar, eps, cfg)
    r.line(f"eps-subgradient slopes: {d.xstar_set}")
    r.line(f"with region: {d.describe()}")
    r.kv("xstar_lo", ext_json(d.xstar_set.lo) if not d.is_empty else None)
    r.kv("xstar_hi", ext_json(d.xstar_set.hi) if not d.is_empty else None)
    r.kv("empty", d.is_empty)

    lem = lemma9_reconstruct(fg, xbar, cfg)
    r.section("conjugate reconstruction from subgradient slices")
    r.line(f"no undercut of the conjugate envelope: {_bool(lem.sound)}")
    r.line(f"gap within the eps-grid quantization bound: {_bool(lem.certified)}")
    r.line(f"largest sampled gap: {lem.max_gap:.9g}")
    r.kv("recon_sound", lem.sound)
    r.kv("recon_certified", lem.certified)
    r.kv("recon_max_gap", lem.max_gap)
    sys.stdout.write(r.render(cfg))
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):   # usage errors share the parse exit code
        self.print_usage(sys.stderr)
        raise SystemExit(EXIT_PARSE)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="ecvx",
                 description="Evenly-convex analysis and DC Lagrange "
                             "duality on the real line")
    sub = ap.add_subparsers(dest="cmd", required=True)

    pe = sub.add_parser("eval", help="optimal values and gap classification")
    pe.add_argument("file", help="problem file (JSON)")
    pe.add_argument("--lambda-max", dest="lambda_max", type=int, metavar="N",
                    help="cap on simultaneously active constraints in the "
                         "multiplier grid")
    pe.add_argument("--grid", type=int, metavar="N", help="1-D grid nodes")
    pe.add_argument("--tol", type=float, metavar="T",
                    help="envelope comparison tolerance")
    pe.set_defaults(run=cmd_eval)

    pc = sub.add_parser("check", help="regularity condition verdicts")
    pc.add_argument("file", help="problem file (JSON)")
    pc.add_argument("--check", required=True, choices=_CHECKS,
                    help="which condition to verify")
    pc.add_argument("--grid", type=int, metavar="N", help="1-D grid nodes")
    pc.add_argument("--tol", type=float, metavar="T",
                    help="envelope comparison tolerance")
    pc.set_defaults(run=cmd_check)

    pr = sub.add_parser("reproduce",
                        help="rerun a built-in example against its "
                             "published values")
    pr.add_argument("example_id", metavar="id",
                    help="one of: " + ", ".join(sorted(fixtures.FIXTURES)))
    pr.set_defaults(run=cmd_reproduce)

    ps = sub.add_parser("subdiff", help="subdifferential descriptors at a point")
    ps.add_argument("file", help="problem file (JSON)")
    ps.add_argument("--at", required=True, metavar="X",
                    help="evaluation point (decimal or p/q)")
    ps.add_argument("--eps", default="0", metavar="E",
                    help="epsilon (decimal or p/q, default 0)")
    ps.add_argument("--grid", type=int, metavar="N", help="1-D grid nodes")
    ps.add_argument("--tol", type=float, metavar="T",
                    help="envelope comparison tolerance")
    ps.set_defaults(run=cmd_subdiff)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.run(args)
    except ProblemParseError as exc:
        print(f"ecvx: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except UnknownExample as exc:
        print(f"ecvx: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (InvalidProblem, OutOfDomain, EmptyDomain) as exc:
        print(f"ecvx: invalid problem: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except EcvxError as exc:
        print(f"ecvx: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
