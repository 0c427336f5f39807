"""Problem files: a strict JSON format for DC problems with exact scalars.

A problem file has four sections:

* ``functions``: a list of ``{"id", "pieces"}`` entries, each piece an
  interval with explicit openness flags plus polynomial coefficients in
  ascending degree order;
* ``objective``: ``{"f_id", "g_id"}`` (``g_id`` may be omitted or null for
  the zero function);
* ``constraints``: a list of ``{"id", "function_id"}`` references;
* ``config``: optional run overrides ``{x_window, grid_n, lambda_grid,
  tolerance, constraint_sample}``.

Scalars are written as decimal literals (JSON numbers or strings) or exact
rational ``"p/q"`` strings; interval endpoints additionally allow ``"inf"``
and ``"-inf"``.  Unknown keys anywhere are rejected with the key path, so a
typo cannot silently change a problem.  ``parse_problem`` and
``serialize_problem`` round-trip: parsing the serialized form reproduces an
equal ProblemSpec.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .config import DEFAULT, EvalConfig
from .duality import DCProblem, LambdaGrid
from .errors import InvalidProblem, ProblemParseError
from .extreal import ExtReal, Interval, MINUS_INF, PLUS_INF
from .pwfn import PiecewiseFn

_MAX_DEGREE = 4


# ---------------------------------------------------------------------------
# scalar literals


def parse_scalar(v, where: str) -> Fraction:
    """Decimal or "p/q" literal to an exact Fraction."""
    if isinstance(v, bool):
        raise ProblemParseError("expected a number, got a boolean", where)
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, float):
        return Fraction(v).limit_denominator(10**12)
    if isinstance(v, str):
        s = v.strip()
        try:
            if "/" in s:
                num, den = s.split("/", 1)
                return Fraction(int(num.strip()), int(den.strip()))
            return Fraction(s)
        except (ValueError, ZeroDivisionError) as exc:
            raise ProblemParseError(f"bad scalar literal {v!r}: {exc}", where) from None
    raise ProblemParseError(f"expected a scalar literal, got {type(v).__name__}", where)


def format_scalar(x) -> str:
    """Canonical string form: integers bare, rationals as p/q."""
    f = Fraction(x) if not isinstance(x, Fraction) else x
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"


def parse_endpoint(v, where: str) -> ExtReal:
    if isinstance(v, str):
        s = v.strip().lower()
        if s in ("inf", "+inf"):
            return PLUS_INF
        if s == "-inf":
            return MINUS_INF
    return ExtReal.of(parse_scalar(v, where))


def format_extreal(v: ExtReal) -> str:
    if v.is_pinf:
        return "inf"
    if v.is_minf:
        return "-inf"
    return format_scalar(v.value)


# ---------------------------------------------------------------------------
# strict object walking


def _need_object(node, where: str) -> dict:
    if not isinstance(node, dict):
        raise ProblemParseError(f"expected an object, got {type(node).__name__}", where)
    return node


def _need_list(node, where: str) -> list:
    if not isinstance(node, list):
        raise ProblemParseError(f"expected a list, got {type(node).__name__}", where)
    return node


def _check_keys(node: dict, allowed: set, where: str) -> None:
    extra = set(node) - allowed
    if extra:
        key = sorted(extra)[0]
        raise ProblemParseError(f"unknown key {key!r}", f"{where}.{key}" if where else key)


def _get(node: dict, key: str, where: str):
    if key not in node:
        raise ProblemParseError(f"missing required key {key!r}", where)
    return node[key]


# ---------------------------------------------------------------------------
# sections


def _parse_interval(node, where: str) -> Interval:
    node = _need_object(node, where)
    _check_keys(node, {"lo", "lo_closed", "hi", "hi_closed"}, where)
    lo = parse_endpoint(_get(node, "lo", where), f"{where}.lo")
    hi = parse_endpoint(_get(node, "hi", where), f"{where}.hi")
    lo_c = _get(node, "lo_closed", where)
    hi_c = _get(node, "hi_closed", where)
    for flag, name in ((lo_c, "lo_closed"), (hi_c, "hi_closed")):
        if not isinstance(flag, bool):
            raise ProblemParseError("openness flags must be booleans", f"{where}.{name}")
    I = Interval.make(lo, lo_c, hi, hi_c)
    if I.is_empty:
        raise ProblemParseError("interval is empty", where)
    return I


def _parse_piece(node, where: str) -> tuple[Interval, tuple]:
    node = _need_object(node, where)
    _check_keys(node, {"interval", "coefficients"}, where)
    I = _parse_interval(_get(node, "interval", where), f"{where}.interval")
    cs = _need_list(_get(node, "coefficients", where), f"{where}.coefficients")
    if not cs:
        raise ProblemParseError("a piece needs at least one coefficient", f"{where}.coefficients")
    if len(cs) > _MAX_DEGREE + 1:
        raise ProblemParseError(f"polynomial degree above {_MAX_DEGREE}", f"{where}.coefficients")
    coeffs = tuple(parse_scalar(c, f"{where}.coefficients[{k}]") for k, c in enumerate(cs))
    return I, coeffs


def _parse_function(node, where: str) -> tuple[str, PiecewiseFn]:
    node = _need_object(node, where)
    _check_keys(node, {"id", "pieces"}, where)
    fid = _get(node, "id", where)
    if not isinstance(fid, str) or not fid:
        raise ProblemParseError("function id must be a non-empty string", f"{where}.id")
    raw = _need_list(_get(node, "pieces", where), f"{where}.pieces")
    if not raw:
        raise ProblemParseError("a function needs at least one piece", f"{where}.pieces")
    pieces = [_parse_piece(p, f"{where}.pieces[{k}]") for k, p in enumerate(raw)]
    try:
        fn = PiecewiseFn.from_pieces(pieces)
    except ValueError as exc:
        raise ProblemParseError(str(exc), f"{where}.pieces") from None
    return fid, fn


_CONFIG_KEYS = {"x_window", "grid_n", "lambda_grid", "tolerance", "constraint_sample"}


@dataclass(frozen=True)
class ProblemSpec:
    """A parsed problem file: functions by id plus the wiring and config."""

    functions: tuple[tuple[str, PiecewiseFn], ...]
    f_id: str
    g_id: str | None
    constraints: tuple[tuple[str, str], ...]   # (constraint id, function id)
    x_window: tuple[Fraction, Fraction] | None = None
    grid_n: int | None = None
    lambda_grid: tuple[Fraction, ...] | None = None
    tolerance: float | None = None
    constraint_sample: tuple[Fraction, ...] | None = None

    def function(self, fid: str) -> PiecewiseFn:
        for k, fn in self.functions:
            if k == fid:
                return fn
        raise InvalidProblem(f"no function with id {fid!r}")

    def problem(self, name: str = "") -> DCProblem:
        f = self.function(self.f_id)
        g = self.function(self.g_id) if self.g_id is not None else None
        cons = tuple((cid, self.function(fid)) for cid, fid in self.constraints)
        return DCProblem(f, g, cons, name=name)

    def config(self, base: EvalConfig = DEFAULT) -> EvalConfig:
        kw = {}
        if self.x_window is not None:
            kw["x_window"] = (float(self.x_window[0]), float(self.x_window[1]))
        if self.grid_n is not None:
            kw["grid_n"] = self.grid_n
        if self.lambda_grid is not None:
            kw["lambda_weights"] = tuple(w for w in self.lambda_grid if w != 0)
        if self.tolerance is not None:
            kw["tol"] = self.tolerance
        return base.with_overrides(**kw) if kw else base

    def lambda_patterns(self, cfg: EvalConfig) -> LambdaGrid:
        return LambdaGrid.default(self.problem(), cfg)


def parse_problem(doc) -> ProblemSpec:
    """Parse a problem document (JSON text or an already-loaded dict)."""
    if isinstance(doc, (str, bytes)):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise ProblemParseError(f"not valid JSON: {exc.msg}",
                                    f"line {exc.lineno} column {exc.colno}") from None
    doc = _need_object(doc, "")
    _check_keys(doc, {"functions", "objective", "constraints", "config"}, "")

    raw_fns = _need_list(_get(doc, "functions", ""), "functions")
    functions: list[tuple[str, PiecewiseFn]] = []
    seen: set[str] = set()
    for k, node in enumerate(raw_fns):
        fid, fn = _parse_function(node, f"functions[{k}]")
        if fid in seen:
            raise ProblemParseError(f"duplicate function id {fid!r}", f"functions[{k}].id")
        seen.add(fid)
        functions.append((fid, fn))

    obj = _need_object(_get(doc, "objective", ""), "objective")
    _check_keys(obj, {"f_id", "g_id"}, "objective")
    f_id = _get(obj, "f_id", "objective")
    g_id = obj.get("g_id")
    if not isinstance(f_id, str):
        raise ProblemParseError("f_id must be a string", "objective.f_id")
    if g_id is not None and not isinstance(g_id, str):
        raise ProblemParseError("g_id must be a string or null", "objective.g_id")
    for fid, key in ((f_id, "objective.f_id"), (g_id, "objective.g_id")):
        if fid is not None and fid not in seen:
            raise ProblemParseError(f"unknown function id {fid!r}", key)

    cons_raw = _need_list(doc.get("constraints", []), "constraints")
    constraints: list[tuple[str, str]] = []
    seen_cids: set[str] = set()
    for k, node in enumerate(cons_raw):
        where = f"constraints[{k}]"
        node = _need_object(node, where)
        _check_keys(node, {"id", "function_id"}, where)
        cid = _get(node, "id", where)
        fid = _get(node, "function_id", where)
        if not isinstance(cid, str) or not cid:
            raise ProblemParseError("constraint id must be a non-empty string", f"{where}.id")
        if cid in seen_cids:
            raise ProblemParseError(f"duplicate constraint id {cid!r}", f"{where}.id")
        seen_cids.add(cid)
        if fid not in seen:
            raise ProblemParseError(f"unknown function id {fid!r}", f"{where}.function_id")
        constraints.append((cid, fid))

    kw: dict = {}
    if "config" in doc:
        cfg = _need_object(doc["config"], "config")
        _check_keys(cfg, _CONFIG_KEYS, "config")
        if "x_window" in cfg:
            win = _need_list(cfg["x_window"], "config.x_window")
            if len(win) != 2:
                raise ProblemParseError("x_window must be [lo, hi]", "config.x_window")
            lo = parse_scalar(win[0], "config.x_window[0]")
            hi = parse_scalar(win[1], "config.x_window[1]")
            if lo >= hi:
                raise ProblemParseError("x_window must satisfy lo < hi", "config.x_window")
            kw["x_window"] = (lo, hi)
        if "grid_n" in cfg:
            n = cfg["grid_n"]
            if not isinstance(n, int) or isinstance(n, bool) or n < 8:
                raise ProblemParseError("grid_n must be an integer >= 8", "config.grid_n")
            kw["grid_n"] = n
        if "lambda_grid" in cfg:
            ws = _need_list(cfg["lambda_grid"], "config.lambda_grid")
            weights = tuple(parse_scalar(w, f"config.lambda_grid[{k}]")
                            for k, w in enumerate(ws))
            if any(w < 0 for w in weights):
                raise ProblemParseError("multiplier weights must be nonnegative",
                                        "config.lambda_grid")
            kw["lambda_grid"] = weights
        if "tolerance" in cfg:
            tol = parse_scalar(cfg["tolerance"], "config.tolerance")
            if tol <= 0:
                raise ProblemParseError("tolerance must be positive", "config.tolerance")
            kw["tolerance"] = float(tol)
        if "constraint_sample" in cfg:
            ts = _need_list(cfg["constraint_sample"], "config.constraint_sample")
            kw["constraint_sample"] = tuple(
                parse_scalar(t, f"config.constraint_sample[{k}]")
                for k, t in enumerate(ts))

    spec = ProblemSpec(tuple(functions), f_id, g_id, tuple(constraints), **kw)
    spec.problem()   # convexity and reference validation happens at build time
    return spec


# ---------------------------------------------------------------------------
# serialization


def serialize_interval(I: Interval) -> dict:
    return {
        "lo": format_extreal(I.lo),
        "lo_closed": I.lo_closed,
        "hi": format_extreal(I.hi),
        "hi_closed": I.hi_closed,
    }


def serialize_function(fid: str, fn: PiecewiseFn) -> dict:
    return {
        "id": fid,
        "pieces": [
            {"interval": serialize_interval(I),
             "coefficients": [format_scalar(c) for c in cs]}
            for I, cs in fn.pieces
        ],
    }


def serialize_problem(spec: ProblemSpec) -> dict:
    doc: dict = {
        "functions": [serialize_function(fid, fn) for fid, fn in spec.functions],
        "objective": {"f_id": spec.f_id},
        "constraints": [{"id": cid, "function_id": fid}
                        for cid, fid in spec.constraints],
    }
    if spec.g_id is not None:
        doc["objective"]["g_id"] = spec.g_id
    cfg: dict = {}
    if spec.x_window is not None:
        cfg["x_window"] = [format_scalar(spec.x_window[0]),
                           format_scalar(spec.x_window[1])]
    if spec.grid_n is not None:
        cfg["grid_n"] = spec.grid_n
    if spec.lambda_grid is not None:
        cfg["lambda_grid"] = [format_scalar(w) for w in spec.lambda_grid]
    if spec.tolerance is not None:
        cfg["tolerance"] = repr(spec.tolerance)
    if spec.constraint_sample is not None:
        cfg["constraint_sample"] = [format_scalar(t) for t in spec.constraint_sample]
    if cfg:
        doc["config"] = cfg
    return doc


def dumps_problem(spec: ProblemSpec) -> str:
    return json.dumps(serialize_problem(spec), indent=2, sort_keys=False) + "\n"
