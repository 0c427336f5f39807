"""Built-in example problems with their published reference values.

Each entry builds a DCProblem and can recompute its reference facts,
returning a pass/fail table.  The reference values were worked out by hand
for these specific functions (primal values, dual tables, feasible and
relaxed constraint sets, epigraph identities) and the reproduction routines
recompute every one of them through the library.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .. import hull as hullmod
from ..config import DEFAULT, EvalConfig
from ..conj import c_conjugate
from ..duality import (DCProblem, LambdaGrid, check_AC, check_ECC, check_ECCQ,
                       check_ECCQII, dual_inner_table, epigraph_sum,
                       feasible_set, set_B, tfl_strong_duality,
                       thm31ii_conjugate_formula, union_K, v_dual_standard,
                       v_dual_tilde, v_primal)
from ..episet import EpiCSet, eprime_hull, is_eprime_convex, lower_envelope, set_equal
from ..extreal import Interval, MINUS_INF, PLUS_INF
from ..pwfn import DCFn, PiecewiseFn, add, infimum_over

F = Fraction


@dataclass(frozen=True, slots=True)
class ReproRow:
    """One line of a reproduction table."""

    label: str
    expected: str
    got: str
    ok: bool


@dataclass(frozen=True, slots=True)
class Fixture:
    id: str
    title: str
    build: Callable[[], DCProblem]
    reproduce: Callable[[EvalConfig], tuple[ReproRow, ...]]


# ---------------------------------------------------------------------------
# problem builders


def _ex1_problem() -> DCProblem:
    f = PiecewiseFn.from_pieces([(Interval.at_least(0), (0, 1))])
    g = PiecewiseFn.from_pieces([(Interval.point(0), (1,)),
                                 (Interval.at_least(0, closed=False), (0, 1))])
    h = PiecewiseFn.from_pieces([(Interval.at_least(0), (0, -1))])
    return DCProblem(f, g, (("t0", h),), name="example1")


def _necessity_h() -> PiecewiseFn:
    return PiecewiseFn.from_pieces([(Interval.at_most(0, closed=False), (0, 1)),
                                    (Interval.point(0), (1,))])


def _necessity_problem() -> DCProblem:
    return DCProblem(PiecewiseFn.zero(), None, (("t0", _necessity_h()),),
                     name="set_b")


def _sets_ab_problem() -> DCProblem:
    f = PiecewiseFn.single((0, 0, 0, 0, 1))
    g = PiecewiseFn.single((0, 0, 1))
    h = PiecewiseFn.from_pieces([(Interval.at_least(1, closed=False), (0, -1)),
                                 (Interval.point(1), (2,))])
    return DCProblem(f, g, (("t0", h),), name="sets_ab")


ECCQ_T_SAMPLE = (F(-1), F(-2), F(-4))


def _constraint_family() -> tuple[tuple[str, PiecewiseFn], ...]:
    out = []
    for t in ECCQ_T_SAMPLE:
        h = PiecewiseFn.from_pieces([(Interval.at_least(t, closed=False), (0, t))])
        out.append((f"t{t}", h))
    return tuple(out)


def _cubic_f() -> PiecewiseFn:
    return PiecewiseFn.from_pieces([(Interval.at_least(0), (0, 0, 0, 1))])


def _eccq_problem() -> DCProblem:
    return DCProblem(_cubic_f(), PiecewiseFn.single((0, 0, 1)),
                     _constraint_family(), name="eccq_not_necessary")


def _section5_problem() -> DCProblem:
    return DCProblem(_cubic_f(), None, _constraint_family(), name="section5")


# ---------------------------------------------------------------------------
# reproduction helpers


def _row(label: str, expected, got, ok: bool) -> ReproRow:
    return ReproRow(label, str(expected), str(got), bool(ok))


def _interval_row(label: str, got: Interval, want: Interval) -> ReproRow:
    return _row(label, want, got, got == want)


def _value_row(label: str, got, want, tol: float) -> ReproRow:
    if got.is_pinf or got.is_minf:
        return _row(label, want, got, False)
    return _row(label, want, got, abs(float(got) - float(want)) <= tol)


# ---------------------------------------------------------------------------
# per-example reproduction


def _repro_ex1(cfg: EvalConfig) -> tuple[ReproRow, ...]:
    p = _ex1_problem()
    grid = LambdaGrid.default(p, cfg)
    rows = [_interval_row("feasible set A", feasible_set(p), Interval.at_least(0))]

    vP = v_primal(p, cfg)
    rows.append(_row("v(P) = -1 exactly", -1, vP, vP == -1))

    table = dual_inner_table(p, grid, cfg, kind="tilde")
    zero_ok = pos_ok = True
    for lam, v in table:
        if not lam:
            zero_ok = zero_ok and not v.is_pinf and not v.is_minf \
                and abs(float(v)) <= cfg.value_tol
        else:
            pos_ok = pos_ok and v.is_minf
    rows.append(_row("inner dual value at zero multiplier", 0,
                     dict(table).get((), "missing"), zero_ok))
    rows.append(_row("inner dual value at positive multipliers", "-inf",
                     "all -inf" if pos_ok else "some finite", pos_ok))

    vDt = v_dual_tilde(p, grid, cfg)
    rows.append(_value_row("v(D~_L)", vDt, 0, cfg.value_tol))

    rep = tfl_strong_duality(p, grid, cfg)
    rows.append(_row("gap classification", "weak-duality-fails", rep.gap,
                     rep.gap == "weak-duality-fails"))
    return tuple(rows)


def _repro_necessity(cfg: EvalConfig) -> tuple[ReproRow, ...]:
    p = _necessity_problem()
    grid = LambdaGrid.default(p, cfg)
    rows = [_interval_row("feasible set A", feasible_set(p),
                          Interval.at_most(0, closed=False))]

    A = feasible_set(p)
    K = union_K(p, grid, cfg)
    epiA = EpiCSet.of(c_conjugate(PiecewiseFn.indicator(A)))
    hullK = eprime_hull(K, cfg)
    cmp_hull = set_equal(hullK, epiA, cfg)
    rows.append(_row("hull of the multiplier union differs from epi delta_A^c",
                     "proper subset", "equal" if cmp_hull.equal else "differs",
                     not cmp_hull.equal))
    wit = cmp_hull.witness
    wit_ok = wit is not None and wit[1] > 0 and wit[2] == 0
    rows.append(_row("witness has y* > 0 and alpha = 0",
                     "(y*>0, alpha=0)", wit, wit_ok))
    e2 = check_ECCQII(p, grid, cfg)
    rows.append(_row("condition: union is e'-convex", True, e2, e2))
    return tuple(rows)


def _repro_set_b(cfg: EvalConfig) -> tuple[ReproRow, ...]:
    p = _necessity_problem()
    grid = LambdaGrid.default(p, cfg)
    B = set_B(p, grid, cfg)
    rows = [_interval_row("relaxed constraint set B", B, Interval.at_most(0))]

    K = union_K(p, grid, cfg)
    epiB = EpiCSet.of(c_conjugate(PiecewiseFn.indicator(B)))
    cmp_hull = set_equal(eprime_hull(K, cfg), epiB, cfg)
    rows.append(_row("hull of the multiplier union equals epi delta_B^c",
                     "equal", "equal" if cmp_hull.equal else cmp_hull.note,
                     cmp_hull.equal))

    A = feasible_set(p)
    epiA = EpiCSet.of(c_conjugate(PiecewiseFn.indicator(A)))
    cmp_ab = set_equal(epiB, epiA, cfg)
    rows.append(_row("epi delta_B^c is a proper subset of epi delta_A^c",
                     "proper subset", "equal" if cmp_ab.equal else "differs",
                     not cmp_ab.equal))
    rows.append(_row("A is a proper subset of B", "A strictly inside B",
                     f"A={A}, B={B}", B.contains_interval(A) and A != B))
    return tuple(rows)


def _repro_sets_ab(cfg: EvalConfig) -> tuple[ReproRow, ...]:
    p = _sets_ab_problem()
    grid = LambdaGrid.default(p, cfg)
    A = feasible_set(p)
    B = set_B(p, grid, cfg)
    rows = [
        _interval_row("feasible set A", A, Interval.at_least(1, closed=False)),
        _interval_row("relaxed constraint set B", B, Interval.at_least(1)),
    ]
    vP = v_primal(p, cfg)
    rows.append(_value_row("v(P) over A", vP, 0, cfg.value_tol))
    infB, _ = infimum_over(p.objective(), B)
    rows.append(_value_row("inf of f - g over B", infB, 0, cfg.value_tol))
    return tuple(rows)


def _eccq_expected_eco() -> PiecewiseFn:
    return PiecewiseFn.from_pieces([
        (Interval.closed(0, F(1, 2)), (0, F(-1, 4))),
        (Interval.at_least(F(1, 2), closed=False), (0, 0, -1, 1)),
    ])


def _repro_eccq(cfg: EvalConfig) -> tuple[ReproRow, ...]:
    p = _eccq_problem()
    grid = LambdaGrid.default(p, cfg)
    rows = [_interval_row("feasible set A", feasible_set(p), Interval.at_least(0))]

    eccq = check_ECCQ(p, grid, cfg)
    rows.append(_row("condition: multiplier union covers epi delta_A^c", False,
                     eccq.equal, not eccq.equal))

    fg = p.objective().to_piecewise()
    A = feasible_set(p)
    dA = PiecewiseFn.indicator(A)
    ac = check_AC(fg, dA, cfg)
    rows.append(_row("condition: minorant envelope reaches the hull", True,
                     ac, ac))

    S = EpiCSet.msum([EpiCSet.of(c_conjugate(fg)), EpiCSet.of(c_conjugate(dA))])
    sum_ep = is_eprime_convex(S, cfg)
    rows.append(_row("epi(f-g)^c + epi delta_A^c is e'-convex", True,
                     sum_ep, sum_ep))

    vP = v_primal(p, cfg)
    vDL, lam = v_dual_standard(p, grid, cfg)
    want = F(-4, 27)
    rows.append(_value_row("v(P)", vP, want, cfg.value_tol))
    rows.append(_value_row("v(D_L)", vDL, want, cfg.value_tol))
    rows.append(_row("standard dual attained at the zero multiplier", "()",
                     lam, lam == ()))

    eco = hullmod.eco_hull(add(fg, dA), cfg).fn
    want_pw = _eccq_expected_eco()
    pts = [F(-1), F(-1, 100), F(0), F(1, 4), F(1, 2), F(3, 4), F(1), F(2)]
    ok = True
    for x in pts:
        a, b = eco.eval(x), want_pw.eval(x)
        if a.is_pinf or b.is_pinf:
            ok = ok and a.is_pinf == b.is_pinf
        else:
            ok = ok and abs(float(a) - float(b)) <= cfg.tol
    rows.append(_row("hull of f - g + delta_A matches the two-branch curve",
                     "piecewise match", "match" if ok else "mismatch", ok))
    return tuple(rows)


def _repro_section5(cfg: EvalConfig) -> tuple[ReproRow, ...]:
    p = _section5_problem()
    grid = LambdaGrid.default(p, cfg)
    rows = []

    K = union_K(p, grid, cfg)
    epiF = EpiCSet.of(c_conjugate(p.f))
    total = epigraph_sum(p, grid, cfg)
    cmp_sum = set_equal(total, epiF, cfg)
    rows.append(_row("epi f^c + K = epi f^c", "equal",
                     "equal" if cmp_sum.equal else cmp_sum.note, cmp_sum.equal))
    ecc = check_ECC(p, grid, cfg)
    rows.append(_row("condition: epi f^c + K is e'-convex", True, ecc, ecc))
    k_ep = is_eprime_convex(K, cfg)
    rows.append(_row("K is e'-convex", False, k_ep, not k_ep))

    A = feasible_set(p)
    dA = PiecewiseFn.indicator(A)
    ac = check_AC(p.f, dA, cfg)
    rows.append(_row("condition: minorant envelope reaches the hull", True,
                     ac, ac))

    th = thm31ii_conjugate_formula(p, grid, cfg)
    rows.append(_row("conjugate of f + delta_B equals the best convolution",
                     "holds with attainment", f"equal={th.equal}, "
                     f"attained={th.attained}", th.holds))
    return tuple(rows)


# ---------------------------------------------------------------------------
# registry


FIXTURES: dict[str, Fixture] = {
    fx.id: fx for fx in (
        Fixture("ex1_weakduality", "weak duality failure for the "
                "convolution dual", _ex1_problem, _repro_ex1),
        Fixture("ex_econvex_necessity", "e-convex constraints are needed "
                "for the union to cover epi delta_A^c", _necessity_problem,
                _repro_necessity),
        Fixture("ex_setB", "the relaxed set B and its epigraph identity",
                _necessity_problem, _repro_set_b),
        Fixture("ex_setsAB", "A and B can differ while both infima agree",
                _sets_ab_problem, _repro_sets_ab),
        Fixture("ex_eccq_not_necessary", "strong duality without the "
                "covering condition", _eccq_problem, _repro_eccq),
        Fixture("ex_section5_ecc", "the sum condition holds although K is "
                "not e'-convex", _section5_problem, _repro_section5),
    )
}


def get(example_id: str) -> Fixture:
    try:
        return FIXTURES[example_id]
    except KeyError:
        from ..errors import UnknownExample
        raise UnknownExample(f"unknown example id {example_id!r}; known: "
                             + ", ".join(sorted(FIXTURES))) from None
