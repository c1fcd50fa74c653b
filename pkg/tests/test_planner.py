from fractions import Fraction

import numpy as np
import pytest

from dttalg import planner as pl
from dttalg.formula import CostTriple
from dttalg.transforms import TransformId, dct, dft, dst

THIRD = Fraction(1, 3)
LOG2 = {2: 1, 4: 2, 8: 3, 16: 4, 32: 5, 64: 6}


def total(t, strategy="min-cost"):
    return pl.plan_cost(pl.plan(t, pl.parse_strategy(strategy))).total


# costs at 2-powers -----------------------------------------------------------

def test_dct3_two_power_totals():
    assert [total(dct(3, n)) for n in pl.TWO_POWERS] == [3, 13, 41, 113, 289, 705]


@pytest.mark.parametrize("n", pl.TWO_POWERS)
def test_dct4_two_power_totals(n):
    assert total(dct(4, n)) == 2 * n * LOG2[n] + n
    assert total(dct(4, n, poly=True)) == total(dct(4, n)) - n
    assert total(dst(3, n)) == total(dct(3, n))
    assert total(dst(4, n)) == total(dct(4, n))


@pytest.mark.parametrize("n", pl.TWO_POWERS)
def test_two_power_skew_costs_match_closed_forms(n):
    for t in (dct(3, n, THIRD), dst(3, n, THIRD), dct(4, n, THIRD), dct(3, n), dct(4, n)):
        assert pl.plan_cost(pl.plan(t)) == pl.closed_form_cost(t)


# costs at 3-powers -----------------------------------------------------------

def test_dct3_three_power_costs():
    assert pl.plan_cost(pl.plan(dct(3, 3))).total == 6
    assert pl.plan_cost(pl.plan(dct(3, 9))) == CostTriple(32, 12, 4)
    for n in pl.THREE_POWERS:
        t = dct(3, n)
        assert pl.plan_cost(pl.plan(t)) == pl.closed_form_cost(t)
        t = dct(3, n, THIRD)
        assert pl.plan_cost(pl.plan(t)) == pl.closed_form_cost(t)


def test_dct4_three_power_plans_beat_the_closed_forms():
    # the planner finds cheaper plans than the closed forms here
    want = {3: (10, 11), 9: (63, 65), 27: (289, 299)}
    for n, (got, table) in want.items():
        assert total(dct(4, n)) == got
        assert pl.closed_form_cost(dct(4, n)).total == table


# small golden plans ----------------------------------------------------------

def test_small_golden_plans():
    assert pl.plan_cost(pl.plan(dct(3, 5))) == CostTriple(12, 6, 1)
    assert pl.plan_cost(pl.plan(dct(2, 5, transposed=True))) == CostTriple(12, 6, 1)
    assert pl.plan_cost(pl.plan(dct(2, 3, poly=True))) == CostTriple(4, 0, 1)
    assert pl.plan_cost(pl.plan(dct(2, 3))) == CostTriple(4, 1, 1)


# closed forms ----------------------------------------------------------------

def _derived_two_power(kind, n, skew, poly):
    # written out from the flop counts of the radix-2 split, independent of closed_form_cost
    L = n * LOG2[n]
    if kind in ("C3", "S3"):
        adds, mults = 3 * L // 2 - n + 1, L // 2
        if kind == "S3" and skew and not poly:
            mults += n // 2
        return adds, mults, 0
    return 3 * L // 2, L // 2 + (0 if poly else n), 0


@pytest.mark.parametrize("n", pl.TWO_POWERS)
def test_closed_form_two_power_table(n):
    for kind, fam, typ in (("C3", "DCT", 3), ("S3", "DST", 3), ("C4", "DCT", 4), ("S4", "DST", 4)):
        for r in (None, THIRD):
            for poly in (False, True):
                t = TransformId(fam, typ, n, r, poly=poly)
                cf = pl.closed_form_cost(t)
                if kind == "S3" and poly and r is None:
                    assert cf is None
                    continue
                assert tuple(cf) == _derived_two_power(kind, n, r is not None, poly)


def test_closed_form_totals_at_three_powers():
    for n, L in ((3, 3), (9, 18), (27, 81)):
        assert pl.closed_form_cost(dct(4, n, THIRD)).total == 4 * L + n
        assert pl.closed_form_cost(dct(3, n, THIRD)).total == 4 * L - n + 1


def test_closed_form_absent_or_invalid():
    assert pl.closed_form_cost(dct(5, 5)) is None
    assert pl.closed_form_cost(dct(3, 4, inverse=True)) is None
    assert pl.closed_form_cost(dst(4, 9, poly=True)) is None
    with pytest.raises(ValueError):
        pl.closed_form_cost(dct(3, 6))
    with pytest.raises(ValueError):
        pl.closed_form_cost(dct(7, 4))


# strategies ------------------------------------------------------------------

def test_parse_strategy():
    assert str(pl.parse_strategy("min-cost")) == "min-cost"
    assert pl.parse_strategy("radix2-where-possible") == pl.parse_strategy("fixed-radix:2")
    assert pl.parse_strategy("radix3").k == 3
    assert str(pl.parse_strategy("fact")) == "fact"
    assert str(pl.parse_strategy("rule:twiddle")) == "rule:twiddle"
    for bad in ("fastest", "fixed-radix:1", "rule:nope", "rule:"):
        with pytest.raises(ValueError):
            pl.parse_strategy(bad)


def test_min_cost_is_never_beaten_by_other_strategies():
    for t in (dct(3, 16), dct(4, 27), dst(4, 12, THIRD), dct(2, 16), dct(7, 10)):
        best = total(t)
        for s in pl.strategy_names():
            assert total(t, s) >= best


def test_fixed_radix_splits_at_the_root():
    p = pl.plan(dct(3, 16), pl.parse_strategy("fixed-radix:4"))
    assert p.param == 4
    assert pl.verify_plan(p) < 1e-12
    p = pl.plan(dct(3, 12), pl.parse_strategy("rightmost-balanced"))
    assert p.param in (3, 4)


def test_rule_preference_is_honored():
    p = pl.plan(dct(3, 8), pl.parse_strategy("rule:via-U-basis"))
    assert p.rule == "via-U-basis"
    assert pl.verify_plan(p) < 1e-12


def test_plan_with_every_root_option():
    bad, count = [], 0
    for t in (dct(4, 12, THIRD), dst(3, 9), dct(1, 9), dst(7, 11), dct(6, 5), dft(12)):
        from dttalg.rules import options
        for rule, k in options(t):
            p = pl.plan_with(t, rule.tag, k)
            count += 1
            if not pl.verify_plan(p) <= 1e-10:
                bad.append((t, rule.tag, k))
    assert bad == [] and count > 20


def test_dft_plans():
    for n in (4, 8, 16, 12):
        p = pl.plan(dft(n), pl.parse_strategy("rule:dft-ct"))
        assert p.rule == "dft-ct"
        assert pl.verify_plan(p) <= 1e-10
    assert pl.verify_plan(pl.plan(dft(8, 4))) <= 1e-10


# plans, traces, determinism ----------------------------------------------------

def test_large_plan_verifies_by_vectors():
    p = pl.plan(dct(3, 1024))
    assert pl.verify_plan(p) < 1e-10
    assert pl.plan_cost(p) == pl.closed_form_cost(dct(3, 1024))


def test_skew_children_in_trace():
    p = pl.plan(dct(3, 8))
    kids = [c.tid.r for c in p.children if c.tid.n == 4]
    assert kids == [Fraction(1, 4), Fraction(3, 4)]
    assert "fused-T-basis:2" in pl.compact_trace(p)


def test_trace_is_stable_across_planners():
    a = pl.Planner()
    b = pl.Planner()
    for t in (dct(4, 64), dst(8, 20), dct(2, 32), dst(3, 27, THIRD)):
        assert pl.compact_trace(pl.plan(t, planner=a)) == pl.compact_trace(pl.plan(t, planner=b))


def test_report_rows():
    rows = [pl.cost_row(pl.plan(dct(3, n))) for n in (4, 8)]
    assert tuple(rows[0]) == pl.REPORT_COLUMNS
    assert rows[1]["total"] == 41 and rows[1]["delta"] == 0
    text = pl.report_csv(rows)
    assert text.splitlines()[0] == ",".join(pl.REPORT_COLUMNS)
    assert "DCT-3" in pl.report_text(rows)


def test_unsupported_size_reports_blocking_rules():
    with pytest.raises(pl.PlanError) as e:
        pl.plan(dct(3, 67))
    msg = str(e.value)
    assert "via-T-basis needs" in msg and "by-definition needs" in msg


def test_catalog_covers_families():
    cat = pl.catalog()
    assert len(cat) == len(set(cat))
    fams = {(t.family, t.type) for t in cat}
    assert len(fams) == 16 + 4
    assert {t.n for t in cat if t.family == "DCT" and t.type == 7} == {
        n for n in range(1, 42) if n % 3}
    assert {t.n for t in cat if t.family == "DST" and t.type == 5} == {1, 4, 13, 40}
    assert {t.n for t in cat if t.family == "DCT" and t.type == 5} == {1, 2, 5, 14, 41}


def test_costs_do_not_depend_on_the_skew_value():
    # r = 1/4 and 2/3 make some constants vanish; the generic-r count must not notice
    for make in (lambda r: dct(3, 9, r), lambda r: dst(4, 9, r, poly=True), lambda r: dct(4, 8, r),
                 lambda r: dct(4, 2, r), lambda r: dst(3, 27, r, poly=True)):
        costs = {pl.plan_cost(pl.plan(make(r), planner=pl.Planner()))
                 for r in (THIRD, Fraction(2, 3), Fraction(1, 4), Fraction(1, 5))}
        assert len(costs) == 1
