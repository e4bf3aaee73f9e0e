from collections import Counter

import pytest

from schurpair.abelian import prime_power_log
from schurpair.catalog import build, build_group, parse_spec
from schurpair.classify import (CASES, THEOREMS, cases_for, classify_pair, forward_pass,
                                parametric_pool, report_ok, verify_theorem, witnesses)
from schurpair.errors import BudgetExceeded
from schurpair.groups import min_generators
from schurpair.pairs import analyze_pair, make_context


def direct(text, p):
    b = build(parse_spec(text))
    return make_context(b.group, b.N, b.K, p)


def verdict_for(ctx):
    return classify_pair(ctx, analyze_pair(ctx).t)


def test_case_ids_unique():
    ids = Counter(c.case_id for c in CASES)
    assert all(v == 1 for v in ids.values())
    assert {c.theorem for c in CASES} == set(THEOREMS)


def test_prime_restricted_cases():
    two = {c.case_id for c in cases_for("T15", 2)}
    three = {c.case_id for c in cases_for("T15", 3)}
    assert "T15.iii" in two and "T15.iii" not in three
    assert "T15.iv" in three and "T15.iv" not in two


def test_dihedral_alone():
    D = build_group("D8")
    v = verdict_for(make_context(D, D.whole(), p=2))
    assert v.t == 2 and v.status == "Confirmed"
    assert "T14.ii" in v.matched and "T5.iii.b" in v.matched


def test_central_factor_of_klein_four():
    v = verdict_for(direct("Z2 x Z2", 2))
    assert v.t == 0 and v.status == "Confirmed"
    assert "T10.b" in v.matched


def test_elementary_cube_with_rank_deficit_one():
    v = verdict_for(direct("ElemAb(2,3) x Z4", 2))
    assert v.t == 3 and "T15.xiv" in v.matched and v.status == "Confirmed"


def test_cyclic_square_order_over_trivial():
    v = verdict_for(direct("Z9 x 1", 3))
    assert v.t == 1 and v.status == "Confirmed"
    assert "T13.i" in v.matched and "T5.ii.a" in v.matched


def test_large_t_is_outside_coverage():
    v = verdict_for(direct("Z8 x Z4", 2))
    assert v.t > 3
    assert v.status == "Unlisted" and not v.in_coverage


def test_parametric_witnesses_have_right_rank():
    case = next(c for c in CASES if c.case_id == "T14.vi")
    ws = witnesses(case, 3)
    assert len(ws) >= 3
    for _, k_spec in ws:
        K = build_group(k_spec)
        m = prime_power_log(K.order, 3)
        assert min_generators(K, 3) == m - 1


def test_pool_sorted():
    pool = parametric_pool(2)
    orders = [build_group(s).order for s in pool]
    assert orders == sorted(orders)
    assert len(pool) == len(set(pool))


def test_forward_t13_three():
    entries = forward_pass("T13", 3, 81)
    assert {e["case"] for e in entries} == {"T13.i", "T13.ii", "T13.iii"}
    assert all(e["ok"] for e in entries)
    assert any(e["route"] == "split" for e in entries)


def test_blocked_minimal_witness():
    with pytest.raises(BudgetExceeded, match="T15.xiii"):
        forward_pass("T15", 2, 16)


def test_verify_t10_clean():
    report = verify_theorem("T10", 2, 16)
    assert report_ok(report)
    assert report["backward"]["mismatches"] == []
    assert report["backward"]["confirmed"] > 0
    assert "closure" in report["coverage_note"]


def test_unknown_theorem():
    with pytest.raises(ValueError):
        verify_theorem("T99", 2)
