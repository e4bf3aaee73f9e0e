import random

import pytest

from schurpair.abelian import AbelianInvariants
from schurpair.catalog import build, build_group, parse_spec
from schurpair.errors import BoundViolation, NoComplement, NotNormal
from schurpair.groups import Subgroup, relabel, subgroup_generated
from schurpair.homology import schur_multiplier
from schurpair.pairs import (analyze_pair, check_bounds, deficiency_t, make_context,
                             multiplier_of_product, pair_multiplier, pair_multiplier_order_direct)


def direct(n_spec, k_spec, p):
    b = build(parse_spec(f"({n_spec}) x ({k_spec})"))
    return make_context(b.group, b.N, b.K, p)


def test_one_factor_of_klein_four():
    ctx = direct("Z2", "Z2", 2)
    assert pair_multiplier(ctx) == AbelianInvariants((2,))


def test_whole_group_pair_equals_multiplier():
    G = build_group("D8")
    ctx = make_context(G, G.whole(), p=2)
    assert pair_multiplier(ctx) == AbelianInvariants((2,))


def test_e1_times_z3():
    ctx = direct("E1(3)", "Z3", 3)
    mgn = pair_multiplier(ctx, budget=81)
    assert mgn.order == 3 ** 4
    assert deficiency_t(ctx, mgn.order) == 2
    assert pair_multiplier_order_direct(ctx.n_group(), ctx.k_group(), 81) == 3 ** 4


@pytest.mark.parametrize("n_spec,k_spec,p,order,t", [
    ("Z4", "Z2", 2, 2, 2),
    ("Z9", "Z3", 3, 3, 2),
    ("Z2", "Z4", 2, 2, 1),
    ("Z4", "Z4", 2, 4, 3),
    ("Z9", "Z9", 3, 9, 3),
])
def test_direct_order_formula(n_spec, k_spec, p, order, t):
    ctx = direct(n_spec, k_spec, p)
    assert pair_multiplier_order_direct(ctx.n_group(), ctx.k_group(), 81) == order
    assert deficiency_t(ctx, order) == t


def test_deficiency_examples():
    assert deficiency_t(direct("Z3", "Z3", 3), 3) == 0
    G = build_group("Z9")
    assert deficiency_t(make_context(G, G.whole(), p=3), 1) == 1
    E = build_group("E1(3)")
    assert deficiency_t(make_context(E, E.whole(), p=3), 9) == 1
    with pytest.raises(BoundViolation):
        deficiency_t(make_context(G, G.whole(), p=3), 9)


def test_bounds_quaternion_equality():
    Q = build_group("Q8")
    ctx = make_context(Q, Q.whole(), p=2)
    b = check_bounds(ctx, pair_multiplier(ctx))
    assert b.bound7_holds and b.pair_center_order == 2 and b.commutator_order == 2
    assert b.bound1_slack == 3


def test_bounds_elementary_met_exactly():
    ctx = direct("Z2 x Z2", "Z2", 2)
    assert check_bounds(ctx, pair_multiplier(ctx)).bound1_slack == 0


def test_literal_commutator_bound_fails_for_central_pairs():
    # N central gives n' = 0, so the bound demands |M(G,N)| = 1
    ctx = direct("Z2", "Z2", 2)
    b = check_bounds(ctx, pair_multiplier(ctx))
    assert not b.bound7_holds
    assert b.commutator_bound_holds and b.order_bound_holds


def test_no_complement():
    Q = build_group("Q8")
    with pytest.raises(NoComplement):
        make_context(Q, Q.center(), p=2)


def test_not_normal():
    D = build_group("D8")
    refl = next(a for a in range(8) if D.element_order(a) == 2 and a not in D.center())
    with pytest.raises(NotNormal):
        make_context(D, subgroup_generated(D, [refl]), p=2)


def test_bad_complement_rejected():
    G = build_group("Z4 x Z2")
    N = subgroup_generated(G, [2])
    with pytest.raises(NoComplement):
        make_context(G, N, Subgroup(G, [0, 4]), p=2)


def test_report_json_fields():
    report = analyze_pair(direct("Z4", "Z2", 2))
    data = report.to_json()
    for key in ("mG", "mK", "mGN", "t", "bound1_slack", "bound7_holds", "commutator_order",
                "pair_center_order", "matched_cases"):
        assert key in data
    assert data["t"] == 2


def test_t_invariant_under_relabelling():
    ctx = direct("D8", "Z2", 2)
    t = analyze_pair(ctx).t
    rng = random.Random(11)
    rest = list(range(1, ctx.G.order))
    rng.shuffle(rest)
    perm = [0] + rest
    H = relabel(ctx.G, perm)
    new = {old: i for i, old in enumerate(perm)}
    N = Subgroup(H, [new[a] for a in ctx.N.elements])
    K = Subgroup(H, [new[a] for a in ctx.K.elements])
    assert analyze_pair(make_context(H, N, K, 2)).t == t


def test_product_formula_matches_homology():
    A, B = build_group("E1(3)"), build_group("Z3")
    assert multiplier_of_product(A, B, 81) == schur_multiplier(build_group("E1(3) x Z3"), 81)
