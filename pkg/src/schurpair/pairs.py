"""Schur multiplier of a pair ``(G, N)`` whose normal subgroup N has a complement K.

``M(G) = M(G,N) x M(K)``, so ``M(G,N)`` is read off by cancelling ``M(K)``
from ``M(G)``.  With ``|N| = p^n`` and ``|K| = p^m`` the deficiency t is
defined by ``|M(G,N)| = p^(n(2m+n-1)/2 - t)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .abelian import AbelianInvariants, cancel_direct_factor, direct_sum, prime_power_log, tensor
from .errors import BoundViolation, NoComplement, NotNormal, NotPGroup
from .groups import (FiniteGroup, Subgroup, abelianization, find_complement, pair_center,
                     pair_commutator)
from .homology import DEFAULT_BUDGET, schur_multiplier


@dataclass(frozen=True)
class PairContext:
    G: FiniteGroup
    N: Subgroup
    K: Subgroup
    p: int
    n: int
    m: int

    @property
    def bound_exponent(self) -> int:
        return self.n * (2 * self.m + self.n - 1) // 2

    def n_group(self) -> FiniteGroup:
        return _abstract(self.N)

    def k_group(self) -> FiniteGroup:
        return _abstract(self.K)

    def k_is_normal(self) -> bool:
        return self.K.is_normal()


def _abstract(H: Subgroup) -> FiniteGroup:
    key = ("abstract", H.elements)
    memo = H.parent._memo
    if key not in memo:
        memo[key] = H.as_group()[0]
    return memo[key]


def make_context(G: FiniteGroup, N: Subgroup, K: Subgroup | None = None,
                 p: int | None = None) -> PairContext:
    """Validate a pair and its complement; search for a complement if none is given."""
    if not N.is_normal():
        raise NotNormal("N is not normal in G")
    if p is None:
        p = G.prime() or 2
    try:
        prime_power_log(G.order, p)
    except ValueError:
        raise NotPGroup(f"order {G.order} is not a power of {p}") from None
    if K is None:
        K = find_complement(G, N)
        if K is None:
            raise NoComplement("N has no complement in G")
    if N.intersection(K).order != 1 or N.order * K.order != G.order:
        raise NoComplement("the given K is not a complement of N")
    return PairContext(G, N, K, p, prime_power_log(N.order, p), prime_power_log(K.order, p))


def pair_multiplier(ctx: PairContext, budget: int = DEFAULT_BUDGET) -> AbelianInvariants:
    return cancel_direct_factor(schur_multiplier(ctx.G, budget),
                                schur_multiplier(ctx.k_group(), budget))


def pair_multiplier_order_direct(N: FiniteGroup, K: FiniteGroup,
                                 budget: int = DEFAULT_BUDGET,
                                 k_abelianization: AbelianInvariants | None = None) -> int:
    """``|M(N)| * |N^ab (x) K^ab|`` for ``G = N x K``.

    ``k_abelianization`` lets callers pass K^ab directly when K is too large
    to tabulate; only N needs to be within the homology budget.
    """
    kab = k_abelianization if k_abelianization is not None else abelianization(K)[0]
    return schur_multiplier(N, budget).order * tensor(abelianization(N)[0], kab).order


def multiplier_of_product(A: FiniteGroup, B: FiniteGroup,
                          budget: int = DEFAULT_BUDGET) -> AbelianInvariants:
    """``M(A x B) = M(A) x M(B) x (A^ab (x) B^ab)`` from the factors alone."""
    return direct_sum(schur_multiplier(A, budget), schur_multiplier(B, budget),
                      tensor(abelianization(A)[0], abelianization(B)[0]))


def deficiency_t(ctx: PairContext, mgn_order: int) -> int:
    t = ctx.bound_exponent - prime_power_log(mgn_order, ctx.p)
    if t < 0:
        raise BoundViolation(f"|M(G,N)| = {mgn_order} exceeds p^{ctx.bound_exponent}")
    return t


def deficiency_from_orders(p: int, n: int, m: int, mgn_order: int) -> int:
    t = n * (2 * m + n - 1) // 2 - prime_power_log(mgn_order, p)
    if t < 0:
        raise BoundViolation(f"|M(G,N)| = {mgn_order} exceeds the bound for n={n}, m={m}")
    return t


@dataclass(frozen=True)
class Bounds:
    bound1_slack: int
    bound7_holds: bool
    commutator_order: int
    pair_center_order: int
    commutator_bound_holds: bool = True
    order_bound_holds: bool = True


def check_bounds(ctx: PairContext, mgn: AbelianInvariants) -> Bounds:
    """Slack of ``|M(G,N)| <= p^(n(2m+n-1)/2)`` and the commutator-weighted bound.

    The second bound measures N by ``|N/Z(N,G)| = p^n'`` and G by
    ``|G/N| = p^m'``: ``|M(G,N)| |[N,G]| <= p^(n'(2m'+n'-1)/2)``.
    """
    p = ctx.p
    log_mgn = prime_power_log(mgn.order, p)
    Z = pair_center(ctx.G, ctx.N)
    C = pair_commutator(ctx.G, ctx.N)
    n7 = prime_power_log(ctx.N.order // Z.order, p)
    m7 = prime_power_log(ctx.G.order // ctx.N.order, p)
    log_c = prime_power_log(C.order, p)
    holds = 2 * (log_mgn + log_c) <= n7 * (2 * m7 + n7 - 1)
    # two weaker readings, reported for diagnosis only:
    # |[N,G]| alone against the same exponent, and both factors against |N|, |K|
    commutator_only = 2 * log_c <= n7 * (2 * m7 + n7 - 1)
    by_orders = log_mgn + log_c <= ctx.bound_exponent
    return Bounds(ctx.bound_exponent - log_mgn, holds, C.order, Z.order, commutator_only,
                  by_orders)


@dataclass
class PairReport:
    p: int
    n: int
    m: int
    mG: AbelianInvariants
    mK: AbelianInvariants
    mGN: AbelianInvariants
    t: int
    bound1_slack: int
    bound7_holds: bool
    commutator_order: int
    pair_center_order: int
    matched_cases: list[str] = field(default_factory=list)
    status: str | None = None
    commutator_bound_holds: bool = True
    order_bound_holds: bool = True

    def to_json(self) -> dict:
        out = {
            "p": self.p, "n": self.n, "m": self.m,
            "mG": self.mG.to_json(), "mK": self.mK.to_json(), "mGN": self.mGN.to_json(),
            "t": self.t, "bound1_slack": self.bound1_slack, "bound7_holds": self.bound7_holds,
            "commutator_order": self.commutator_order,
            "pair_center_order": self.pair_center_order,
            "matched_cases": list(self.matched_cases),
            "commutator_bound_holds": self.commutator_bound_holds,
            "order_bound_holds": self.order_bound_holds,
        }
        if self.status is not None:
            out["status"] = self.status
        return out


def analyze_pair(ctx: PairContext, budget: int = DEFAULT_BUDGET,
                 classifier: Callable | None = None) -> PairReport:
    mG = schur_multiplier(ctx.G, budget)
    mK = schur_multiplier(ctx.k_group(), budget)
    mGN = cancel_direct_factor(mG, mK)
    t = deficiency_t(ctx, mGN.order)
    b = check_bounds(ctx, mGN)
    report = PairReport(ctx.p, ctx.n, ctx.m, mG, mK, mGN, t, b.bound1_slack, b.bound7_holds,
                        b.commutator_order, b.pair_center_order,
                        commutator_bound_holds=b.commutator_bound_holds,
                        order_bound_holds=b.order_bound_holds)
    if classifier is not None:
        verdict = classifier(ctx, t)
        report.matched_cases = list(verdict.matched)
        report.status = verdict.status
    return report
