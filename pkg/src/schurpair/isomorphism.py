"""Isomorphism testing and automorphism enumeration by generator backtracking."""

from __future__ import annotations

from collections import Counter
from typing import Iterator, Sequence

from .errors import BudgetExceeded
from .groups import (FiniteGroup, GroupHom, conjugacy_class_sizes, derived_subgroup,
                     generating_set)

AUTOMORPHISM_BUDGET = 32


def fingerprint(G: FiniteGroup) -> str:
    """Isomorphism invariants packed into a string.

    Order, exponent, centre and derived-subgroup sizes, the element-order
    histogram and the multiset of conjugacy class sizes.  Equal fingerprints
    do not imply isomorphism.
    """
    if "fingerprint" in G._memo:
        return G._memo["fingerprint"]
    hist = Counter(G.element_orders())
    classes = Counter(conjugacy_class_sizes(G))
    fp = "|".join([
        f"o{G.order}",
        f"e{G.exponent}",
        f"z{G.center().order}",
        f"d{derived_subgroup(G).order}",
        "h" + ",".join(f"{k}:{v}" for k, v in sorted(hist.items())),
        "c" + ",".join(f"{k}x{v}" for k, v in sorted(classes.items())),
    ])
    G._memo["fingerprint"] = fp
    return fp


def _class_size_of(G: FiniteGroup) -> list[int]:
    # size of each element's conjugacy class, i.e. |G| / |C_G(a)|
    if "class_of" in G._memo:
        return G._memo["class_of"]
    t = G.table
    out = [G.order // sum(1 for g in range(G.order) if t[a][g] == t[g][a])
           for a in range(G.order)]
    G._memo["class_of"] = out
    return out


def _extend(A: FiniteGroup, B: FiniteGroup, gens: Sequence[int], images: Sequence[int]
            ) -> dict[int, int] | None:
    """Extend ``gens -> images`` over the subgroup they generate.

    Returns the map if it is an injective homomorphism on that subgroup.
    Consistency along every Cayley-graph edge of the generated subgroup is
    exactly the homomorphism condition.
    """
    ta, tb = A.table, B.table
    f = {0: 0}
    used = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            fx = f[x]
            for s, fs in zip(gens, images):
                y = ta[x][s]
                fy = tb[fx][fs]
                if y in f:
                    if f[y] != fy:
                        return None
                else:
                    if fy in used:
                        return None
                    f[y] = fy
                    used.add(fy)
                    nxt.append(y)
        frontier = nxt
    return f


def _embeddings(A: FiniteGroup, B: FiniteGroup) -> Iterator[tuple[int, ...]]:
    """Every injective hom A -> B with |A| = |B|, i.e. every isomorphism."""
    gens = sorted(generating_set(A), key=lambda a: (A.element_order(a), a))
    oa, ob = A.element_orders(), B.element_orders()
    ca, cb = _class_size_of(A), _class_size_of(B)
    candidates = [
        sorted((b for b in range(B.order) if ob[b] == oa[g] and cb[b] == ca[g]),
               key=lambda b: (ob[b], b))
        for g in gens
    ]

    def search(depth: int, chosen: list[int]):
        if depth == len(gens):
            f = _extend(A, B, gens, chosen)
            if f is not None and len(f) == A.order:
                yield tuple(f[a] for a in range(A.order))
            return
        for b in candidates[depth]:
            chosen.append(b)
            if _extend(A, B, gens[:depth + 1], chosen) is not None:
                yield from search(depth + 1, chosen)
            chosen.pop()

    yield from search(0, [])


def are_isomorphic(A: FiniteGroup, B: FiniteGroup) -> GroupHom | None:
    """An isomorphism ``A -> B`` or None."""
    if A.order != B.order or fingerprint(A) != fingerprint(B):
        return None
    for images in _embeddings(A, B):
        return GroupHom(A, B, images)
    return None


def automorphisms(G: FiniteGroup, budget: int = AUTOMORPHISM_BUDGET) -> list[GroupHom]:
    if G.order > budget:
        raise BudgetExceeded(f"automorphisms of a group of order {G.order} "
                             f"exceed the budget {budget}")
    return [GroupHom(G, G, images, check=False) for images in _embeddings(G, G)]
