"""Schur multipliers as second integral homology of the normalized bar complex.

Basis elements of ``C_a`` are bracket tuples ``[g1|...|ga]`` of non-identity
elements; the tuple ``(g1, ..., ga)`` sits at the mixed-radix index
``sum((gi - 1) * (n-1)**(a-i))``.  With trivial coefficients

    d2 [g|h]   = [h] - [gh] + [g]
    d3 [g|h|k] = [h|k] - [gh|k] + [g|hk] - [g|h]

where any bracket containing the identity is dropped.

Reduced column set.  Because ``d3 d4 = 0``, for ``y = y' s``

    d3 [g|h|y] = d3 [h|y'|s] - d3 [gh|y'|s] + d3 [g|hy'|s] + d3 [g|h|y']

so by induction on the word length of ``y`` over a generating set S, the
columns ``[g|h|s]`` with ``s`` in S already span ``im d3``.  Schur multipliers
are computed from those ``(n-1)^2 |S|`` columns instead of all ``(n-1)^3``.
"""

from __future__ import annotations

import json
import threading
from pathlib import Path
from typing import Callable, Iterable

from .abelian import TRIVIAL, AbelianInvariants
from .errors import BudgetExceeded, InternalFreeRank
from .groups import FiniteGroup, generating_set, make_group
from .intlinalg import SparseIntMatrix, homology

DEFAULT_BUDGET = 32
HARD_CAP = 81


def bar_index(tup: Iterable[int], order: int) -> int:
    idx = 0
    for g in tup:
        if not 0 < g < order:
            raise ValueError(f"bar entry {g} is the identity or out of range")
        idx = idx * (order - 1) + (g - 1)
    return idx


def bar_tuple(index: int, arity: int, order: int) -> tuple[int, ...]:
    out = []
    for _ in range(arity):
        index, r = divmod(index, order - 1)
        out.append(r + 1)
    return tuple(reversed(out))


def check_budget(order: int, budget: int) -> None:
    if order > HARD_CAP:
        raise BudgetExceeded(f"group of order {order} exceeds the homology hard cap {HARD_CAP}")
    if order > budget:
        raise BudgetExceeded(f"group of order {order} exceeds the homology budget {budget}")


def bar_boundaries(G: FiniteGroup, budget: int = DEFAULT_BUDGET,
                   last_entries: Iterable[int] | None = None
                   ) -> tuple[SparseIntMatrix, SparseIntMatrix]:
    """``d2: C2 -> C1`` and ``d3: C3 -> C2``.

    If ``last_entries`` is given, only columns ``[g|h|k]`` with ``k`` among
    them are filled in; the other columns of ``d3`` are left zero.
    """
    check_budget(G.order, budget)
    n = G.order
    m = n - 1
    t = G.table

    d2: dict[int, dict[int, int]] = {}
    for g in range(1, n):
        for h in range(1, n):
            col: dict[int, int] = {}
            gh = t[g][h]
            for key, v in ((h - 1, 1), (gh - 1 if gh else None, -1), (g - 1, 1)):
                if key is not None:
                    col[key] = col.get(key, 0) + v
            d2[(g - 1) * m + h - 1] = col

    ks = sorted(set(last_entries)) if last_entries is not None else range(1, n)
    d3: dict[int, dict[int, int]] = {}
    for g in range(1, n):
        tg = t[g]
        for h in range(1, n):
            gh = tg[h]
            th = t[h]
            gm = (g - 1) * m
            for k in ks:
                hk = th[k]
                col = {}
                terms = (((h - 1) * m + k - 1, 1),
                         ((gh - 1) * m + k - 1 if gh else None, -1),
                         (gm + hk - 1 if hk else None, 1),
                         (gm + h - 1, -1))
                for key, v in terms:
                    if key is not None:
                        x = col.get(key, 0) + v
                        if x:
                            col[key] = x
                        else:
                            del col[key]
                if col:
                    d3[(gm + h - 1) * m + k - 1] = col
    return (SparseIntMatrix.from_columns(m, m * m, d2),
            SparseIntMatrix.from_columns(m * m, m * m * m, d3))


class MultiplierCache:
    """Get-or-compute map from isomorphism class to Schur multiplier.

    Keyed by fingerprint; groups sharing a fingerprint are told apart with an
    explicit isomorphism test.  Two threads may compute the same entry; the
    results are equal, so the last write simply wins.
    """

    def __init__(self):
        self._lock = threading.Lock()
        self._entries: dict[str, list[tuple[FiniteGroup, AbelianInvariants]]] = {}

    def __len__(self) -> int:
        return sum(len(v) for v in self._entries.values())

    def clear(self) -> None:
        with self._lock:
            self._entries.clear()

    def lookup(self, G: FiniteGroup) -> AbelianInvariants | None:
        from .isomorphism import are_isomorphic, fingerprint
        fp = fingerprint(G)
        with self._lock:
            candidates = list(self._entries.get(fp, ()))
        for H, value in candidates:
            if H is G or H.table == G.table or are_isomorphic(H, G) is not None:
                return value
        return None

    def store(self, G: FiniteGroup, value: AbelianInvariants) -> None:
        from .isomorphism import fingerprint
        fp = fingerprint(G)
        with self._lock:
            self._entries.setdefault(fp, []).append((G, value))

    def get_or_compute(self, G: FiniteGroup,
                       compute: Callable[[FiniteGroup], AbelianInvariants]) -> AbelianInvariants:
        hit = self.lookup(G)
        if hit is not None:
            return hit
        value = compute(G)
        self.store(G, value)
        return value

    def save(self, path: str | Path) -> None:
        with self._lock:
            data = {fp: [{"table": [list(r) for r in H.table], "multiplier": v.to_json()}
                         for H, v in entries]
                    for fp, entries in sorted(self._entries.items())}
        Path(path).write_text(json.dumps(data, sort_keys=True))

    def load(self, path: str | Path) -> None:
        data = json.loads(Path(path).read_text())
        for entries in data.values():
            for entry in entries:
                self.store(make_group(entry["table"]), AbelianInvariants(tuple(entry["multiplier"])))


MULTIPLIER_CACHE = MultiplierCache()


def _compute(G: FiniteGroup, budget: int, reduced: bool) -> AbelianInvariants:
    gens = generating_set(G) if reduced else None
    d2, d3 = bar_boundaries(G, budget, last_entries=gens)
    h2 = homology(d2, d3)
    if h2.free_rank != 0:
        raise InternalFreeRank(f"H2 of a finite group has free rank {h2.free_rank}")
    return h2.torsion


def schur_multiplier(G: FiniteGroup, budget: int = DEFAULT_BUDGET,
                     cache: MultiplierCache | None = MULTIPLIER_CACHE,
                     reduced: bool = True) -> AbelianInvariants:
    """``M(G) = H2(G; Z)``.

    ``reduced=False`` uses every column of ``d3``; it exists as a cross-check
    of the generator-column reduction and is only practical for small groups.
    """
    if G.order == 1:
        return TRIVIAL
    check_budget(G.order, budget)
    if cache is None or not reduced:
        return _compute(G, budget, reduced)
    return cache.get_or_compute(G, lambda H: _compute(H, budget, reduced))
