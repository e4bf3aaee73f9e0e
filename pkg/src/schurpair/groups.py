"""Explicit finite groups given by Cayley tables.

Elements are the integers ``0 .. order-1`` and element ``0`` is always the
identity.  Everything here is immutable; operations return new objects.

Semidirect products use the convention

    (n1, k1) * (n2, k2) = (n1 * action[k1](n2), k1 * k2)

so ``action[k1 * k2] == action[k1] o action[k2]``.  The pair ``(n, k)`` and
the pair ``(a, b)`` of a direct product are both stored at index
``first * |second| + second``.
"""

from __future__ import annotations

import json
from collections import Counter
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .abelian import AbelianInvariants, from_elementary_divisors, factorize, prime_power_log
from .errors import (ActionNotHomomorphism, MalformedTable, MissingInverse, NoIdentity,
                     NotAHomomorphism, NotASubgroup, NotAssociative, NotAutomorphism,
                     NotNormal, NotPGroup)


class FiniteGroup:
    """A validated multiplication table."""

    __slots__ = ("order", "table", "inverses", "label", "_memo")

    identity = 0

    def __init__(self, table: Sequence[Sequence[int]], label: str | None = None):
        # callers go through make_group(); this only stores an already checked table
        self.table: tuple[tuple[int, ...], ...] = tuple(tuple(row) for row in table)
        self.order = len(self.table)
        self.inverses: tuple[int, ...] = tuple(row.index(0) for row in self.table)
        self.label = label
        self._memo: dict = {}

    def __repr__(self) -> str:
        name = self.label or "group"
        return f"<FiniteGroup {name} of order {self.order}>"

    def __len__(self) -> int:
        return self.order

    @property
    def elements(self) -> range:
        return range(self.order)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverses[a]

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inverses[a], -k
        out, base = 0, a
        while k:
            if k & 1:
                out = self.table[out][base]
            base = self.table[base][base]
            k >>= 1
        return out

    def commutator(self, a: int, b: int) -> int:
        """``a^-1 b^-1 a b``."""
        t, inv = self.table, self.inverses
        return t[t[inv[a]][inv[b]]][t[a][b]]

    def conjugate(self, a: int, g: int) -> int:
        """``a^g = g^-1 a g``."""
        t = self.table
        return t[t[self.inverses[g]][a]][g]

    def element_order(self, a: int) -> int:
        return self.element_orders()[a]

    def element_orders(self) -> tuple[int, ...]:
        if "orders" not in self._memo:
            orders = []
            for a in range(self.order):
                k, x = 1, a
                while x:
                    x = self.table[x][a]
                    k += 1
                orders.append(k)
            self._memo["orders"] = tuple(orders)
        return self._memo["orders"]

    @property
    def exponent(self) -> int:
        from math import lcm
        return lcm(*self.element_orders()) if self.order else 1

    def is_abelian(self) -> bool:
        t = self.table
        return all(t[a][b] == t[b][a] for a in range(self.order) for b in range(a))

    def prime(self) -> int | None:
        """The prime ``p`` if this is a nontrivial p-group, else None."""
        primes = factorize(self.order)
        return next(iter(primes)) if len(primes) == 1 else None

    def whole(self) -> Subgroup:
        return Subgroup(self, range(self.order), check=False)

    def trivial_subgroup(self) -> Subgroup:
        return Subgroup(self, (0,), check=False)

    def center(self) -> Subgroup:
        t = self.table
        els = [a for a in range(self.order)
               if all(t[a][g] == t[g][a] for g in generating_set(self))]
        return Subgroup(self, els, check=False)


def make_group(table: Sequence[Sequence[int]], label: str | None = None) -> FiniteGroup:
    """Validate a Cayley table and return the group it defines.

    The identity is discovered; if it is not element 0 the elements are
    relabelled by swapping it with 0.  Errors name the first bad cell.
    """
    rows = list(table)
    n = len(rows)
    if n == 0:
        raise MalformedTable("empty table")
    for r, row in enumerate(rows):
        if not isinstance(row, (list, tuple)):
            raise MalformedTable(f"row {r} is not a sequence")
        if len(row) != n:
            raise MalformedTable(f"row {r} has {len(row)} entries, expected {n}")
        for c, v in enumerate(row):
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
                raise MalformedTable(f"cell ({r}, {c}) is not an integer: {v!r}")
            if not 0 <= v < n:
                raise MalformedTable(f"cell ({r}, {c}) = {v} outside [0, {n})")
    T = np.asarray(rows, dtype=np.int64)
    ar = np.arange(n)
    ident = next((e for e in range(n)
                  if np.array_equal(T[e], ar) and np.array_equal(T[:, e], ar)), None)
    if ident is None:
        raise NoIdentity("no element acts as a two-sided identity")
    for a in range(n):
        hits = np.nonzero(T[a] == ident)[0]
        if not any(T[b, a] == ident for b in hits):
            raise MissingInverse(f"element {a} has no two-sided inverse (row {a})")
    # (ab)c == a(bc) for all triples
    left = T[T]          # left[a, b, c] = T[T[a, b], c]
    right = T[:, T]      # right[a, b, c] = T[a, T[b, c]]
    bad = np.argwhere(left != right)
    if len(bad):
        a, b, c = (int(x) for x in bad[0])
        raise NotAssociative(f"(a*b)*c != a*(b*c) for a={a}, b={b}, c={c}")
    if ident != 0:
        perm = list(range(n))
        perm[0], perm[ident] = ident, 0
        T = _relabel(T, perm)
    return FiniteGroup(T.tolist(), label)


def _relabel(T: np.ndarray, perm: Sequence[int]) -> np.ndarray:
    # new element i is old element perm[i]
    perm = np.asarray(perm)
    inv = np.empty_like(perm)
    inv[perm] = np.arange(len(perm))
    return inv[T[np.ix_(perm, perm)]]


def relabel(G: FiniteGroup, perm: Sequence[int], label: str | None = None) -> FiniteGroup:
    """Copy of ``G`` whose element ``i`` is ``G``'s element ``perm[i]``."""
    T = _relabel(np.asarray(G.table), perm)
    return make_group(T.tolist(), label or G.label)


def load_cayley_json(source: str | Path) -> FiniteGroup:
    """Read ``{"order": n, "table": [[...], ...]}`` from a path or JSON text."""
    text = Path(source).read_text() if _looks_like_path(source) else str(source)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedTable(f"invalid JSON at line {exc.lineno}, column {exc.colno}: "
                             f"{exc.msg}") from exc
    if not isinstance(data, dict) or "table" not in data or "order" not in data:
        raise MalformedTable('expected an object with "order" and "table"')
    table = data["table"]
    if not isinstance(table, list):
        raise MalformedTable('"table" must be a list of rows')
    if data["order"] != len(table):
        raise MalformedTable(f'"order" is {data["order"]} but the table has {len(table)} rows')
    label = data.get("label") if isinstance(data.get("label"), str) else None
    return make_group(table, label)


def _looks_like_path(source) -> bool:
    if isinstance(source, Path):
        return True
    return not str(source).lstrip().startswith("{")


def dump_cayley_json(G: FiniteGroup) -> str:
    return json.dumps({"order": G.order, "table": [list(r) for r in G.table]})


class Subgroup:
    """A closed subset of a parent group's elements."""

    __slots__ = ("parent", "elements", "_set")

    def __init__(self, parent: FiniteGroup, elements: Iterable[int], check: bool = True):
        self.parent = parent
        self._set = frozenset(elements)
        self.elements: tuple[int, ...] = tuple(sorted(self._set))
        if check:
            self._validate()

    def _validate(self):
        G, S = self.parent, self._set
        if 0 not in S:
            raise NotASubgroup("subset does not contain the identity")
        for a in S:
            if not 0 <= a < G.order:
                raise NotASubgroup(f"element {a} is not in the parent group")
            if G.inverses[a] not in S:
                raise NotASubgroup(f"inverse of {a} missing")
            for b in S:
                if G.table[a][b] not in S:
                    raise NotASubgroup(f"product {a}*{b} leaves the subset")
        assert G.order % len(S) == 0, "Lagrange violated"

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, a: int) -> bool:
        return a in self._set

    def __iter__(self):
        return iter(self.elements)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.parent is other.parent and self._set == other._set

    def __hash__(self) -> int:
        return hash((id(self.parent), self._set))

    def __repr__(self) -> str:
        return f"<Subgroup of order {self.order} in {self.parent!r}>"

    def is_trivial(self) -> bool:
        return self.order == 1

    def issubset(self, other: Subgroup) -> bool:
        return self._set <= other._set

    def intersection(self, other: Subgroup) -> Subgroup:
        return Subgroup(self.parent, self._set & other._set, check=False)

    def is_normal(self) -> bool:
        G = self.parent
        return all(G.conjugate(a, g) in self._set
                   for g in generating_set(G) for a in self.elements)

    def as_group(self, label: str | None = None) -> tuple[FiniteGroup, GroupHom]:
        """The subgroup as an abstract group plus its embedding into the parent."""
        els = self.elements
        pos = {a: i for i, a in enumerate(els)}
        t = self.parent.table
        H = make_group([[pos[t[a][b]] for b in els] for a in els], label)
        return H, GroupHom(H, self.parent, els)


class GroupHom:
    """A homomorphism given by the image of every domain element."""

    __slots__ = ("domain", "codomain", "images")

    def __init__(self, domain: FiniteGroup, codomain: FiniteGroup, images: Sequence[int],
                 check: bool = True):
        self.domain = domain
        self.codomain = codomain
        self.images = tuple(images)
        if check:
            self._validate()

    def _validate(self):
        A, B, f = self.domain, self.codomain, self.images
        if len(f) != A.order:
            raise NotAHomomorphism(f"{len(f)} images for a domain of order {A.order}")
        if f[0] != 0:
            raise NotAHomomorphism("identity does not map to identity")
        ta, tb = A.table, B.table
        for a in range(A.order):
            for b in range(A.order):
                if f[ta[a][b]] != tb[f[a]][f[b]]:
                    raise NotAHomomorphism(f"f({a}*{b}) != f({a})*f({b})")

    def __call__(self, a: int) -> int:
        return self.images[a]

    def is_injective(self) -> bool:
        return len(set(self.images)) == self.domain.order

    def is_bijective(self) -> bool:
        return self.is_injective() and self.domain.order == self.codomain.order

    def kernel(self) -> Subgroup:
        return Subgroup(self.domain, [a for a, b in enumerate(self.images) if b == 0],
                        check=False)

    def image(self) -> Subgroup:
        return Subgroup(self.codomain, set(self.images), check=False)


def subgroup_generated(G: FiniteGroup, gens: Iterable[int]) -> Subgroup:
    gens = sorted(set(gens) - {0})
    seen = {0}
    frontier = [0]
    t = G.table
    while frontier:
        nxt = []
        for x in frontier:
            row = t[x]
            for s in gens:
                y = row[s]
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return Subgroup(G, seen, check=False)


def generating_set(G: FiniteGroup) -> tuple[int, ...]:
    """A small generating set, cached on the group.

    For p-groups this is a Burnside basis, hence of minimal size d(G).
    Elements of larger order are preferred, lowest index on ties.
    """
    if "gens" in G._memo:
        return G._memo["gens"]
    orders = G.element_orders()
    candidates = sorted(range(1, G.order), key=lambda a: (-orders[a], a))
    p = G.prime()
    base: tuple[int, ...] = ()
    if p is not None:
        base = frattini(G, p).elements
    gens: list[int] = []
    H = subgroup_generated(G, base)
    for a in candidates:
        if H.order == G.order:
            break
        if a not in H:
            gens.append(a)
            H = subgroup_generated(G, list(base) + gens)
    G._memo["gens"] = tuple(gens)
    return G._memo["gens"]


def _require_normal(G: FiniteGroup, N: Subgroup) -> None:
    if N.parent is not G:
        raise NotNormal("subgroup belongs to a different group")
    if not N.is_normal():
        raise NotNormal(f"subgroup of order {N.order} is not normal in {G!r}")


def _require_p_group(G: FiniteGroup, p: int) -> None:
    try:
        prime_power_log(G.order, p)
    except ValueError:
        raise NotPGroup(f"order {G.order} is not a power of {p}") from None


def direct_product(A: FiniteGroup, B: FiniteGroup, label: str | None = None
                   ) -> tuple[FiniteGroup, Subgroup, Subgroup]:
    """``A x B`` with ``(a, b)`` at index ``a*|B| + b``, plus both embeddings."""
    nb = B.order
    ta, tb = A.table, B.table
    table = [[ta[a1][a2] * nb + tb[b1][b2] for a2 in range(A.order) for b2 in range(nb)]
             for a1 in range(A.order) for b1 in range(nb)]
    G = make_group(table, label or _join(A, B, " x "))
    embA = Subgroup(G, [a * nb for a in range(A.order)], check=False)
    embB = Subgroup(G, range(nb), check=False)
    return G, embA, embB


def _join(A: FiniteGroup, B: FiniteGroup, sep: str) -> str | None:
    if A.label and B.label:
        return f"{A.label}{sep}{B.label}"
    return None


def is_automorphism(N: FiniteGroup, f: Sequence[int]) -> bool:
    if len(f) != N.order or sorted(f) != list(range(N.order)):
        return False
    t = N.table
    return all(f[t[a][b]] == t[f[a]][f[b]] for a in range(N.order) for b in range(N.order))


def compose(f: Sequence[int], g: Sequence[int]) -> tuple[int, ...]:
    """``f o g`` for maps given as image tuples."""
    return tuple(f[x] for x in g)


def semidirect_product(N: FiniteGroup, K: FiniteGroup, action: Sequence[Sequence[int]],
                       label: str | None = None) -> tuple[FiniteGroup, Subgroup, Subgroup]:
    """``N x| K`` where ``action[k]`` is the automorphism of N induced by k."""
    if len(action) != K.order:
        raise ActionNotHomomorphism(f"action given for {len(action)} of {K.order} elements")
    action = [tuple(f) for f in action]
    for k, f in enumerate(action):
        if not is_automorphism(N, f):
            raise NotAutomorphism(f"action of k={k} is not an automorphism of N")
    if action[0] != tuple(range(N.order)):
        raise ActionNotHomomorphism("identity of K does not act trivially")
    tk = K.table
    for k1 in range(K.order):
        for k2 in range(K.order):
            if action[tk[k1][k2]] != compose(action[k1], action[k2]):
                raise ActionNotHomomorphism(
                    f"action({k1}*{k2}) != action({k1}) o action({k2})")
    nk = K.order
    tn = N.table
    table = [[tn[n1][action[k1][n2]] * nk + tk[k1][k2]
              for n2 in range(N.order) for k2 in range(nk)]
             for n1 in range(N.order) for k1 in range(nk)]
    G = make_group(table, label or _join(N, K, " x| "))
    embN = Subgroup(G, [n * nk for n in range(N.order)], check=False)
    embK = Subgroup(G, range(nk), check=False)
    return G, embN, embK


def extend_action(N: FiniteGroup, K: FiniteGroup,
                  generator_images: Mapping[int, Sequence[int]]) -> list[tuple[int, ...]]:
    """Extend automorphisms given on generators of K to a full action table."""
    for k, f in generator_images.items():
        if not 0 < k < K.order:
            raise ActionNotHomomorphism(f"{k} is not a non-identity element of K")
        if not is_automorphism(N, f):
            raise NotAutomorphism(f"image of generator {k} is not an automorphism of N")
    ident = tuple(range(N.order))
    act: dict[int, tuple[int, ...]] = {0: ident}
    frontier = [0]
    gens = {k: tuple(f) for k, f in generator_images.items()}
    while frontier:
        nxt = []
        for x in frontier:
            for s, f in gens.items():
                y = K.table[x][s]
                img = compose(act[x], f)
                if y not in act:
                    act[y] = img
                    nxt.append(y)
                elif act[y] != img:
                    raise ActionNotHomomorphism(f"relation violated at k={y}")
        frontier = nxt
    if len(act) != K.order:
        raise ActionNotHomomorphism("given elements do not generate K")
    return [act[k] for k in range(K.order)]


def quotient(G: FiniteGroup, H: Subgroup, label: str | None = None
             ) -> tuple[FiniteGroup, GroupHom]:
    """``G/H`` with cosets represented by their least element index."""
    _require_normal(G, H)
    coset_of = [-1] * G.order
    reps = []
    t = G.table
    for x in range(G.order):
        if coset_of[x] < 0:
            for h in H.elements:
                coset_of[t[x][h]] = len(reps)
            reps.append(x)
    table = [[coset_of[t[a][b]] for b in reps] for a in reps]
    Q = make_group(table, label)
    return Q, GroupHom(G, Q, coset_of, check=False)


def derived_subgroup(G: FiniteGroup) -> Subgroup:
    return pair_commutator(G, G.whole())


def pair_center(G: FiniteGroup, N: Subgroup) -> Subgroup:
    """``Z(N, G)``: elements of N fixed by conjugation, i.e. ``Z(G) & N``."""
    _require_normal(G, N)
    return G.center().intersection(N)


def pair_commutator(G: FiniteGroup, N: Subgroup) -> Subgroup:
    """``[N, G]``, generated by all ``n^-1 g^-1 n g``."""
    _require_normal(G, N)
    comms = {G.commutator(n, g) for n in N.elements for g in range(G.order)}
    return subgroup_generated(G, comms)


def pair_upper_center(G: FiniteGroup, N: Subgroup) -> Subgroup:
    """``Z2(N, G)``: preimage in N of ``Z(N/Z(N,G), G/Z(N,G))``."""
    Z = pair_center(G, N)
    Q, proj = quotient(G, Z)
    Nbar = Subgroup(Q, {proj(n) for n in N.elements}, check=False)
    Zbar = pair_center(Q, Nbar)
    return Subgroup(G, [n for n in N.elements if proj(n) in Zbar], check=False)


def abelian_type(G: FiniteGroup) -> AbelianInvariants:
    """Invariant factors of an abelian group, read off from element counts.

    For each prime q, ``log_q #{x : x^(q^k) = 1}`` is the sum of
    ``min(k, e_i)`` over the q-parts ``q^e_i``; successive differences give
    the number of cyclic factors of exponent at least k.
    """
    if not G.is_abelian():
        raise ValueError("abelian_type needs an abelian group")
    orders = G.element_orders()
    divisors: Counter = Counter()
    for q, top in factorize(G.order).items():
        logs = [0]
        for k in range(1, top + 1):
            count = sum(1 for o in orders if (q ** k) % o == 0)
            logs.append(prime_power_log(count, q))
        at_least = [logs[k] - logs[k - 1] for k in range(1, top + 1)] + [0]
        for e in range(1, top + 1):
            exact = at_least[e - 1] - at_least[e]
            if exact:
                divisors[q, e] += exact
    return from_elementary_divisors(divisors)


def abelianization(G: FiniteGroup) -> tuple[AbelianInvariants, GroupHom]:
    Q, proj = quotient(G, derived_subgroup(G), label=f"{G.label}^ab" if G.label else None)
    return abelian_type(Q), proj


def frattini(G: FiniteGroup, p: int) -> Subgroup:
    """``Phi(G) = [G,G] G^p`` for a p-group."""
    _require_p_group(G, p)
    gens = {G.commutator(a, b) for a in range(G.order) for b in range(G.order)}
    gens |= {G.power(a, p) for a in range(G.order)}
    return subgroup_generated(G, gens)


def min_generators(G: FiniteGroup, p: int) -> int:
    """d(G) for a p-group: the rank of ``G/Phi(G)`` over the field of p elements."""
    _require_p_group(G, p)
    if G.order == 1:
        return 0
    return prime_power_log(G.order // frattini(G, p).order, p)


def find_complement(G: FiniteGroup, N: Subgroup) -> Subgroup | None:
    """A subgroup K with ``N & K = 1`` and ``|N||K| = |G|``, or None.

    Depth-first over subgroups built one generator at a time, so at most
    ``log2(|G|/|N|)`` generators are ever combined.
    """
    _require_normal(G, N)
    target = G.order // N.order
    if target == 1:
        return G.trivial_subgroup()
    nset = set(N.elements)
    usable = [x for x in range(1, G.order)
              if not (set(subgroup_generated(G, [x]).elements) - {0}) & nset]
    seen: set[frozenset] = set()

    def search(H: Subgroup) -> Subgroup | None:
        for x in usable:
            if x in H:
                continue
            H2 = subgroup_generated(G, H.elements + (x,))
            key = frozenset(H2.elements)
            if key in seen or H2.order > target or target % H2.order:
                continue
            seen.add(key)
            if len(key & nset) > 1:
                continue
            if H2.order == target:
                return H2
            found = search(H2)
            if found is not None:
                return found
        return None

    return search(G.trivial_subgroup())


def is_extraspecial_pair(G: FiniteGroup, N: Subgroup, p: int) -> bool:
    """``Z(N,G)`` and ``[N,G]`` coincide and have order p."""
    _require_p_group(G, p)
    Z = pair_center(G, N)
    C = pair_commutator(G, N)
    return Z == C and Z.order == p


def conjugacy_class_sizes(G: FiniteGroup) -> tuple[int, ...]:
    if "classes" in G._memo:
        return G._memo["classes"]
    gens = generating_set(G)
    seen = [False] * G.order
    sizes = []
    for a in range(G.order):
        if seen[a]:
            continue
        orbit = {a}
        frontier = [a]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = G.conjugate(x, g)
                    if y not in orbit:
                        orbit.add(y)
                        nxt.append(y)
            frontier = nxt
        for x in orbit:
            seen[x] = True
        sizes.append(len(orbit))
    G._memo["classes"] = tuple(sorted(sizes))
    return G._memo["classes"]
