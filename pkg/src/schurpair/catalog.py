"""Named p-groups, a small group-spec language, and the catalog closure.

Spec grammar (whitespace-insensitive)::

    spec := atom { "x" atom }
    atom := "1" | "Z" int | "ElemAb(" p "," k ")" | "D8" | "Q8"
          | "E1(" p ")" | "E2(" p ")" | "Sd(" spec "," spec "," path ")"
          | "@" path | "(" spec ")"

``x`` is left-associative.  A path runs until whitespace, ``,`` or ``)``.
``@path`` loads a Cayley-table JSON file; the ``path`` of ``Sd`` names an
action file ``{"generator_images": {"<k>": [images over N]}}``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Union

from .abelian import AbelianInvariants, canonicalize, factorize
from .errors import ActionNotHomomorphism, ParseError, SemanticError, UnsupportedOrder
from .groups import (FiniteGroup, Subgroup, compose, direct_product, extend_action,
                     generating_set, load_cayley_json, make_group, min_generators,
                     semidirect_product)
from .isomorphism import automorphisms


# constructors

def trivial_group() -> FiniteGroup:
    return make_group([[0]], "1")


def cyclic(n: int) -> FiniteGroup:
    return make_group([[(a + b) % n for b in range(n)] for a in range(n)], f"Z{n}")


def abelian_group(inv: AbelianInvariants) -> FiniteGroup:
    G = trivial_group()
    for f in inv.factors:
        G = direct_product(G, cyclic(f))[0] if G.order > 1 else cyclic(f)
    return make_group(G.table, str(inv))


def elementary_abelian(p: int, k: int) -> FiniteGroup:
    return abelian_group(AbelianInvariants((p,) * k))


def dihedral8() -> FiniteGroup:
    Z4, Z2 = cyclic(4), cyclic(2)
    return semidirect_product(Z4, Z2, [tuple(range(4)), tuple((-x) % 4 for x in range(4))],
                              label="D8")[0]


# units 1, i, j, k as 0..3; product of units is (sign, unit)
_QMUL = [
    [(1, 0), (1, 1), (1, 2), (1, 3)],
    [(1, 1), (-1, 0), (1, 3), (-1, 2)],
    [(1, 2), (-1, 3), (-1, 0), (1, 1)],
    [(1, 3), (1, 2), (-1, 1), (-1, 0)],
]


def quaternion8() -> FiniteGroup:
    # index = unit + 4 * (sign is negative)
    def mul(x, y):
        s, u = _QMUL[x % 4][y % 4]
        neg = (x >= 4) ^ (y >= 4) ^ (s < 0)
        return u + 4 * neg
    return make_group([[mul(x, y) for y in range(8)] for x in range(8)], "Q8")


def extraspecial_e1(p: int) -> FiniteGroup:
    """Upper unitriangular 3x3 matrices mod p: ``(a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab')``."""
    els = list(itertools.product(range(p), repeat=3))
    idx = {e: i for i, e in enumerate(els)}
    table = [[idx[((a + x) % p, (b + y) % p, (c + z + a * y) % p)] for (x, y, z) in els]
             for (a, b, c) in els]
    return make_group(table, f"E1({p})")


def extraspecial_e2(p: int) -> FiniteGroup:
    """``Z_{p^2} x| Z_p`` with the generator acting as multiplication by ``1+p``."""
    q = p * p
    N, K = cyclic(q), cyclic(p)
    action = [tuple(x * pow(1 + p, k, q) % q for x in range(q)) for k in range(p)]
    return semidirect_product(N, K, action, label=f"E2({p})")[0]


# spec AST

@dataclass(frozen=True)
class Trivial:
    pass


@dataclass(frozen=True)
class Cyclic:
    n: int


@dataclass(frozen=True)
class ElemAb:
    p: int
    k: int


@dataclass(frozen=True)
class Dihedral8:
    pass


@dataclass(frozen=True)
class Quaternion8:
    pass


@dataclass(frozen=True)
class E1:
    p: int


@dataclass(frozen=True)
class E2:
    p: int


@dataclass(frozen=True)
class CayleyFile:
    path: str


@dataclass(frozen=True)
class Product:
    left: "GroupSpec"
    right: "GroupSpec"


@dataclass(frozen=True)
class Semidirect:
    normal: "GroupSpec"
    complement: "GroupSpec"
    action: str


GroupSpec = Union[Trivial, Cyclic, ElemAb, Dihedral8, Quaternion8, E1, E2, CayleyFile,
                  Product, Semidirect]


def render(spec: GroupSpec) -> str:
    if isinstance(spec, Trivial):
        return "1"
    if isinstance(spec, Cyclic):
        return f"Z{spec.n}"
    if isinstance(spec, ElemAb):
        return f"ElemAb({spec.p},{spec.k})"
    if isinstance(spec, Dihedral8):
        return "D8"
    if isinstance(spec, Quaternion8):
        return "Q8"
    if isinstance(spec, E1):
        return f"E1({spec.p})"
    if isinstance(spec, E2):
        return f"E2({spec.p})"
    if isinstance(spec, CayleyFile):
        return f"@{spec.path}"
    if isinstance(spec, Product):
        right = render(spec.right)
        if isinstance(spec.right, Product):
            right = f"({right})"
        return f"{render(spec.left)} x {right}"
    if isinstance(spec, Semidirect):
        return f"Sd({render(spec.normal)}, {render(spec.complement)}, {spec.action})"
    raise TypeError(f"not a group spec: {spec!r}")


def product_of(*specs: GroupSpec) -> GroupSpec:
    out = specs[0]
    for s in specs[1:]:
        out = Product(out, s)
    return out


def abelian_spec(inv: AbelianInvariants) -> GroupSpec:
    if inv.is_trivial():
        return Trivial()
    return product_of(*(Cyclic(f) for f in inv.factors))


def _is_prime(p: int) -> bool:
    return p >= 2 and factorize(p) == {p: 1}


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self, word: str) -> bool:
        self.skip()
        return self.text.startswith(word, self.pos)

    def expect(self, word: str):
        if not self.peek(word):
            raise ParseError(f"expected {word!r}", self.pos, word)
        self.pos += len(word)

    def integer(self) -> int:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise ParseError("expected an integer", start, "integer")
        return int(self.text[start:self.pos])

    def path(self) -> str:
        self.skip()
        start = self.pos
        while (self.pos < len(self.text) and not self.text[self.pos].isspace()
               and self.text[self.pos] not in ",)"):
            self.pos += 1
        if start == self.pos:
            raise ParseError("expected a path", start, "path")
        return self.text[start:self.pos]

    def spec(self) -> GroupSpec:
        node = self.atom()
        while self.peek("x"):
            self.pos += 1
            node = Product(node, self.atom())
        return node

    def atom(self) -> GroupSpec:
        self.skip()
        start = self.pos
        if self.peek("("):
            self.pos += 1
            node = self.spec()
            self.expect(")")
            return node
        if self.peek("ElemAb"):
            self.pos += len("ElemAb")
            self.expect("(")
            p = self.integer()
            self.expect(",")
            k = self.integer()
            self.expect(")")
            if not _is_prime(p):
                raise SemanticError(f"ElemAb needs a prime, got {p}")
            return ElemAb(p, k)
        if self.peek("E1") or self.peek("E2"):
            which = self.text[self.pos + 1]
            self.pos += 2
            self.expect("(")
            p = self.integer()
            self.expect(")")
            if not _is_prime(p) or p == 2:
                raise SemanticError(f"E{which} requires odd p, got {p}")
            return E1(p) if which == "1" else E2(p)
        if self.peek("D8"):
            self.pos += 2
            return Dihedral8()
        if self.peek("Q8"):
            self.pos += 2
            return Quaternion8()
        if self.peek("Sd"):
            self.pos += 2
            self.expect("(")
            normal = self.spec()
            self.expect(",")
            comp = self.spec()
            self.expect(",")
            action = self.path()
            self.expect(")")
            return Semidirect(normal, comp, action)
        if self.peek("Z"):
            self.pos += 1
            n = self.integer()
            if n < 1:
                raise SemanticError(f"Z{n}: cyclic order must be positive")
            return Cyclic(n)
        if self.peek("@"):
            self.pos += 1
            return CayleyFile(self.path())
        if self.peek("1"):
            self.pos += 1
            return Trivial()
        raise ParseError("expected a group atom", start,
                         "Z<n>, ElemAb(p,k), D8, Q8, E1(p), E2(p), Sd(...), @path or 1")


def parse_spec(text: str) -> GroupSpec:
    parser = _Parser(text)
    node = parser.spec()
    parser.skip()
    if parser.pos != len(text):
        raise ParseError("unexpected input", parser.pos, "'x' or end")
    return node


def spec_order(spec: GroupSpec) -> int | None:
    """Order without building, or None for file-backed specs."""
    if isinstance(spec, Trivial):
        return 1
    if isinstance(spec, Cyclic):
        return spec.n
    if isinstance(spec, ElemAb):
        return spec.p ** spec.k
    if isinstance(spec, (Dihedral8, Quaternion8)):
        return 8
    if isinstance(spec, (E1, E2)):
        return spec.p ** 3
    if isinstance(spec, Product):
        a, b = spec_order(spec.left), spec_order(spec.right)
        return None if a is None or b is None else a * b
    if isinstance(spec, Semidirect):
        a, b = spec_order(spec.normal), spec_order(spec.complement)
        return None if a is None or b is None else a * b
    return None


def spec_abelian_invariants(spec: GroupSpec) -> AbelianInvariants | None:
    """Invariants when the spec is visibly abelian (cyclic and ElemAb atoms only)."""
    if isinstance(spec, Trivial):
        return canonicalize([])
    if isinstance(spec, Cyclic):
        return canonicalize([spec.n])
    if isinstance(spec, ElemAb):
        return canonicalize([spec.p] * spec.k)
    if isinstance(spec, Product):
        a, b = spec_abelian_invariants(spec.left), spec_abelian_invariants(spec.right)
        if a is None or b is None:
            return None
        return canonicalize(a.factors + b.factors)
    return None


@dataclass(frozen=True)
class Built:
    group: FiniteGroup
    N: Subgroup | None = None
    K: Subgroup | None = None


def load_action(path: str | Path, N: FiniteGroup, K: FiniteGroup) -> list[tuple[int, ...]]:
    data = json.loads(Path(path).read_text())
    images = data.get("generator_images") if isinstance(data, dict) else None
    if not isinstance(images, dict):
        raise SemanticError(f"{path}: missing 'generator_images' object")
    gens = {int(k): tuple(v) for k, v in images.items()}
    return extend_action(N, K, gens)


def build(spec: GroupSpec, base: str | Path = ".") -> Built:
    base = Path(base)
    if isinstance(spec, Product):
        A = build(spec.left, base).group
        B = build(spec.right, base).group
        G, eA, eB = direct_product(A, B, label=render(spec))
        return Built(G, eA, eB)
    if isinstance(spec, Semidirect):
        N = build(spec.normal, base).group
        K = build(spec.complement, base).group
        action = load_action(base / spec.action, N, K)
        G, eN, eK = semidirect_product(N, K, action, label=render(spec))
        return Built(G, eN, eK)
    return Built(_build_atom(spec, base))


def _build_atom(spec: GroupSpec, base: Path) -> FiniteGroup:
    if isinstance(spec, Trivial):
        return trivial_group()
    if isinstance(spec, Cyclic):
        return cyclic(spec.n)
    if isinstance(spec, ElemAb):
        return make_group(elementary_abelian(spec.p, spec.k).table, render(spec))
    if isinstance(spec, Dihedral8):
        return dihedral8()
    if isinstance(spec, Quaternion8):
        return quaternion8()
    if isinstance(spec, E1):
        return extraspecial_e1(spec.p)
    if isinstance(spec, E2):
        return extraspecial_e2(spec.p)
    if isinstance(spec, CayleyFile):
        G = load_cayley_json(base / spec.path)
        return make_group(G.table, render(spec))
    raise TypeError(f"not a group spec: {spec!r}")


def build_group(text_or_spec: str | GroupSpec) -> FiniteGroup:
    spec = parse_spec(text_or_spec) if isinstance(text_or_spec, str) else text_or_spec
    return build(spec).group


# catalogs

def partitions(e: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    """Partitions of e into non-increasing parts."""
    if largest is None:
        largest = e
    if e == 0:
        yield ()
        return
    for first in range(min(e, largest), 0, -1):
        for rest in partitions(e - first, first):
            yield (first,) + rest


def abelian_p_groups(p: int, e: int) -> list[AbelianInvariants]:
    return [AbelianInvariants(tuple(p ** k for k in part)) for part in partitions(e)]


def nonabelian_bases(p: int) -> list[GroupSpec]:
    return [Dihedral8(), Quaternion8()] if p == 2 else [E1(p), E2(p)]


def groups_of_order_specs(p: int, k: int) -> list[GroupSpec]:
    if not _is_prime(p):
        raise SemanticError(f"{p} is not prime")
    if k > 3 or k < 0:
        raise UnsupportedOrder(f"groups of order {p}^{k} are not catalogued (k <= 3)")
    specs = [abelian_spec(inv) for inv in abelian_p_groups(p, k)]
    if k == 3:
        specs += nonabelian_bases(p)
    return specs


def groups_of_order(p: int, k: int) -> list[FiniteGroup]:
    """Every group of order ``p^k`` up to isomorphism, for ``k <= 3``."""
    return [build_group(s) for s in groups_of_order_specs(p, k)]


def catalog_closure(p: int, max_order: int) -> list[GroupSpec]:
    """Abelian p-groups and nonabelian-base x abelian products up to ``max_order``.

    Sorted by order, then by rendered spec.  No two entries are isomorphic.
    """
    top = prime_power_log_floor(max_order, p)
    specs: list[GroupSpec] = []
    for e in range(top + 1):
        specs += [abelian_spec(inv) for inv in abelian_p_groups(p, e)]
    for base in nonabelian_bases(p):
        for e in range(top - 2):
            for inv in abelian_p_groups(p, e):
                specs.append(base if inv.is_trivial() else Product(base, abelian_spec(inv)))
    return sorted(specs, key=lambda s: (spec_order(s), render(s)))


def prime_power_log_floor(n: int, p: int) -> int:
    e = 0
    while p ** (e + 1) <= n:
        e += 1
    return e


def spec_generator_rank(spec: GroupSpec, p: int) -> int:
    """d(G), from the invariants when the spec is abelian, else from the table."""
    inv = spec_abelian_invariants(spec)
    if inv is not None:
        return inv.rank
    return min_generators(build_group(spec), p)


# actions for semidirect products

def nontrivial_actions(N: FiniteGroup, K: FiniteGroup) -> list[list[tuple[int, ...]]]:
    """Nontrivial homs ``K -> Aut(N)``, one per orbit under conjugation in Aut(N)
    and twisting by Aut(K).  Each is returned as a full action table."""
    if K.order == 1 or N.order == 1:
        return []
    autN = [f.images for f in automorphisms(N)]
    autN_set = set(autN)
    inverse = {f: tuple(sorted(range(N.order), key=lambda x: f[x])) for f in autN}
    autK = [f.images for f in automorphisms(K)]
    gens = generating_set(K)
    korders = [K.element_order(g) for g in gens]
    identity = tuple(range(N.order))

    def order_divides(f, k):
        g = identity
        for _ in range(k):
            g = compose(g, f)
        return g == identity

    candidates = [[f for f in autN if order_divides(f, k)] for k in korders]
    seen: set = set()
    reps = []
    for choice in itertools.product(*candidates):
        if all(f == identity for f in choice) or choice in seen:
            continue
        try:
            action = extend_action(N, K, dict(zip(gens, choice)))
        except ActionNotHomomorphism:
            continue
        orbit = set()
        for a in autN:
            ai = inverse[a]
            conj = [compose(a, compose(f, ai)) for f in action]
            for b in autK:
                twisted = tuple(conj[b[g]] for g in gens)
                orbit.add(twisted)
        seen |= orbit
        reps.append(action)
    assert all(all(f in autN_set for f in act) for act in reps)
    return reps
