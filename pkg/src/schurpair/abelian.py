"""Isomorphism types of finite abelian groups.

Invariant factors are stored divisibility-decreasing, ``n1, n2, ..., nk`` with
``n_{i+1} | n_i``, so ``Z4 x Z2`` is ``(4, 2)``.  The trivial group is the
empty tuple and renders as ``1``.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable

from .errors import NonPositiveOrder, NotADirectFactor, ParseError
from .intlinalg import SparseIntMatrix, smith_normal_form


def factorize(n: int) -> dict[int, int]:
    """Prime factorisation by trial division (orders here are small)."""
    if n < 1:
        raise NonPositiveOrder(f"cannot factor {n}")
    out: dict[int, int] = {}
    q = 2
    while q * q <= n:
        while n % q == 0:
            out[q] = out.get(q, 0) + 1
            n //= q
        q += 1 if q == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_power_log(n: int, p: int) -> int:
    """``k`` with ``n == p**k``; raises ValueError otherwise."""
    k = 0
    while n % p == 0 and n > 1:
        n //= p
        k += 1
    if n != 1:
        raise ValueError(f"not a power of {p}")
    return k


@dataclass(frozen=True)
class AbelianInvariants:
    factors: tuple[int, ...] = ()

    def __post_init__(self):
        facs = tuple(int(f) for f in self.factors)
        object.__setattr__(self, "factors", facs)
        for f in facs:
            if f < 2:
                raise ValueError(f"invariant factor {f} < 2 in {facs}")
        for a, b in zip(facs, facs[1:]):
            if a % b:
                raise ValueError(f"divisibility chain broken: {b} does not divide {a}")

    @property
    def order(self) -> int:
        return math.prod(self.factors)

    @property
    def rank(self) -> int:
        return len(self.factors)

    def is_trivial(self) -> bool:
        return not self.factors

    def elementary_divisors(self) -> Counter:
        """Multiset of prime powers, keyed by ``(prime, exponent)``."""
        out: Counter = Counter()
        for f in self.factors:
            for q, e in factorize(f).items():
                out[q, e] += 1
        return out

    def __str__(self) -> str:
        return render(self)

    def __repr__(self) -> str:
        return f"AbelianInvariants({list(self.factors)})"

    def to_json(self) -> list[int]:
        return list(self.factors)


TRIVIAL = AbelianInvariants()


def canonicalize(orders: Iterable[int]) -> AbelianInvariants:
    """Invariant factors of ``Z_{o1} x Z_{o2} x ...`` via Smith normal form."""
    orders = list(orders)
    for o in orders:
        if o < 1:
            raise NonPositiveOrder(f"cyclic order {o} is not positive")
    orders = [o for o in orders if o > 1]
    if not orders:
        return TRIVIAL
    k = len(orders)
    snf = smith_normal_form(SparseIntMatrix(k, k, {(i, i): o for i, o in enumerate(orders)}))
    return AbelianInvariants(tuple(sorted((d for d in snf.invariants if d > 1), reverse=True)))


def from_elementary_divisors(divisors: Counter) -> AbelianInvariants:
    """Recombine prime powers into invariant factors (CRT)."""
    by_prime: dict[int, list[int]] = {}
    for (q, e), count in divisors.items():
        if count < 0:
            raise ValueError("negative multiplicity")
        by_prime.setdefault(q, []).extend([q ** e] * count)
    width = max((len(v) for v in by_prime.values()), default=0)
    factors = [1] * width
    for powers in by_prime.values():
        powers.sort(reverse=True)
        for i, pw in enumerate(powers):
            factors[i] *= pw
    return AbelianInvariants(tuple(f for f in factors if f > 1))


def tensor(A: AbelianInvariants, B: AbelianInvariants) -> AbelianInvariants:
    """``A (x) B`` using ``Z_a (x) Z_b = Z_gcd(a,b)``."""
    return canonicalize(math.gcd(a, b) for a in A.factors for b in B.factors)


def direct_sum(*parts: AbelianInvariants) -> AbelianInvariants:
    return canonicalize(f for part in parts for f in part.factors)


def multiplier_abelian(A: AbelianInvariants) -> AbelianInvariants:
    """Schur multiplier of an abelian group: ``Z_{n2} x Z_{n3}^2 x ... x Z_{nk}^{k-1}``."""
    return canonicalize(n for i, n in enumerate(A.factors) for _ in range(i))


def cancel_direct_factor(whole: AbelianInvariants, factor: AbelianInvariants) -> AbelianInvariants:
    """The unique ``C`` with ``whole = factor x C``.

    Works prime by prime on elementary divisors; raises NotADirectFactor when
    ``factor``'s divisors are not a sub-multiset of ``whole``'s.
    """
    rest = whole.elementary_divisors()
    rest.subtract(factor.elementary_divisors())
    short = sorted(key for key, count in rest.items() if count < 0)
    if short:
        q, e = short[0]
        raise NotADirectFactor(f"{factor} is not a direct factor of {whole}: "
                               f"missing elementary divisor {q}^{e}")
    return from_elementary_divisors(+rest)


def render(A: AbelianInvariants) -> str:
    if not A.factors:
        return "1"
    return " x ".join(f"Z{n}" for n in A.factors)


_TOKEN = re.compile(r"\s*(?:Z(\d+)|(1))\s*")


def parse_invariants(text: str) -> AbelianInvariants:
    """Parse ``"Z4 x Z2"`` / ``"1"`` (any cyclic orders; result is canonical)."""
    orders = []
    pos = 0
    parts = text.split("x")
    for part in parts:
        m = _TOKEN.fullmatch(part)
        if not m:
            raise ParseError("bad abelian factor " + repr(part.strip()), pos, "Z<n> or 1")
        orders.append(int(m.group(1)) if m.group(1) else 1)
        pos += len(part) + 1
    return canonicalize(orders)
