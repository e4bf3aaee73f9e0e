"""Schur multipliers of finite p-groups and of pairs of p-groups."""

from .abelian import AbelianInvariants, multiplier_abelian
from .catalog import build_group, parse_spec
from .groups import FiniteGroup, Subgroup, make_group
from .homology import schur_multiplier
from .pairs import PairContext, make_context, pair_multiplier

__all__ = [
    "AbelianInvariants", "FiniteGroup", "PairContext", "Subgroup", "build_group",
    "make_context", "make_group", "multiplier_abelian", "pair_multiplier", "parse_spec",
    "schur_multiplier",
]
