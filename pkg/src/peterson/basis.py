"""
Change of basis between monomials ``w_I`` and Peterson Schubert classes ``p_I``.

``p_I`` is represented by ``det(C_I) / |W_I| * w_I``; expansions carry a basis
tag so the two are never mixed silently.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .errors import InvariantError
from .exact import TPoly
from .operators import structure_constants_c
from .rootsys import CartanMatrix, format_subset, graded_lex_key, nodeset, rootsystem

MONOMIAL = "monomial"
PETERSON = "peterson"


@dataclass
class BasisTaggedExpansion:
    basis: str
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.basis not in (MONOMIAL, PETERSON):
            raise ValueError(f"unknown basis {self.basis!r}")
        self.terms = dict(sorted(
            ((nodeset(k), v if isinstance(v, TPoly) else TPoly.const(v)) for k, v in self.terms.items()),
            key=lambda kv: graded_lex_key(kv[0])))
        self.terms = {k: v for k, v in self.terms.items() if v}
        if self.basis == PETERSON:
            for k, v in self.terms.items():
                if any(x.denominator != 1 or x < 0 for x in v.coeffs.values()):
                    raise InvariantError(f"Peterson coefficient {v} at {format_subset(k)} is not a nonnegative integer polynomial")

    def __getitem__(self, k) -> TPoly:
        return self.terms.get(nodeset(k), TPoly())


def class_coefficient(c: CartanMatrix, i: Iterable[int]) -> Fraction:
    """``det(C_I) / |W_I|``: the scalar with ``p_I = coefficient * w_I``."""
    i = c.check_nodes(i)
    rs = rootsystem(c)
    return Fraction(rs.det(i), rs.weyl_order(i))


def monomial_to_peterson(c: CartanMatrix, expansion: BasisTaggedExpansion) -> BasisTaggedExpansion:
    if expansion.basis != MONOMIAL:
        raise ValueError("expected a monomial-basis expansion")
    return BasisTaggedExpansion(PETERSON, {k: v * (1 / class_coefficient(c, k)) for k, v in expansion.terms.items()})


def peterson_to_monomial(c: CartanMatrix, expansion: BasisTaggedExpansion) -> BasisTaggedExpansion:
    if expansion.basis != PETERSON:
        raise ValueError("expected a Peterson-basis expansion")
    return BasisTaggedExpansion(MONOMIAL, {k: v * class_coefficient(c, k) for k, v in expansion.terms.items()})


def peterson_product(c: CartanMatrix, i: Iterable[int], j: Iterable[int],
                     equivariant: bool = True) -> BasisTaggedExpansion:
    """``p_I * p_J`` expanded in the Peterson basis."""
    sc = structure_constants_c(c, i, j, equivariant)
    return BasisTaggedExpansion(PETERSON, sc.terms)
