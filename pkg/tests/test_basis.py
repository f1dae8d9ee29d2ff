import random
from fractions import Fraction

import pytest

from peterson.basis import (
    MONOMIAL,
    PETERSON,
    BasisTaggedExpansion,
    class_coefficient,
    monomial_to_peterson,
    peterson_product,
    peterson_to_monomial,
)
from peterson.errors import InvariantError
from peterson.exact import ONE, T, TPoly
from peterson.operators import chain_apply
from peterson.rootsys import all_subsets, build_cartan, nodeset

S = nodeset
A9 = build_cartan("A9")
B3 = build_cartan("B3")


def test_class_coefficient_examples():
    assert class_coefficient(B3, set()) == 1
    assert class_coefficient(A9, {5, 6, 7}) == Fraction(1, 6)
    assert class_coefficient(B3, {1, 2, 3}) == Fraction(1, 24)
    assert class_coefficient(A9, {1, 3, 5, 6, 7}) == Fraction(16, 96)


def test_a9_product_through_monomials():
    i, j = S({3, 6, 8}), S({1, 3, 5, 6, 7})
    d = chain_apply(A9, i, j, equivariant=False)
    scale = class_coefficient(A9, i) * class_coefficient(A9, j)
    mono = BasisTaggedExpansion(MONOMIAL, {k: v * scale for k, v in d.terms.items()})
    pet = monomial_to_peterson(A9, mono)
    assert {k: v.at_zero() for k, v in pet.terms.items()} == {
        S(range(1, 9)): 3456,
        S({1, 2, 3, 5, 6, 7, 8, 9}): 24,
        S({1, 3, 4, 5, 6, 7, 8, 9}): 240,
    }
    assert pet.terms == peterson_product(A9, i, j, False).terms


def test_peterson_product_examples():
    assert peterson_product(B3, {2}, {1, 2}).terms == {S({1, 2}): T * 2, S({1, 2, 3}): TPoly.const(16)}
    assert peterson_product(B3, set(), {1, 3}).terms == {S({1, 3}): ONE}
    e = BasisTaggedExpansion(PETERSON, {S(): 1})
    assert peterson_to_monomial(B3, e).terms == {S(): ONE}


@pytest.mark.parametrize("spec", ["A3", "B3", "C4", "D4", "F4", "G2", "A2+A1"])
def test_round_trip_random(spec):
    c = build_cartan(spec)
    rng = random.Random(spec)
    subs = all_subsets(c.n)
    for _ in range(1000):
        terms = {rng.choice(subs): TPoly({rng.randrange(3): rng.randrange(1, 50)}) for _ in range(rng.randrange(1, 5))}
        e = BasisTaggedExpansion(PETERSON, terms)
        mono = peterson_to_monomial(c, e)
        assert mono.basis == MONOMIAL
        assert monomial_to_peterson(c, mono).terms == e.terms


def test_tags_are_enforced():
    with pytest.raises(InvariantError):
        BasisTaggedExpansion(PETERSON, {S({1}): Fraction(1, 2)})
    with pytest.raises(ValueError):
        monomial_to_peterson(B3, BasisTaggedExpansion(PETERSON, {S({1}): 1}))
    with pytest.raises(ValueError):
        peterson_to_monomial(B3, BasisTaggedExpansion(MONOMIAL, {S({1}): 1}))
    with pytest.raises(ValueError):
        BasisTaggedExpansion("schubert", {})


@pytest.mark.parametrize("spec", ["A4", "B4", "G2"])
def test_products_integral(spec):
    c = build_cartan(spec)
    subs = all_subsets(c.n)
    for i in subs:
        for j in subs:
            for eq in (True, False):
                for v in peterson_product(c, i, j, eq).terms.values():
                    assert all(x.denominator == 1 and x > 0 for x in v.coeffs.values())
