import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from peterson.exact import (
    ONE,
    T,
    ZERO,
    RationalMatrix,
    SingularMatrixError,
    TPoly,
    bareiss_det,
    bareiss_inverse,
    format_rational,
    parse_rational,
    rank_one_update_inverse,
)


def _random_matrix(rng, n):
    return [[Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(n)] for _ in range(n)]


def test_bareiss_inverse_random_matrices():
    rng = random.Random(1)
    done = 0
    while done < 1000:
        n = rng.randint(1, 6)
        m = RationalMatrix(_random_matrix(rng, n))
        try:
            inv = bareiss_inverse(m)
        except SingularMatrixError:
            continue
        assert (m @ inv).is_identity()
        assert (inv @ m).is_identity()
        done += 1


def test_bareiss_det_small_cases():
    assert bareiss_det([]) == 1
    assert bareiss_det([[5]]) == 5
    assert bareiss_det([[2, -1], [-1, 2]]) == 3
    assert bareiss_det([[0, 1], [1, 0]]) == -1
    assert bareiss_det([[1, 2], [2, 4]]) == 0
    rng = random.Random(7)
    for _ in range(50):
        n = rng.randint(1, 4)
        rows = [[rng.randint(-5, 5) for _ in range(n)] for _ in range(n)]
        # Leibniz expansion as the oracle
        total = 0
        for perm in itertools.permutations(range(n)):
            sign = 1
            for a in range(n):
                for b in range(a + 1, n):
                    if perm[a] > perm[b]:
                        sign = -sign
            prod = 1
            for a in range(n):
                prod *= rows[a][perm[a]]
            total += sign * prod
        assert bareiss_det(rows) == total


def test_singular_inverse_raises():
    with pytest.raises(SingularMatrixError):
        bareiss_inverse(RationalMatrix([[1, 2], [2, 4]]))


def test_inverse_keeps_labels():
    m = RationalMatrix([[2, -1], [-1, 2]], labels=[3, 5])
    inv = bareiss_inverse(m)
    assert inv.labels == (3, 5)
    assert inv[3, 3] == Fraction(2, 3)
    assert inv[3, 5] == Fraction(1, 3)


def test_rank_one_update_matches_direct_inverse():
    rng = random.Random(3)
    checked = 0
    while checked < 200:
        n = rng.randint(1, 5)
        a = RationalMatrix(_random_matrix(rng, n))
        u = [Fraction(rng.randint(-3, 3)) for _ in range(n)]
        v = [Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(n)]
        uv = RationalMatrix([[ui * vj for vj in v] for ui in u])
        try:
            ainv = bareiss_inverse(a)
            direct = bareiss_inverse(a - uv)
        except SingularMatrixError:
            continue
        assert rank_one_update_inverse(ainv, u, v) == direct
        checked += 1


def test_rank_one_update_singular():
    ainv = RationalMatrix.identity([1])
    with pytest.raises(SingularMatrixError):
        rank_one_update_inverse(ainv, [1], [1])


def test_rational_format_round_trip():
    for x in [Fraction(0), Fraction(4, 3), Fraction(-7, 2), Fraction(12)]:
        assert parse_rational(format_rational(x)) == x
    assert format_rational(Fraction(4, 3)) == "4/3"
    assert format_rational(Fraction(16)) == "16"


def test_tpoly_display():
    assert str(T * 2) == "2t"
    assert str(TPoly.const(Fraction(4, 3))) == "4/3"
    assert str(T * T) == "t^2"
    assert str(ZERO) == "0"
    assert TPoly.from_json((T * 10).to_json()) == T * 10


polys = st.dictionaries(
    st.integers(0, 4),
    st.fractions(min_value=-10, max_value=10, max_denominator=6),
    max_size=4,
).map(TPoly)


@settings(max_examples=200, deadline=None)
@given(polys, polys, polys)
def test_tpoly_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + ZERO == a
    assert a * ONE == a
    assert a - a == ZERO
    assert (a * b).evaluate(Fraction(3, 2)) == a.evaluate(Fraction(3, 2)) * b.evaluate(Fraction(3, 2))


def test_tpoly_stores_no_zero_coefficients():
    p = TPoly({0: 1, 1: 0, 2: Fraction(0)})
    assert p.degrees() == [0]
    assert p.is_monomial()
    assert (T - T).is_zero()
