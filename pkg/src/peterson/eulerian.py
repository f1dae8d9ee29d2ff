"""
Mixed Phi-Eulerian numbers and the weight-polytope volume polynomial.

``A_c = |W| / det(C) * [M_1^{c_1} ... M_n^{c_n}]_{(empty, Delta)}`` where
``M_i`` is the non-equivariant generator matrix of node ``i``.  The entry is
obtained by pushing ``e_empty`` through the generators, one node at a time.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Sequence

from .errors import InvariantError, UnsupportedError
from .exact import ONE, to_fraction
from .operators import generator_matrix, propagate
from .rootsys import EMPTY, CartanMatrix, rootsystem

MAX_VOLUME_RANK = 9


class CompositionError(ValueError):
    pass


@dataclass(frozen=True)
class MixedEulerianResult:
    composition: tuple
    chain_entry: Fraction
    w_over_det: int
    value: int


def w_over_det(c: CartanMatrix) -> int:
    """``|W| / det(C)`` for the full node set."""
    rs = rootsystem(c)
    w, d = rs.weyl_order(c.nodes), rs.det(c.nodes)
    q, r = divmod(w, d)
    if r:
        raise InvariantError(f"|W| = {w} is not divisible by det = {d}")
    return q


def check_composition(c: CartanMatrix, comp: Sequence[int]) -> tuple[int, ...]:
    comp = tuple(int(x) for x in comp)
    if len(comp) != c.n:
        raise CompositionError(f"composition needs {c.n} parts, got {len(comp)}")
    if any(x < 0 for x in comp):
        raise CompositionError("composition parts must be nonnegative")
    if sum(comp) != c.n:
        raise CompositionError(f"composition must sum to the rank {c.n}, got {sum(comp)}")
    return comp


def _require_irreducible(c: CartanMatrix):
    # The formula is stated for irreducible root systems.  A reducible system
    # would factor over components, but that extension is not defined here.
    if not rootsystem(c).is_connected(c.nodes):
        raise UnsupportedError("mixed Eulerian numbers are only defined here for irreducible root systems")


def _as_integer(value: Fraction, what: str) -> int:
    if value.denominator != 1 or value < 0:
        raise InvariantError(f"{what} = {value} is not a nonnegative integer")
    return value.numerator


def mixed_eulerian_result(c: CartanMatrix, comp: Sequence[int]) -> MixedEulerianResult:
    _require_irreducible(c)
    comp = check_composition(c, comp)
    seq = [i for i, k in zip(c.nodes, comp) for _ in range(k)]
    full = frozenset(c.nodes)
    vec = propagate(c, {EMPTY: ONE}, seq, equivariant=False)
    entry = vec[full].at_zero() if full in vec else Fraction(0)
    prefactor = w_over_det(c)
    value = _as_integer(prefactor * entry, f"A_{comp}")
    return MixedEulerianResult(comp, entry, prefactor, value)


def mixed_eulerian(c: CartanMatrix, comp: Sequence[int]) -> int:
    return mixed_eulerian_result(c, comp).value


def compositions(n: int, parts: int | None = None):
    """Weak compositions of ``n`` into ``parts`` parts, in lexicographic order."""
    parts = n if parts is None else parts
    if parts == 0:
        if n == 0:
            yield ()
        return
    for first in range(n, -1, -1):
        for rest in compositions(n - first, parts - 1):
            yield (first,) + rest


@dataclass
class VolumePolynomial:
    cartan: CartanMatrix
    coefficients: dict = field(default_factory=dict)

    def evaluate(self, u: Sequence) -> Fraction:
        """``V(u) = sum_c A_c prod_i u_i^{c_i} / c_i!``."""
        u = [to_fraction(x) for x in u]
        if len(u) != self.cartan.n:
            raise ValueError("wrong number of variables")
        total = Fraction(0)
        for comp, a in self.coefficients.items():
            term = Fraction(a)
            for ui, ci in zip(u, comp):
                term *= ui**ci / factorial(ci)
            total += term
        return total


def volume_polynomial(c: CartanMatrix) -> VolumePolynomial:
    """All mixed Eulerian numbers of ``c``, sharing prefix propagations."""
    _require_irreducible(c)
    n = c.n
    if n > MAX_VOLUME_RANK:
        raise UnsupportedError(f"volume polynomial enumeration is capped at rank {MAX_VOLUME_RANK}")
    prefactor = w_over_det(c)
    full = frozenset(c.nodes)
    coeffs: dict[tuple, int] = {}

    def walk(node, remaining, vec, prefix):
        if node == n:
            entry = vec.get(full)
            val = entry.at_zero() if entry is not None else Fraction(0)
            coeffs[prefix] = _as_integer(prefactor * val, f"A_{prefix}")
            return
        if node == n - 1:
            powers = [remaining]
        else:
            powers = range(remaining, -1, -1)
        gen = generator_matrix(c, node + 1, equivariant=False)
        for k in powers:
            v = vec
            for _ in range(k):
                v = gen.apply(v)
            walk(node + 1, remaining - k, v, prefix + (k,))

    walk(0, n, {EMPTY: ONE}, ())
    return VolumePolynomial(c, dict(sorted(coeffs.items(), reverse=True)))


def diagram_automorphisms(c: CartanMatrix) -> list[tuple[int, ...]]:
    """
    Permutations ``sigma`` (as tuples ``(sigma(1), ..., sigma(n))``) with
    ``c[sigma(a), sigma(b)] == c[a, b]``, found by backtracking.
    """
    n = c.n
    found = []
    image = [0] * (n + 1)
    used = [False] * (n + 1)

    def extend(a):
        if a > n:
            found.append(tuple(image[1:]))
            return
        for cand in range(1, n + 1):
            if used[cand]:
                continue
            if all(c[cand, image[b]] == c[a, b] and c[image[b], cand] == c[b, a] for b in range(1, a)):
                image[a] = cand
                used[cand] = True
                extend(a + 1)
                used[cand] = False

    extend(1)
    return sorted(found)


def permute_composition(comp: Sequence[int], sigma: Sequence[int]) -> tuple[int, ...]:
    """The composition ``c'`` with ``c'_{sigma(i)} = c_i``."""
    out = [0] * len(comp)
    for i, ci in enumerate(comp):
        out[sigma[i] - 1] = ci
    return tuple(out)
