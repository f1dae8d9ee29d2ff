"""
Subset-indexed multiplication operators and structure constants.

For a node ``i`` the generator matrix has rows and columns indexed by subsets
of the node set.  Row ``J`` records the expansion of ``w_i * w_J`` in the
square-free monomial basis ``w_K = prod_{k in K} w_k``:

* ``i not in J``: a single entry ``1`` at ``K = J + {i}``;
* ``i in J``: for each ``s not in J``, the entry
  ``[C_K^{-1}]_{i,s} / [C_K^{-1}]_{s,s}`` at ``K = J + {s}``, plus (equivariant
  only) the diagonal entry ``2t * sum_k [C_J^{-1}]_{i,k}`` at ``K = J``.

Products ``w_I * w_J`` are then row ``J`` of the product of the generator
matrices for the members of ``I``.  Computations propagate the sparse row
vector ``e_J`` through the generators instead of forming ``2^n x 2^n``
products.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterable, Mapping, Sequence

from .errors import InvariantError
from .exact import ONE, T, TPoly, RationalMatrix
from .rootsys import (
    CartanMatrix,
    NodeSet,
    all_subsets,
    format_subset,
    graded_lex_key,
    nodeset,
    rootsystem,
)

Vector = dict  # NodeSet -> TPoly, sparse; zero entries are never stored

MONOMIAL = "d-basis"
PETERSON = "c-basis"


def b_hat(c: CartanMatrix, k: Iterable[int], s: int) -> RationalMatrix:
    """``B_K = E - C_K/2`` with the row indexed by ``s`` set to zero."""
    k = c.check_nodes(k)
    if s not in k:
        raise ValueError(f"node {s} not in {format_subset(k)}")
    idx = sorted(k)
    rows = [
        [Fraction(0) if a == s else Fraction(int(a == b)) - Fraction(c[a, b], 2) for b in idx]
        for a in idx
    ]
    return RationalMatrix(rows, idx)


def _check_pair(c: CartanMatrix, k, i, s) -> NodeSet:
    k = c.check_nodes(k)
    if i not in k or s not in k:
        raise ValueError(f"nodes {i}, {s} must both lie in {format_subset(k)}")
    if i == s:
        raise ValueError("i and s must differ")
    return k


def closed_form_entry(c: CartanMatrix, k: Iterable[int], i: int, s: int) -> Fraction:
    """Ratio ``[C_K^{-1}]_{i,s} / [C_K^{-1}]_{s,s}``."""
    k = _check_pair(c, k, i, s)
    inv = rootsystem(c).inverse(k)
    return inv[i, s] / inv[s, s]


def _row_sum(c: CartanMatrix, k: NodeSet, i: int) -> Fraction:
    return sum(rootsystem(c).inverse(k).row(i), Fraction(0))


def diagonal_entry(c: CartanMatrix, k: Iterable[int], i: int) -> TPoly:
    """``2t`` times the ``i``-th row sum of ``C_K^{-1}``."""
    k = c.check_nodes(k)
    if i not in k:
        raise ValueError(f"node {i} not in {format_subset(k)}")
    return T * (2 * _row_sum(c, k, i))


class SubsetMatrix:
    """
    Sparse operator on the free module with basis indexed by node subsets.

    Rows are sparse maps ``K -> TPoly``.  A matrix may be backed by a row
    function, in which case rows are generated on first access and memoized;
    :meth:`materialize` forces all ``2^n`` rows.
    """

    def __init__(self, cartan: CartanMatrix, rows: Mapping | None = None,
                 row_fn: Callable[[NodeSet], Vector] | None = None, label: str = ""):
        self.cartan = cartan
        self.label = label
        self._rows: dict[NodeSet, Vector] = {}
        self._row_fn = row_fn
        self._lock = threading.Lock()
        for j, r in (rows or {}).items():
            self._rows[nodeset(j)] = {nodeset(col): v for col, v in r.items() if v}

    def row(self, j: Iterable[int]) -> Vector:
        j = nodeset(j)
        hit = self._rows.get(j)
        if hit is None:
            hit = self._row_fn(j) if self._row_fn is not None else {}
            with self._lock:
                hit = self._rows.setdefault(j, hit)
        return hit

    def __getitem__(self, key) -> TPoly:
        j, k = key
        return self.row(j).get(nodeset(k), TPoly())

    def materialize(self) -> "SubsetMatrix":
        for j in all_subsets(self.cartan.n):
            self.row(j)
        return self

    def rows(self) -> list[tuple[NodeSet, Vector]]:
        """All rows in graded-lex order (materializes)."""
        self.materialize()
        return [(j, self._rows[j]) for j in all_subsets(self.cartan.n)]

    def apply(self, vec: Mapping[NodeSet, TPoly]) -> Vector:
        """Row vector times this matrix."""
        out: Vector = {}
        for j, coeff in vec.items():
            for k, val in self.row(j).items():
                acc = out.get(k)
                term = coeff * val
                out[k] = term if acc is None else acc + term
        return {k: v for k, v in out.items() if v}

    def __matmul__(self, other: "SubsetMatrix") -> "SubsetMatrix":
        rows = {j: other.apply(r) for j, r in self.rows()}
        return SubsetMatrix(self.cartan, rows, label=f"{self.label}*{other.label}")

    def nnz(self) -> int:
        return sum(len(r) for _, r in self.rows())


def generator_row(c: CartanMatrix, i: int, j: NodeSet, equivariant: bool = True) -> Vector:
    """Row ``J`` of the generator matrix of node ``i``."""
    if i not in j:
        return {j | {i}: ONE}
    row: Vector = {}
    if equivariant:
        row[j] = diagonal_entry(c, j, i)
    for s in c.nodes:
        if s in j:
            continue
        k = j | {s}
        val = closed_form_entry(c, k, i, s)
        if val:
            row[k] = TPoly.const(val)
    return row


_GENERATORS: dict = {}
_GEN_LOCK = threading.Lock()


def generator_matrix(c: CartanMatrix, i: int, equivariant: bool = True) -> SubsetMatrix:
    """Lazily populated generator matrix for node ``i`` (shared per Cartan matrix)."""
    if i not in c.nodes:
        raise ValueError(f"node {i} outside 1..{c.n}")
    key = (c, i, bool(equivariant))
    hit = _GENERATORS.get(key)
    if hit is None:
        m = SubsetMatrix(c, row_fn=lambda j: generator_row(c, i, j, equivariant),
                         label=f"gen{i}{'' if equivariant else '@0'}")
        with _GEN_LOCK:
            hit = _GENERATORS.setdefault(key, m)
    return hit


def clear_caches():
    """Drop memoized generator matrices and root-system data."""
    with _GEN_LOCK:
        _GENERATORS.clear()
    rootsystem.cache_clear()


def propagate(c: CartanMatrix, start: Mapping[NodeSet, TPoly], sequence: Sequence[int],
              equivariant: bool = True) -> Vector:
    """Push a sparse row vector through the generators of ``sequence`` in order."""
    vec = {nodeset(k): v for k, v in start.items() if v}
    for i in sequence:
        vec = generator_matrix(c, i, equivariant).apply(vec)
        if not vec:
            break
    return vec


@dataclass
class StructureConstants:
    """Expansion of ``w_I * w_J`` (d-basis) or ``p_I * p_J`` (c-basis)."""

    i: NodeSet
    j: NodeSet
    level: str
    equivariant: bool
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        self.terms = dict(sorted(((k, v) for k, v in self.terms.items() if v),
                                 key=lambda kv: graded_lex_key(kv[0])))
        for k, v in self.terms.items():
            expected = len(self.i) + len(self.j) - len(k)
            if expected < 0 or v.degrees() != [expected]:
                raise InvariantError(
                    f"term {format_subset(k)} = {v} is not a single monomial of t-degree {expected}")

    def __getitem__(self, k) -> TPoly:
        return self.terms.get(nodeset(k), TPoly())

    def at_zero(self) -> dict[NodeSet, Fraction]:
        return {k: v.at_zero() for k, v in self.terms.items() if v.at_zero()}


def chain_apply(c: CartanMatrix, i: Iterable[int], j: Iterable[int], equivariant: bool = True,
                order: Sequence[int] | None = None) -> StructureConstants:
    """
    d-basis constants ``d_{I,J}^K``: row ``J`` of the product of the generators of ``I``.

    Generators are applied in sorted order unless ``order`` (a permutation of
    ``I``) is given.
    """
    i_set = c.check_nodes(i)
    j_set = c.check_nodes(j)
    if order is None:
        seq = sorted(i_set)
    else:
        seq = [int(x) for x in order]
        if sorted(seq) != sorted(i_set):
            raise ValueError("order must be a permutation of I")
    terms = propagate(c, {j_set: ONE}, seq, equivariant)
    return StructureConstants(i_set, j_set, MONOMIAL, equivariant, terms)


def prefactor(c: CartanMatrix, i: Iterable[int], j: Iterable[int], k: Iterable[int]) -> Fraction:
    """``det(C_I) det(C_J) |W_K| / (|W_I| |W_J| det(C_K))``."""
    rs = rootsystem(c)
    i, j, k = c.check_nodes(i), c.check_nodes(j), c.check_nodes(k)
    return Fraction(rs.det(i) * rs.det(j) * rs.weyl_order(k),
                    rs.weyl_order(i) * rs.weyl_order(j) * rs.det(k))


def to_peterson_level(c: CartanMatrix, d: StructureConstants) -> StructureConstants:
    terms = {}
    for k, v in d.terms.items():
        val = v * prefactor(c, d.i, d.j, k)
        for deg, coeff in val.coeffs.items():
            if coeff.denominator != 1 or coeff < 0:
                raise InvariantError(
                    f"c-coefficient {coeff} at {format_subset(k)} (t^{deg}) is not a nonnegative integer")
        terms[k] = val
    return StructureConstants(d.i, d.j, PETERSON, d.equivariant, terms)


def structure_constants_c(c: CartanMatrix, i: Iterable[int], j: Iterable[int],
                          equivariant: bool = True) -> StructureConstants:
    """c-basis constants ``c_{I,J}^K`` of ``p_I * p_J = sum_K c_{I,J}^K p_K``."""
    return to_peterson_level(c, chain_apply(c, i, j, equivariant))


def is_nonzero(c: CartanMatrix, i: Iterable[int], j: Iterable[int], k: Iterable[int],
               equivariant: bool = True) -> bool:
    """
    Support criterion: ``K >= I | J`` and each component ``K_k`` of ``K`` has
    ``|K_k| <= |K_k & I| + |K_k & J|`` (equality when non-equivariant).
    """
    i, j, k = c.check_nodes(i), c.check_nodes(j), c.check_nodes(k)
    if not (i | j) <= k:
        return False
    for comp in rootsystem(c).components(k):
        cover = len(comp & i) + len(comp & j)
        if len(comp) > cover or (not equivariant and len(comp) != cover):
            return False
    return True


def support(c: CartanMatrix, i: Iterable[int], j: Iterable[int], equivariant: bool = True) -> list[NodeSet]:
    """All ``K`` with nonzero constant, found from the criterion alone."""
    i, j = c.check_nodes(i), c.check_nodes(j)
    base = i | j
    rest = [x for x in c.nodes if x not in base]
    out = []
    for r in range(len(rest) + 1):
        for extra in combinations(rest, r):
            k = base | frozenset(extra)
            if is_nonzero(c, i, j, k, equivariant):
                out.append(k)
    return sorted(out, key=graded_lex_key)
