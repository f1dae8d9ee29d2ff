"""
Cartan matrices and the root-system data derived from them.

Everything is computed type-uniformly from the matrix: connected components of
the Dynkin graph, exact determinants and inverses of principal sub-matrices,
positive roots (by closing the simple roots under simple reflections),
exponents (conjugate partition of the root-height distribution), Coxeter
numbers and parabolic Weyl-group orders.  No table of Lie types is consulted.

Convention: ``c_ij = <alpha_i, alpha_j> = 2 (alpha_i, alpha_j) / (alpha_j, alpha_j)``,
so the B3 matrix is ``[[2,-1,0],[-1,2,-2],[0,-1,2]]`` (node 3 short).

Node labels are ``1..n``; a node set is a ``frozenset`` of labels.
"""

from __future__ import annotations

import hashlib
import json
import re
import threading
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

from .errors import CartanError, InvariantError
from .exact import RationalMatrix, bareiss_det, bareiss_inverse, format_rational

NodeSet = frozenset

MAX_RANK = 20
EMPTY: NodeSet = frozenset()


def nodeset(members: Iterable[int] = ()) -> NodeSet:
    return frozenset(int(m) for m in members)


def graded_lex_key(s: Iterable[int]):
    t = tuple(sorted(s))
    return (len(t), t)


def all_subsets(n: int) -> list[NodeSet]:
    """All subsets of ``{1..n}`` in graded-lexicographic order."""
    nodes = range(1, n + 1)
    return [frozenset(c) for k in range(n + 1) for c in combinations(nodes, k)]


def format_subset(s: Iterable[int]) -> str:
    return "{" + ",".join(str(x) for x in sorted(s)) + "}"


def parse_subset(text: str) -> NodeSet:
    """Parse ``"1,3"``, ``"{1,3}"``, ``"[1, 3]"`` or ``""`` into a node set."""
    body = text.strip().strip("{}[]() ")
    if not body:
        return EMPTY
    return frozenset(int(tok) for tok in re.split(r"[,\s]+", body) if tok)


@dataclass(frozen=True)
class Violation:
    kind: str
    indices: tuple
    message: str

    def __str__(self):
        return self.message


@dataclass(frozen=True)
class CartanMatrix:
    """A validated finite-type Cartan matrix on nodes ``1..n``."""

    entries: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in r) for r in self.entries)
        object.__setattr__(self, "entries", rows)

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def nodes(self) -> range:
        return range(1, self.n + 1)

    @property
    def labels(self) -> tuple[int, ...]:
        return tuple(self.nodes)

    def __getitem__(self, key) -> int:
        i, j = key
        return self.entries[i - 1][j - 1]

    def submatrix(self, k: Iterable[int]) -> list[list[int]]:
        idx = sorted(k)
        return [[self[i, j] for j in idx] for i in idx]

    def to_lists(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def digest(self) -> str:
        blob = json.dumps(self.to_lists(), separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]

    def check_nodes(self, s: Iterable[int]) -> NodeSet:
        s = nodeset(s)
        bad = sorted(x for x in s if not 1 <= x <= self.n)
        if bad:
            raise ValueError(f"node(s) {bad} outside 1..{self.n}")
        return s

    def neighbours(self, i: int) -> list[int]:
        return [j for j in self.nodes if j != i and self[i, j] != 0]


# ---------------------------------------------------------------------------
# Construction and validation
# ---------------------------------------------------------------------------

def _chain(n: int) -> list[list[int]]:
    m = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for i in range(n - 1):
        m[i][i + 1] = m[i + 1][i] = -1
    return m


def family_matrix(family: str, rank: int) -> list[list[int]]:
    """Bourbaki-numbered Cartan matrix of an irreducible family."""
    f = family.upper()
    n = int(rank)
    if n < 1:
        raise CartanError(f"rank must be positive, got {family}{rank}")
    if f == "A":
        return _chain(n)
    if f in ("B", "C"):
        m = _chain(n)
        if n >= 2:
            # B: node n short, C: node n long
            if f == "B":
                m[n - 2][n - 1] = -2
            else:
                m[n - 1][n - 2] = -2
        return m
    if f == "D":
        if n < 3:
            raise CartanError(f"type D needs rank >= 3, got D{n}")
        m = _chain(n - 1)
        m = [row + [0] for row in m] + [[0] * n]
        m[n - 1][n - 1] = 2
        m[n - 3][n - 1] = m[n - 1][n - 3] = -1
        return m
    if f == "E":
        if n not in (6, 7, 8):
            raise CartanError(f"type E needs rank 6, 7 or 8, got E{n}")
        m = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
        edges = [(1, 3), (2, 4), (3, 4)] + [(k, k + 1) for k in range(4, n)]
        for a, b in edges:
            m[a - 1][b - 1] = m[b - 1][a - 1] = -1
        return m
    if f == "F":
        if n != 4:
            raise CartanError(f"type F needs rank 4, got F{n}")
        m = _chain(4)
        m[1][2] = -2
        return m
    if f == "G":
        if n != 2:
            raise CartanError(f"type G needs rank 2, got G{n}")
        return [[2, -1], [-3, 2]]
    raise CartanError(f"unknown family {family!r}")


def block_diagonal(blocks: Sequence[Sequence[Sequence[int]]]) -> list[list[int]]:
    n = sum(len(b) for b in blocks)
    m = [[0] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                m[off + i][off + j] = x
        off += len(b)
    return m


def parse_type_spec(text: str) -> list[tuple[str, int]]:
    """``"A4+G2"``, ``"B3"``, ``"A2xA1"`` -> ``[("A", 4), ("G", 2)]``."""
    cleaned = text.strip().upper()
    parts = re.findall(r"([A-G])\s*(\d+)", cleaned)
    leftover = re.sub(r"([A-G])\s*(\d+)", "", cleaned)
    if not parts or re.sub(r"[\s+X,*]", "", leftover):
        raise CartanError(f"cannot parse root-system type {text!r}")
    return [(f, int(r)) for f, r in parts]


def validate_cartan(m) -> list[Violation]:
    """
    Check every finite-type Cartan invariant; an empty list means the matrix is valid.

    Finite type is tested by requiring the Dynkin graph to be a forest and every
    leading principal minor of each component (in a BFS order) to be positive.
    On a forest the matrix is symmetrizable, ``C = D S`` with ``D`` positive
    diagonal, so this is Sylvester's criterion for ``S`` and is equivalent to
    all principal minors of ``C`` being positive.
    """
    out: list[Violation] = []
    try:
        rows = [list(r) for r in m]
    except TypeError:
        return [Violation("shape", (), "matrix must be a list of rows")]
    n = len(rows)
    if n == 0:
        return [Violation("shape", (), "matrix is empty")]
    if any(len(r) != n for r in rows):
        return [Violation("shape", (), "matrix must be square")]
    for i in range(n):
        for j in range(n):
            x = rows[i][j]
            if isinstance(x, bool) or not isinstance(x, int):
                if isinstance(x, float) and x.is_integer():
                    rows[i][j] = int(x)
                else:
                    out.append(Violation("integer", (i + 1, j + 1), f"entry ({i + 1},{j + 1}) = {x!r} is not an integer"))
    if out:
        return out
    for i in range(n):
        if rows[i][i] != 2:
            out.append(Violation("diagonal", (i + 1,), f"diagonal entry ({i + 1},{i + 1}) = {rows[i][i]}, expected 2"))
    for i in range(n):
        for j in range(n):
            if i != j and rows[i][j] > 0:
                out.append(Violation("off-diagonal-sign", (i + 1, j + 1), f"off-diagonal entry ({i + 1},{j + 1}) = {rows[i][j]} is positive"))
    for i in range(n):
        for j in range(i + 1, n):
            if (rows[i][j] == 0) != (rows[j][i] == 0):
                out.append(Violation("zero-symmetry", (i + 1, j + 1), f"zero-symmetry fails at ({i + 1},{j + 1}): c_ij={rows[i][j]}, c_ji={rows[j][i]}"))
    if out:
        return out
    return _finite_type_violations(rows)


def _finite_type_violations(rows) -> list[Violation]:
    n = len(rows)
    seen = [False] * n
    for root in range(n):
        if seen[root]:
            continue
        order = []
        parent = {root: None}
        seen[root] = True
        queue = deque([root])
        cycle_nodes = None
        while queue:
            a = queue.popleft()
            order.append(a)
            for b in range(n):
                if b == a or rows[a][b] == 0:
                    continue
                if not seen[b]:
                    seen[b] = True
                    parent[b] = a
                    queue.append(b)
                elif parent.get(a) != b and cycle_nodes is None:
                    cycle_nodes = _cycle_through(parent, a, b)
        if cycle_nodes is not None:
            return [_cycle_violation(rows, cycle_nodes)]
        for k in range(1, len(order) + 1):
            idx = sorted(order[:k])
            d = bareiss_det([[rows[i][j] for j in idx] for i in idx])
            if d <= 0:
                members = tuple(i + 1 for i in idx)
                return [Violation("finite-type", members, f"principal minor on nodes {format_subset(members)} has determinant {d} (not finite type)")]
    return []


def _cycle_through(parent, a, b) -> list[int]:
    def path(x):
        p = []
        while x is not None:
            p.append(x)
            x = parent[x]
        return p

    pa, pb = path(a), path(b)
    common = set(pa) & set(pb)
    return sorted({x for x in pa + pb if x not in common} | {next(x for x in pa if x in common)})


def _cycle_violation(rows, cycle) -> Violation:
    for k in range(1, len(cycle) + 1):
        for sub in combinations(cycle, k):
            d = bareiss_det([[rows[i][j] for j in sub] for i in sub])
            if d <= 0:
                members = tuple(i + 1 for i in sub)
                return Violation("finite-type", members, f"principal minor on nodes {format_subset(members)} has determinant {d} (not finite type)")
    members = tuple(i + 1 for i in cycle)
    return Violation("finite-type", members, f"Dynkin graph has a cycle through {format_subset(members)}")


def build_cartan(spec) -> CartanMatrix:
    """
    Build a validated Cartan matrix.

    ``spec`` may be a type string (``"B3"``, ``"A4+G2"``), a ``(family, rank)``
    pair, a list of such pairs (block diagonal), or an explicit square integer
    matrix.
    """
    if isinstance(spec, str):
        spec = parse_type_spec(spec)
    if isinstance(spec, tuple) and len(spec) == 2 and isinstance(spec[0], str):
        spec = [spec]
    spec = list(spec)
    if not spec:
        raise CartanError("empty root-system spec")
    if all(isinstance(p, (tuple, list)) and len(p) == 2 and isinstance(p[0], str) for p in spec):
        rows = block_diagonal([family_matrix(f, r) for f, r in spec])
    else:
        rows = [list(r) for r in spec]
    if len(rows) > MAX_RANK:
        raise CartanError(f"rank {len(rows)} exceeds the supported maximum {MAX_RANK}")
    violations = validate_cartan(rows)
    if violations:
        raise CartanError("; ".join(map(str, violations)), violations)
    return CartanMatrix(tuple(tuple(r) for r in rows))


def load_cartan_document(doc: dict) -> CartanMatrix:
    """Build from ``{"components": [["A",4],["G",2]]}`` or ``{"cartan": [[...]]}``."""
    if not isinstance(doc, dict):
        raise CartanError("Cartan document must be a JSON object")
    if "components" in doc and "cartan" in doc:
        raise CartanError("give exactly one of 'components' or 'cartan'")
    if "components" in doc:
        try:
            pairs = [(str(f), int(r)) for f, r in doc["components"]]
        except (TypeError, ValueError) as exc:
            raise CartanError(f"bad 'components' entry: {exc}") from None
        return build_cartan(pairs)
    if "cartan" in doc:
        rows = doc["cartan"]
        if not isinstance(rows, list) or not rows:
            raise CartanError("'cartan' must be a non-empty list of rows")
        return build_cartan(rows)
    raise CartanError("document needs a 'components' or 'cartan' key")


# ---------------------------------------------------------------------------
# Derived data
# ---------------------------------------------------------------------------

class RootSystemData:
    """
    Memoized per-subset data for one Cartan matrix.

    The caches are pure memoization: every method returns exactly what a
    fresh computation would.  A lock guards cache writes so concurrent readers
    are safe; a race can at worst compute the same value twice.
    """

    CACHE_VERSION = 1

    def __init__(self, cartan: CartanMatrix):
        self.cartan = cartan
        self._lock = threading.Lock()
        self._det: dict[NodeSet, int] = {}
        self._inv: dict[NodeSet, RationalMatrix] = {}
        self._roots: dict[NodeSet, tuple] = {}
        self._exp: dict[NodeSet, tuple[int, ...]] = {}
        self._weyl: dict[NodeSet, int] = {}
        self._comp: dict[NodeSet, tuple[NodeSet, ...]] = {}

    def _store(self, cache, key, value):
        with self._lock:
            return cache.setdefault(key, value)

    def components(self, s: Iterable[int]) -> list[NodeSet]:
        s = nodeset(s)
        hit = self._comp.get(s)
        if hit is None:
            hit = self._store(self._comp, s, tuple(_components(self.cartan, s)))
        return list(hit)

    def is_connected(self, s: Iterable[int]) -> bool:
        return len(self.components(s)) == 1

    def det(self, s: Iterable[int]) -> int:
        s = nodeset(s)
        hit = self._det.get(s)
        if hit is None:
            hit = self._store(self._det, s, bareiss_det(self.cartan.submatrix(s)))
        return hit

    def inverse(self, s: Iterable[int]) -> RationalMatrix:
        s = nodeset(s)
        if not s:
            raise ValueError("inverse of the empty Cartan sub-matrix is not defined")
        hit = self._inv.get(s)
        if hit is None:
            sub = RationalMatrix(self.cartan.submatrix(s), sorted(s))
            hit = self._store(self._inv, s, bareiss_inverse(sub))
        return hit

    def positive_roots(self, k: Iterable[int]) -> list[tuple[int, ...]]:
        k = self._connected(k)
        hit = self._roots.get(k)
        if hit is None:
            hit = self._store(self._roots, k, tuple(_positive_roots(self.cartan, k)))
        return list(hit)

    def exponents(self, k: Iterable[int]) -> list[int]:
        k = self._connected(k)
        hit = self._exp.get(k)
        if hit is None:
            heights = [sum(r) for r in self.positive_roots(k)]
            hit = self._store(self._exp, k, tuple(_exponents_from_heights(heights, len(k))))
        return list(hit)

    def coxeter_number(self, k: Iterable[int]) -> int:
        k = self._connected(k)
        exps = self.exponents(k)
        n_pos = sum(exps)
        h, rem = divmod(2 * n_pos, len(k))
        if rem or h != max(exps) + 1:
            raise InvariantError(f"Coxeter number mismatch on {format_subset(k)}: 2N/r={Fraction(2 * n_pos, len(k))}, 1+max height={max(exps) + 1}")
        return h

    def weyl_order(self, s: Iterable[int]) -> int:
        s = nodeset(s)
        hit = self._weyl.get(s)
        if hit is None:
            total = 1
            for comp in self.components(s):
                for m in self.exponents(comp):
                    total *= m + 1
            hit = self._store(self._weyl, s, total)
        return hit

    def _connected(self, k) -> NodeSet:
        k = nodeset(k)
        if not k or not self.is_connected(k):
            raise ValueError(f"node set {format_subset(k)} is not connected")
        return k

    # -- serialization for the on-disk cache ------------------------------

    def to_json(self) -> dict:
        return {
            "version": self.CACHE_VERSION,
            "cartan": self.cartan.to_lists(),
            "det": {format_subset(k): v for k, v in sorted(self._det.items(), key=lambda kv: graded_lex_key(kv[0]))},
            "exponents": {format_subset(k): list(v) for k, v in sorted(self._exp.items(), key=lambda kv: graded_lex_key(kv[0]))},
            "inverse": {
                format_subset(k): [[format_rational(x) for x in row] for row in v.rows]
                for k, v in sorted(self._inv.items(), key=lambda kv: graded_lex_key(kv[0]))
            },
        }

    def load_json(self, doc: dict) -> bool:
        """Merge a cache document; ignored (returns False) if stale or foreign."""
        if doc.get("version") != self.CACHE_VERSION or doc.get("cartan") != self.cartan.to_lists():
            return False
        with self._lock:
            for key, v in doc.get("det", {}).items():
                self._det.setdefault(parse_subset(key), int(v))
            for key, v in doc.get("exponents", {}).items():
                self._exp.setdefault(parse_subset(key), tuple(int(x) for x in v))
            for key, rows in doc.get("inverse", {}).items():
                s = parse_subset(key)
                self._inv.setdefault(s, RationalMatrix([[Fraction(x) for x in r] for r in rows], sorted(s)))
        return True


def _components(c: CartanMatrix, s: NodeSet) -> list[NodeSet]:
    remaining = set(s)
    comps = []
    for start in sorted(s):
        if start not in remaining:
            continue
        remaining.discard(start)
        comp = {start}
        stack = [start]
        while stack:
            a = stack.pop()
            for b in list(remaining):
                if c[a, b] != 0:
                    remaining.discard(b)
                    comp.add(b)
                    stack.append(b)
        comps.append(frozenset(comp))
    return comps


def _positive_roots(c: CartanMatrix, k: NodeSet) -> list[tuple[int, ...]]:
    """
    Positive roots of the sub-system on ``k``, in simple-root coordinates
    ordered by sorted labels.  ``s_i(beta) = beta - <beta, alpha_i^vee> alpha_i``
    with ``<beta, alpha_i^vee> = sum_j beta_j c_ji``.
    """
    idx = sorted(k)
    r = len(idx)
    cols = [[c[idx[j], idx[i]] for j in range(r)] for i in range(r)]
    simple = [tuple(int(a == b) for b in range(r)) for a in range(r)]
    seen = set(simple)
    queue = deque(simple)
    while queue:
        beta = queue.popleft()
        for i in range(r):
            pairing = sum(b * x for b, x in zip(beta, cols[i]))
            if pairing >= 0:
                continue
            image = list(beta)
            image[i] -= pairing
            image = tuple(image)
            if image not in seen:
                seen.add(image)
                queue.append(image)
    # any root beta != alpha_i with pairing > 0 has a lower positive image,
    # so raising from the simple roots reaches every positive root
    return sorted(seen, key=lambda v: (sum(v), v))


def _exponents_from_heights(heights: Sequence[int], rank: int) -> list[int]:
    top = max(heights)
    counts = [0] * (top + 1)
    for h in heights:
        counts[h] += 1
    counts = counts[1:]
    if counts[0] != rank or any(a < b for a, b in zip(counts, counts[1:])):
        raise InvariantError(f"root height distribution {counts} is not a partition")
    return sorted(sum(1 for x in counts if x >= j) for j in range(1, rank + 1))


@lru_cache(maxsize=64)
def rootsystem(c: CartanMatrix) -> RootSystemData:
    """Shared :class:`RootSystemData` instance for ``c``."""
    return RootSystemData(c)


def components(c: CartanMatrix, s: Iterable[int]) -> list[NodeSet]:
    return rootsystem(c).components(c.check_nodes(s))


def det_cartan(c: CartanMatrix, s: Iterable[int]) -> int:
    return rootsystem(c).det(c.check_nodes(s))


def inverse_cartan(c: CartanMatrix, s: Iterable[int]) -> RationalMatrix:
    return rootsystem(c).inverse(c.check_nodes(s))


def positive_roots(c: CartanMatrix, k: Iterable[int]) -> list[tuple[int, ...]]:
    return rootsystem(c).positive_roots(c.check_nodes(k))


def exponents(c: CartanMatrix, k: Iterable[int]) -> list[int]:
    return rootsystem(c).exponents(c.check_nodes(k))


def coxeter_number(c: CartanMatrix, k: Iterable[int]) -> int:
    return rootsystem(c).coxeter_number(c.check_nodes(k))


def weyl_order(c: CartanMatrix, s: Iterable[int]) -> int:
    return rootsystem(c).weyl_order(c.check_nodes(s))
