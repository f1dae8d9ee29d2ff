"""
Independent checks for the closed-form generator matrices.

* :func:`oracle_multiply` expands ``w_i * w_J`` straight from the defining
  relations ``sum_j c_ij w_i w_j = 2t w_i`` of the cohomology presentation, by
  solving a small linear system with plain Gaussian elimination.  It never
  touches the closed-form entries.
* :func:`neumann_entry` evaluates ``B^s (E - B^s)^{-1}`` directly.
* :func:`numeric_convergence_check` sums the Neumann series in floating point.
* :func:`lusztig_tits_entry` recovers simply-laced inverse-Cartan entries as
  determinant ratios.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np

from .exact import ONE, T, TPoly, RationalMatrix, SingularMatrixError, bareiss_inverse
from .rootsys import CartanMatrix, format_subset, nodeset, rootsystem
from .operators import Vector, _check_pair, b_hat


def neumann_entry(c: CartanMatrix, k: Iterable[int], i: int, s: int) -> Fraction:
    """Entry ``(i, s)`` of ``B_K^s (E - B_K^s)^{-1}``, by exact inversion."""
    k = _check_pair(c, k, i, s)
    return neumann_matrix(c, k, s)[i, s]


def neumann_matrix(c: CartanMatrix, k: Iterable[int], s: int) -> RationalMatrix:
    b = b_hat(c, k, s)
    e = RationalMatrix.identity(b.labels)
    return b @ bareiss_inverse(e - b)


def _gauss_jordan_inverse(rows: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(rows)
    a = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise SingularMatrixError("oracle system is singular")
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [r[n:] for r in a]


def oracle_multiply(c: CartanMatrix, i: int, j: Iterable[int]) -> Vector:
    """
    Expansion of ``w_i * w_J`` in the square-free monomial basis, from the ring relations.

    For ``a`` in ``J`` write ``x_a = w_a * w_J``.  Using
    ``w_a^2 = sum_{b != a} beta_ab w_a w_b + t w_a`` with ``beta_ab = -c_ab / 2``,

        x_a = sum_{a' in J - a} beta_aa' x_a' + t e_J + sum_{s not in J} beta_as e_{J+s},

    a linear system in the ``x_a`` whose matrix is ``C_J / 2``.
    """
    j = c.check_nodes(j)
    if i not in c.nodes:
        raise ValueError(f"node {i} outside 1..{c.n}")
    if i not in j:
        return {j | {i}: ONE}
    members = sorted(j)
    n = len(members)

    def beta(a, b):
        return Fraction(-c[a, b], 2)

    system = [[Fraction(int(p == q)) - (beta(a, b) if p != q else 0)
               for q, b in enumerate(members)] for p, a in enumerate(members)]
    rhs: list[Vector] = []
    for a in members:
        r: Vector = {j: T}
        for s in c.nodes:
            if s not in j and c[a, s] != 0:
                r[j | {s}] = TPoly.const(beta(a, s))
        rhs.append(r)
    inv = _gauss_jordan_inverse(system)
    row = inv[members.index(i)]
    out: Vector = {}
    for p in range(n):
        if row[p] == 0:
            continue
        for key, val in rhs[p].items():
            out[key] = out.get(key, TPoly()) + val * row[p]
    return {key: v for key, v in out.items() if v}


@dataclass
class ConvergenceReport:
    k: tuple
    s: int
    truncation: int
    tolerance: float
    max_abs_error: float
    spectral_estimate: float
    nilpotent_index: int | None
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "k": list(self.k), "s": self.s, "truncation": self.truncation,
            "tolerance": self.tolerance, "max_abs_error": self.max_abs_error,
            "spectral_estimate": self.spectral_estimate,
            "nilpotent_index": self.nilpotent_index, "ok": self.ok,
            "failures": list(self.failures),
        }


def numeric_convergence_check(c: CartanMatrix, k: Iterable[int], s: int,
                              truncation: int = 200, tolerance: float = 1e-9) -> ConvergenceReport:
    """
    Compare the floating-point partial sum ``sum_{p=1..m} (B^s)^p`` with the
    exact ``B^s (E - B^s)^{-1}``.

    The spectral radius is bounded above by ``||(B^s)^m||_2^{1/m}`` (Gelfand);
    the report fails if that bound is not below 1.
    """
    k = c.check_nodes(k)
    b = b_hat(c, k, s)
    exact = neumann_matrix(c, k, s)
    bf = np.array([[float(x) for x in r] for r in b.rows])
    r = bf.shape[0]
    power = np.eye(r)
    partial = np.zeros((r, r))
    for _ in range(truncation):
        power = power @ bf
        partial += power
    ex = np.array([[float(x) for x in row] for row in exact.rows])
    err = float(np.max(np.abs(partial - ex))) if r else 0.0
    norm = float(np.linalg.norm(power, 2)) if r else 0.0
    estimate = norm ** (1.0 / truncation) if norm > 0 else 0.0

    nil = None
    p = RationalMatrix.identity(b.labels)
    for step in range(1, r + 1):
        p = p @ b
        if all(x == 0 for row in p.rows for x in row):
            nil = step
            break

    failures = []
    if not err <= tolerance:
        failures.append(f"max |partial - exact| = {err:.3e} exceeds {tolerance:.1e}")
    if not estimate < 1:
        failures.append(f"spectral-radius estimate {estimate:.6f} is not < 1")
    return ConvergenceReport(tuple(sorted(k)), s, truncation, tolerance, err, estimate, nil, failures)


def dynkin_path(c: CartanMatrix, k: Iterable[int], i: int, j: int) -> list[int]:
    """Nodes on the unique path from ``i`` to ``j`` in the Dynkin tree on ``k``."""
    k = nodeset(k)
    prev = {i: None}
    queue = deque([i])
    while queue:
        a = queue.popleft()
        if a == j:
            break
        for b in sorted(k):
            if b not in prev and b != a and c[a, b] != 0:
                prev[b] = a
                queue.append(b)
    if j not in prev:
        raise ValueError(f"{i} and {j} are not connected in {format_subset(k)}")
    path = []
    x = j
    while x is not None:
        path.append(x)
        x = prev[x]
    return path[::-1]


def lusztig_tits_entry(c: CartanMatrix, k: Iterable[int], i: int, j: int) -> Fraction:
    """
    ``det(C(i,j)) / det(C_K)``, where ``C(i,j)`` is the Cartan sub-matrix on
    ``K`` minus the ``i``-``j`` path.  Restricted to connected simply-laced ``K``.
    """
    k = c.check_nodes(k)
    if i not in k or j not in k:
        raise ValueError(f"nodes {i}, {j} must lie in {format_subset(k)}")
    rs = rootsystem(c)
    if not rs.is_connected(k):
        raise ValueError(f"{format_subset(k)} is not connected")
    if any(c[a, b] not in (0, -1) for a in k for b in k if a != b):
        raise ValueError(f"{format_subset(k)} is not simply laced")
    rest = k - set(dynkin_path(c, k, i, j))
    return Fraction(rs.det(rest), rs.det(k))
