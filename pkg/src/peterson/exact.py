"""
Exact arithmetic used by every other module.

Scalars are :class:`fractions.Fraction`.  On top of that this module provides
polynomials in the equivariant parameter ``t`` (:class:`TPoly`), small dense
rational matrices indexed by node labels (:class:`RationalMatrix`), a
fraction-free (Bareiss) determinant and inverse, and the Sherman-Morrison
rank-one inverse update.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from numbers import Rational
from typing import Iterable, Mapping, Sequence


class SingularMatrixError(ArithmeticError):
    """Raised when an exact inversion hits a singular matrix."""


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


def format_rational(x) -> str:
    """Serialize as ``"p/q"``, or ``"p"`` when the denominator is 1."""
    x = to_fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text: str) -> Fraction:
    return Fraction(text.strip())


class TPoly:
    """
    A polynomial in ``t`` with rational coefficients, stored sparsely by degree.

    Zero coefficients are never stored, so two equal polynomials always have the
    same ``coeffs`` dict.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Mapping[int, object] | None = None):
        clean = {}
        for deg, val in (coeffs or {}).items():
            if deg < 0:
                raise ValueError(f"negative t-degree {deg}")
            val = to_fraction(val)
            if val:
                clean[int(deg)] = val
        self._coeffs = dict(sorted(clean.items()))

    @classmethod
    def const(cls, value) -> "TPoly":
        return cls({0: value})

    @classmethod
    def monomial(cls, value, degree: int) -> "TPoly":
        return cls({degree: value})

    @property
    def coeffs(self) -> dict[int, Fraction]:
        return dict(self._coeffs)

    def degrees(self) -> list[int]:
        return list(self._coeffs)

    def coefficient(self, degree: int) -> Fraction:
        return self._coeffs.get(degree, Fraction(0))

    def is_zero(self) -> bool:
        return not self._coeffs

    def __bool__(self):
        return bool(self._coeffs)

    def is_monomial(self) -> bool:
        return len(self._coeffs) == 1

    def at_zero(self) -> Fraction:
        """Evaluate at ``t = 0``."""
        return self._coeffs.get(0, Fraction(0))

    def evaluate(self, t) -> Fraction:
        t = to_fraction(t)
        return sum((c * t**d for d, c in self._coeffs.items()), Fraction(0))

    def __add__(self, other):
        other = _as_tpoly(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self._coeffs)
        for d, c in other._coeffs.items():
            out[d] = out.get(d, 0) + c
        return TPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return TPoly({d: -c for d, c in self._coeffs.items()})

    def __sub__(self, other):
        other = _as_tpoly(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return TPoly({d: c * other for d, c in self._coeffs.items()})
        other = _as_tpoly(other)
        if other is NotImplemented:
            return NotImplemented
        out: dict[int, Fraction] = {}
        for d1, c1 in self._coeffs.items():
            for d2, c2 in other._coeffs.items():
                out[d1 + d2] = out.get(d1 + d2, 0) + c1 * c2
        return TPoly(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        other = _as_tpoly(other)
        if other is NotImplemented:
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self):
        return hash(tuple(self._coeffs.items()))

    def __repr__(self):
        return f"TPoly({self})"

    def __str__(self):
        if not self._coeffs:
            return "0"
        parts = []
        for d, c in self._coeffs.items():
            if d == 0:
                parts.append(format_rational(c))
                continue
            tpow = "t" if d == 1 else f"t^{d}"
            if c == 1:
                parts.append(tpow)
            elif c == -1:
                parts.append("-" + tpow)
            elif c.denominator == 1:
                parts.append(f"{c.numerator}{tpow}")
            else:
                parts.append(f"({format_rational(c)}){tpow}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self) -> list[dict]:
        return [{"t_power": d, "value": format_rational(c)} for d, c in self._coeffs.items()]

    @classmethod
    def from_json(cls, items: Iterable[Mapping]) -> "TPoly":
        out: dict[int, Fraction] = {}
        for item in items:
            d = int(item["t_power"])
            out[d] = out.get(d, 0) + parse_rational(item["value"])
        return cls(out)


def _as_tpoly(x):
    if isinstance(x, TPoly):
        return x
    if isinstance(x, (int, Fraction)):
        return TPoly.const(x)
    return NotImplemented


ZERO = TPoly()
ONE = TPoly.const(1)
T = TPoly.monomial(1, 1)


class RationalMatrix:
    """
    Square matrix of Fractions whose rows and columns are indexed by labels.

    Labels are node identifiers (usually the sorted members of a node set);
    entries are looked up with ``M[i, j]`` by label, while ``M.rows`` gives
    positional access.
    """

    __slots__ = ("labels", "rows", "_pos")

    def __init__(self, rows: Sequence[Sequence], labels: Sequence[int] | None = None):
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("matrix must be square")
        self.rows = tuple(tuple(to_fraction(x) for x in r) for r in rows)
        self.labels = tuple(labels) if labels is not None else tuple(range(1, n + 1))
        if len(self.labels) != n:
            raise ValueError("label count does not match matrix size")
        self._pos = {lab: p for p, lab in enumerate(self.labels)}

    @classmethod
    def identity(cls, labels: Sequence[int]) -> "RationalMatrix":
        n = len(labels)
        return cls([[int(a == b) for b in range(n)] for a in range(n)], labels)

    @property
    def size(self) -> int:
        return len(self.rows)

    def position(self, label: int) -> int:
        return self._pos[label]

    def __getitem__(self, key):
        i, j = key
        return self.rows[self._pos[i]][self._pos[j]]

    def row(self, label: int) -> tuple[Fraction, ...]:
        return self.rows[self._pos[label]]

    def column(self, label: int) -> tuple[Fraction, ...]:
        p = self._pos[label]
        return tuple(r[p] for r in self.rows)

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.labels != other.labels:
            raise ValueError("label mismatch in matrix product")
        cols = list(zip(*other.rows))
        return RationalMatrix(
            [[sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in cols] for r in self.rows],
            self.labels,
        )

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.labels != other.labels:
            raise ValueError("label mismatch in matrix sum")
        return RationalMatrix(
            [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.labels
        )

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        return self + other.scale(-1)

    def scale(self, x) -> "RationalMatrix":
        x = to_fraction(x)
        return RationalMatrix([[x * a for a in r] for r in self.rows], self.labels)

    def is_identity(self) -> bool:
        return all(v == (p == q) for p, r in enumerate(self.rows) for q, v in enumerate(r))

    def to_lists(self) -> list[list[Fraction]]:
        return [list(r) for r in self.rows]

    def __eq__(self, other):
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self.labels == other.labels and self.rows == other.rows

    def __hash__(self):
        return hash((self.labels, self.rows))

    def __repr__(self):
        body = ", ".join("[" + ", ".join(format_rational(x) for x in r) + "]" for r in self.rows)
        return f"RationalMatrix([{body}], labels={list(self.labels)})"


def bareiss_det(rows: Sequence[Sequence[int]]) -> int:
    """Determinant of an integer matrix by fraction-free elimination."""
    a = [list(map(int, r)) for r in rows]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        piv = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                # exact by Sylvester's identity
                row_i[j] = (piv * row_i[j] - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = piv
    return sign * a[n - 1][n - 1]


def _integer_scaled(m: RationalMatrix) -> tuple[list[list[int]], int]:
    scale = 1
    for r in m.rows:
        for x in r:
            scale = lcm(scale, x.denominator)
    return [[int(x * scale) for x in r] for r in m.rows], scale


def bareiss_inverse(m: RationalMatrix | Sequence[Sequence]) -> RationalMatrix:
    """
    Exact inverse via fraction-free Gauss-Jordan elimination.

    The rational input is first scaled to an integer matrix ``N = L * M``;
    elimination on ``[N | I]`` keeps every intermediate entry an integer and
    ends with ``d * I`` on the left, so ``M^{-1} = L * right / d``.
    """
    if not isinstance(m, RationalMatrix):
        m = RationalMatrix(m)
    n = m.size
    if n == 0:
        return m
    ints, scale = _integer_scaled(m)
    aug = [row + [int(i == j) for j in range(n)] for i, row in enumerate(ints)]
    width = 2 * n
    prev = 1
    for k in range(n):
        if aug[k][k] == 0:
            for r in range(k + 1, n):
                if aug[r][k] != 0:
                    aug[k], aug[r] = aug[r], aug[k]
                    break
            else:
                raise SingularMatrixError("matrix is singular")
        piv = aug[k][k]
        row_k = aug[k]
        for i in range(n):
            if i == k:
                continue
            row_i = aug[i]
            aik = row_i[k]
            for j in range(width):
                if j != k:
                    row_i[j] = (piv * row_i[j] - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = piv
    d = prev
    inv = [[Fraction(aug[i][n + j] * scale, d) for j in range(n)] for i in range(n)]
    return RationalMatrix(inv, m.labels)


def rank_one_update_inverse(
    ainv: RationalMatrix, u: Sequence, v: Sequence
) -> RationalMatrix:
    """
    Inverse of ``A - u v`` given ``A^{-1}``, for a column ``u`` and a row ``v``.

    ``(A - uv)^{-1} = A^{-1} + A^{-1} u v A^{-1} / (1 - v A^{-1} u)``.
    ``u`` and ``v`` are positional sequences aligned with ``ainv.labels``.
    """
    n = ainv.size
    u = [to_fraction(x) for x in u]
    v = [to_fraction(x) for x in v]
    if len(u) != n or len(v) != n:
        raise ValueError("update vectors do not match matrix size")
    rows = ainv.rows
    ainv_u = [sum((rows[i][k] * u[k] for k in range(n)), Fraction(0)) for i in range(n)]
    v_ainv = [sum((v[k] * rows[k][j] for k in range(n)), Fraction(0)) for j in range(n)]
    denom = 1 - sum((v[k] * ainv_u[k] for k in range(n)), Fraction(0))
    if denom == 0:
        raise SingularMatrixError("rank-one update makes the matrix singular")
    out = [[rows[i][j] + ainv_u[i] * v_ainv[j] / denom for j in range(n)] for i in range(n)]
    return RationalMatrix(out, ainv.labels)
