"""
Serialization of results: canonical JSON, CSV and LaTeX.

All numbers are written as exact strings (``"p/q"``).  JSON objects keep
subsets in graded-lexicographic order and use lowercase keys, so parsing and
re-serializing a document reproduces it byte for byte.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from typing import Iterable, Mapping

from .exact import TPoly, format_rational
from .rootsys import NodeSet, format_subset, graded_lex_key


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def poly_terms_json(terms: Mapping[NodeSet, TPoly]) -> dict:
    return {format_subset(k): v.to_json() for k, v in sorted(terms.items(), key=lambda kv: graded_lex_key(kv[0]))}


def poly_display(terms: Mapping[NodeSet, TPoly]) -> dict:
    return {format_subset(k): str(v) for k, v in sorted(terms.items(), key=lambda kv: graded_lex_key(kv[0]))}


def latex_rational(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    sign = "-" if x < 0 else ""
    return f"{sign}\\frac{{{abs(x.numerator)}}}{{{x.denominator}}}"


def latex_poly(p: TPoly) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for d, c in p.coeffs.items():
        tpow = "" if d == 0 else ("t" if d == 1 else f"t^{{{d}}}")
        if d and c == 1:
            parts.append(tpow)
        else:
            parts.append(latex_rational(c) + tpow)
    return " + ".join(parts)


def latex_subset(s: Iterable[int]) -> str:
    members = sorted(s)
    if not members:
        return "\\emptyset"
    return "\\{" + ",".join(map(str, members)) + "\\}"


def csv_text(header: list[str], rows: Iterable[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


def poly_csv_rows(prefix: list, p: TPoly) -> list[list]:
    return [prefix + [d, format_rational(c)] for d, c in p.coeffs.items()]


def subset_matrix_json(order: list[NodeSet], rows: Mapping[NodeSet, Mapping[NodeSet, TPoly]]) -> list:
    out = []
    for j in order:
        r = rows.get(j, {})
        out.append({
            "row": sorted(j),
            "entries": [{"col": sorted(k), "value": r[k].to_json()} for k in sorted(r, key=graded_lex_key)],
        })
    return out


def subset_matrix_csv(order: list[NodeSet], rows) -> str:
    lines = []
    for j in order:
        r = rows.get(j, {})
        for k in sorted(r, key=graded_lex_key):
            lines.extend(poly_csv_rows([format_subset(j), format_subset(k)], r[k]))
    return csv_text(["row_subset", "col_subset", "t_power", "value"], lines)


def subset_matrix_latex(order: list[NodeSet], rows) -> str:
    """Dense ``pmatrix`` with a column of row labels, rows and columns in graded-lex order."""
    body = []
    for j in order:
        r = rows.get(j, {})
        body.append("  " + " & ".join(latex_poly(r[k]) if k in r else "0" for k in order) + " \\\\")
    labels = " \\\\ ".join(latex_subset(j) for j in order)
    return "\n".join([
        "\\[",
        "\\begin{array}{cc}",
        "\\begin{pmatrix}",
        *body,
        "\\end{pmatrix}",
        "&",
        "\\begin{array}{c}",
        "  " + labels,
        "\\end{array}",
        "\\end{array}",
        "\\]",
        "",
    ])


def pretty_matrix(rows: list[list], width: int | None = None) -> str:
    cells = [[format_rational(x) if isinstance(x, Fraction) else str(x) for x in r] for r in rows]
    if not cells:
        return "[]"
    w = width or max(len(x) for r in cells for x in r)
    return "\n".join("[" + " ".join(x.rjust(w) for x in r) + "]" for r in cells)
