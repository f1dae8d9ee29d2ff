"""
Command-line front end.

    peterson cartan   --type B3
    peterson sc       --type B3 --I 2 --J 1,2 --basis peterson
    peterson table    --type B3 --i 2 --format latex
    peterson eulerian --type A8 --c 1,0,2,3,0,0,1,1
    peterson volume   --type A3 --format csv
    peterson verify   --type B3 --suite oracle

Exit codes: 0 success, 2 invalid input, 3 unsupported request, 4 internal
invariant violation (including a failed ``verify`` suite).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

from . import formats
from .cache import DiskCache
from .errors import CartanError, InvariantError, UnsupportedError
from .eulerian import CompositionError, mixed_eulerian_result, volume_polynomial, w_over_det
from .exact import format_rational
from .formats import dumps
from .operators import chain_apply, generator_matrix, to_peterson_level
from .rootsys import (
    CartanMatrix,
    all_subsets,
    build_cartan,
    format_subset,
    graded_lex_key,
    load_cartan_document,
    parse_subset,
    rootsystem,
)
from .verify import run_suites

EXIT_OK, EXIT_INPUT, EXIT_UNSUPPORTED, EXIT_INTERNAL = 0, 2, 3, 4
MAX_TABLE_RANK = 14



class InputError(ValueError):
    pass


def _load_cartan(args) -> CartanMatrix:
    if bool(args.type) == bool(args.file):
        raise InputError("give exactly one of --type or --file")
    if args.type:
        return build_cartan(args.type)
    try:
        doc = json.loads(Path(args.file).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {args.file}: {exc}") from None
    except ValueError as exc:
        raise InputError(f"{args.file} is not valid JSON: {exc}") from None
    return load_cartan_document(doc)


def _nodes(c: CartanMatrix, text: str | None):
    try:
        s = parse_subset(text or "")
    except ValueError:
        raise InputError(f"cannot parse node list {text!r}") from None
    return c.check_nodes(s)


def _emit(args, text: str):
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _spec_label(args) -> str:
    return args.type if args.type else str(args.file)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_cartan(args, c: CartanMatrix) -> int:
    rs = rootsystem(c)
    full = frozenset(c.nodes)
    comps = rs.components(full)
    inv = rs.inverse(full)
    comp_info = [{
        "nodes": sorted(k),
        "det": rs.det(k),
        "exponents": rs.exponents(k),
        "coxeter_number": rs.coxeter_number(k),
        "positive_roots": len(rs.positive_roots(k)),
        "weyl_order": rs.weyl_order(k),
    } for k in comps]
    if args.format == "json":
        doc = {
            "spec": _spec_label(args),
            "rank": c.n,
            "cartan": c.to_lists(),
            "det": rs.det(full),
            "inverse": [[format_rational(x) for x in r] for r in inv.rows],
            "weyl_order": rs.weyl_order(full),
            "w_over_det": format_rational(Fraction(rs.weyl_order(full), rs.det(full))),
            "components": comp_info,
        }
        _emit(args, dumps(doc))
    elif args.format == "csv":
        _emit(args, formats.csv_text(["row", "col", "value"],
                                     [[i, j, c[i, j]] for i in c.nodes for j in c.nodes]))
    elif args.format == "latex":
        body = " \\\\\n".join("  " + " & ".join(str(x) for x in r) for r in c.entries)
        _emit(args, "\\begin{pmatrix}\n" + body + "\n\\end{pmatrix}\n")
    else:
        lines = [f"Cartan matrix ({_spec_label(args)}, rank {c.n}):", formats.pretty_matrix(c.to_lists()),
                 f"det = {rs.det(full)}", "inverse =", formats.pretty_matrix(inv.to_lists()),
                 f"|W| = {rs.weyl_order(full)}",
                 f"|W|/det = {format_rational(Fraction(rs.weyl_order(full), rs.det(full)))}",
                 "components:"]
        for info in comp_info:
            lines.append(f"  {format_subset(info['nodes'])}: det {info['det']}, exponents {info['exponents']}, "
                         f"h = {info['coxeter_number']}, |W| = {info['weyl_order']}")
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_sc(args, c: CartanMatrix) -> int:
    i_set, j_set = _nodes(c, args.I), _nodes(c, args.J)
    equivariant = not args.at_zero
    order = [int(x) for x in parse_subset_list(args.order)] if args.order else None
    d = chain_apply(c, i_set, j_set, equivariant, order=order)
    result = to_peterson_level(c, d) if args.basis == "peterson" else d
    terms = result.terms
    if args.format == "json":
        doc = {
            "spec": _spec_label(args),
            "i": sorted(i_set),
            "j": sorted(j_set),
            "basis": args.basis,
            "equivariant": equivariant,
            "terms": formats.poly_terms_json(terms),
            "display": formats.poly_display(terms),
        }
        _emit(args, dumps(doc))
    elif args.format == "csv":
        rows = []
        for k, v in terms.items():
            rows.extend(formats.poly_csv_rows([format_subset(k)], v))
        _emit(args, formats.csv_text(["k_subset", "t_power", "value"], rows))
    elif args.format == "latex":
        sym = "p" if args.basis == "peterson" else "\\varpi"
        rhs = " + ".join(f"{formats.latex_poly(v)}\\,{sym}_{{{formats.latex_subset(k)}}}" for k, v in terms.items()) or "0"
        _emit(args, f"{sym}_{{{formats.latex_subset(i_set)}}} \\cdot {sym}_{{{formats.latex_subset(j_set)}}} = {rhs}\n")
    else:
        head = f"{'p' if args.basis == 'peterson' else 'w'}_{format_subset(i_set)} * {'p' if args.basis == 'peterson' else 'w'}_{format_subset(j_set)}"
        lines = [head + (" (t=0)" if args.at_zero else "") + ":"]
        lines += [f"  {format_subset(k)}: {v}" for k, v in terms.items()] or ["  0"]
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def parse_subset_list(text: str) -> list[int]:
    body = text.strip().strip("{}[]() ")
    return [int(tok) for tok in body.replace(" ", ",").split(",") if tok]


def cmd_table(args, c: CartanMatrix) -> int:
    if c.n > MAX_TABLE_RANK:
        raise UnsupportedError(f"full tables are limited to rank {MAX_TABLE_RANK}")
    if args.i not in c.nodes:
        raise InputError(f"--i must be a node in 1..{c.n}")
    equivariant = not args.at_zero
    gen = generator_matrix(c, args.i, equivariant)
    order = all_subsets(c.n)
    rows = dict(gen.rows())
    if args.format == "json":
        doc = {
            "spec": _spec_label(args),
            "i": args.i,
            "equivariant": equivariant,
            "order": [sorted(s) for s in order],
            "rows": formats.subset_matrix_json(order, rows),
        }
        _emit(args, dumps(doc))
    elif args.format == "csv":
        _emit(args, formats.subset_matrix_csv(order, rows))
    elif args.format == "latex":
        _emit(args, formats.subset_matrix_latex(order, rows))
    else:
        lines = [f"generator matrix of node {args.i} ({'equivariant' if equivariant else 't=0'}), {len(order)} x {len(order)}:"]
        for j in order:
            entries = ", ".join(f"{format_subset(k)}: {v}" for k, v in sorted(rows[j].items(), key=lambda kv: graded_lex_key(kv[0])))
            lines.append(f"  {format_subset(j)} -> {entries or '0'}")
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def _composition(text: str):
    try:
        return [int(tok) for tok in text.replace(" ", "").split(",") if tok != ""]
    except ValueError:
        raise InputError(f"cannot parse composition {text!r}") from None


def cmd_eulerian(args, c: CartanMatrix) -> int:
    res = mixed_eulerian_result(c, _composition(args.c))
    if args.format == "json":
        _emit(args, dumps({
            "spec": _spec_label(args),
            "composition": list(res.composition),
            "value": str(res.value),
            "w_over_det": str(res.w_over_det),
            "chain_entry": format_rational(res.chain_entry),
        }))
    elif args.format == "csv":
        _emit(args, formats.csv_text(["composition", "value", "w_over_det", "chain_entry"],
                                     [[",".join(map(str, res.composition)), res.value, res.w_over_det,
                                       format_rational(res.chain_entry)]]))
    else:
        _emit(args, f"{res.value}\n" if not args.verbose else
              f"A_{res.composition} = {res.w_over_det} * {format_rational(res.chain_entry)} = {res.value}\n")
    return EXIT_OK


def cmd_volume(args, c: CartanMatrix) -> int:
    vol = volume_polynomial(c)
    n = c.n
    if args.at:
        u = [Fraction(x) for x in args.at.split(",")]
        value = vol.evaluate(u)
    else:
        value = None
    if args.format == "json":
        doc = {
            "spec": _spec_label(args),
            "w_over_det": str(w_over_det(c)),
            "coefficients": [{"composition": list(k), "value": str(v)} for k, v in vol.coefficients.items()],
        }
        if value is not None:
            doc["evaluated_at"] = [format_rational(x) for x in u]
            doc["volume"] = format_rational(value)
        _emit(args, dumps(doc))
    elif args.format == "csv":
        _emit(args, formats.csv_text([f"c_{k}" for k in range(1, n + 1)] + ["value"],
                                     [list(k) + [v] for k, v in vol.coefficients.items()]))
    elif args.format == "latex":
        cols = " & ".join(f"c_{{{k}}}" for k in range(1, n + 1))
        body = "\n".join("  " + " & ".join(map(str, k)) + f" & {v} \\\\" for k, v in vol.coefficients.items())
        _emit(args, "\\begin{tabular}{" + "c" * n + "|r}\n  " + cols + " & A_c \\\\ \\hline\n" + body + "\n\\end{tabular}\n")
    else:
        lines = [f"{k}: {v}" for k, v in vol.coefficients.items()]
        if value is not None:
            lines.append(f"V({', '.join(format_rational(x) for x in u)}) = {format_rational(value)}")
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_verify(args, c: CartanMatrix) -> int:
    results = run_suites(c, [s.strip() for s in args.suite.split(",")], samples=args.samples,
                         seed=args.seed, truncation=args.truncation, tolerance=args.tolerance)
    if args.format == "json":
        _emit(args, dumps({"spec": _spec_label(args), "suites": [r.to_json() for r in results]}))
    else:
        lines = []
        for r in results:
            lines.append(r.summary())
            lines.extend(f"    {f}" for f in r.failures)
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK if all(r.ok for r in results) else EXIT_INTERNAL


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="peterson", description="Peterson Schubert calculus structure constants and mixed Eulerian numbers.")
    p.add_argument("--log-level", default="WARNING", help="logging level (DEBUG, INFO, WARNING, ...)")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, fmt_default="pretty", choices=("json", "csv", "latex", "pretty")):
        src = sp.add_argument_group("root system")
        src.add_argument("--type", help="type string such as B3 or A4+G2")
        src.add_argument("--file", help="JSON document with 'components' or 'cartan'")
        sp.add_argument("--format", default=fmt_default, choices=choices)
        sp.add_argument("--output", "-o", help="write to this file instead of stdout")
        sp.add_argument("--cache-dir", help="cache directory (default $PETERSON_CACHE_DIR or ~/.cache/peterson)")
        sp.add_argument("--no-cache", action="store_true", help="do not read or write the on-disk cache")

    sp = sub.add_parser("cartan", help="print the Cartan matrix and derived data")
    common(sp)
    sp.set_defaults(func=cmd_cartan)

    sp = sub.add_parser("sc", help="structure constants of a product")
    common(sp)
    sp.add_argument("--I", default="", help="comma-separated nodes of I")
    sp.add_argument("--J", default="", help="comma-separated nodes of J")
    sp.add_argument("--basis", default="peterson", choices=("monomial", "peterson"))
    sp.add_argument("--at-zero", action="store_true", help="non-equivariant constants (t = 0)")
    sp.add_argument("--order", help="explicit order in which to apply the generators of I")
    sp.set_defaults(func=cmd_sc)

    sp = sub.add_parser("table", help="full generator matrix of one node")
    common(sp)
    sp.add_argument("--i", type=int, required=True, help="node whose generator matrix to print")
    sp.add_argument("--at-zero", action="store_true", help="non-equivariant matrix")
    sp.set_defaults(func=cmd_table)

    sp = sub.add_parser("eulerian", help="one mixed Eulerian number")
    common(sp, choices=("json", "csv", "pretty"))
    sp.add_argument("--c", required=True, help="composition c_1,...,c_n summing to the rank")
    sp.add_argument("--verbose", action="store_true", help="show the prefactor and matrix entry")
    sp.set_defaults(func=cmd_eulerian)

    sp = sub.add_parser("volume", help="all mixed Eulerian numbers (volume polynomial)")
    common(sp)
    sp.add_argument("--at", help="evaluate the volume polynomial at u_1,...,u_n")
    sp.set_defaults(func=cmd_volume)

    sp = sub.add_parser("verify", help="run oracle and property suites")
    common(sp, choices=("json", "pretty"))
    sp.add_argument("--suite", default="all", help="comma-separated suite names, or 'all'")
    sp.add_argument("--samples", type=int, default=100, help="sample count for randomized suites")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--truncation", type=int, default=200)
    sp.add_argument("--tolerance", type=float, default=1e-9)
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=getattr(logging, str(args.log_level).upper(), logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        c = _load_cartan(args)
        cache = None if args.no_cache else DiskCache(args.cache_dir)
        if cache is not None:
            cache.load(rootsystem(c))
        code = args.func(args, c)
        if cache is not None:
            cache.save(rootsystem(c))
        return code
    except CartanError as exc:
        print(f"error: invalid Cartan matrix: {exc}", file=sys.stderr)
        for v in exc.violations:
            print(f"  - {v.kind} at {list(v.indices)}: {v.message}", file=sys.stderr)
        return EXIT_INPUT
    except (InputError, CompositionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except UnsupportedError as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except InvariantError as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
