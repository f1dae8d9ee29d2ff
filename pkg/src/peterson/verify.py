"""
Oracle and property suites, runnable from the CLI (``peterson verify``).

Each suite returns a :class:`SuiteResult` holding how many cases were checked
and a (truncated) list of counterexamples.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from typing import Callable

from .basis import PETERSON as PETERSON_BASIS, BasisTaggedExpansion, monomial_to_peterson, peterson_to_monomial
from .errors import UnsupportedError
from .exact import RationalMatrix, TPoly, bareiss_inverse, rank_one_update_inverse
from .eulerian import diagram_automorphisms, permute_composition, volume_polynomial
from .operators import (
    b_hat,
    chain_apply,
    closed_form_entry,
    generator_matrix,
    is_nonzero,
    structure_constants_c,
)
from .oracles import lusztig_tits_entry, neumann_entry, numeric_convergence_check, oracle_multiply
from .rootsys import CartanMatrix, all_subsets, format_subset, rootsystem

MAX_FAILURES = 20
MAX_PAIR_RANK = 8


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    failures: list = field(default_factory=list)
    failure_count: int = 0

    @property
    def ok(self) -> bool:
        return self.failure_count == 0

    def check(self, cond: bool, describe: Callable[[], str]):
        self.checked += 1
        if not cond:
            self.failure_count += 1
            if len(self.failures) < MAX_FAILURES:
                self.failures.append(describe())

    def to_json(self) -> dict:
        return {"suite": self.name, "ok": self.ok, "checked": self.checked,
                "failure_count": self.failure_count, "failures": list(self.failures)}

    def summary(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return f"{status} {self.name}: {self.checked} checks, {self.failure_count} failures"


def _fmt(terms) -> str:
    return "{" + ", ".join(f"{format_subset(k)}: {v}" for k, v in terms.items()) + "}"


def _pair_guard(c: CartanMatrix):
    if c.n > MAX_PAIR_RANK:
        raise UnsupportedError(f"exhaustive pair suites are capped at rank {MAX_PAIR_RANK}")


def suite_oracle(c: CartanMatrix, **_) -> SuiteResult:
    res = SuiteResult("oracle")
    for i in c.nodes:
        gen = generator_matrix(c, i, True)
        for j in all_subsets(c.n):
            got, want = gen.row(j), oracle_multiply(c, i, j)
            res.check(got == want, lambda: f"i={i} J={format_subset(j)}: generator {_fmt(got)} != oracle {_fmt(want)}")
    return res


def suite_closed_form(c: CartanMatrix, **_) -> SuiteResult:
    res = SuiteResult("closed-form")
    for k in all_subsets(c.n):
        for s in k:
            for i in k:
                if i == s:
                    continue
                a, b = closed_form_entry(c, k, i, s), neumann_entry(c, k, i, s)
                res.check(a == b, lambda: f"K={format_subset(k)} i={i} s={s}: closed {a} != neumann {b}")
    return res


def sherman_morrison_instance(c: CartanMatrix, k, s) -> tuple[RationalMatrix, RationalMatrix]:
    """``(E - B_K^s)^{-1}`` by the rank-one update of ``(C_K/2)^{-1}`` and directly."""
    k = frozenset(k)
    labels = sorted(k)
    ainv = rootsystem(c).inverse(k).scale(2)
    u = [int(a == s) for a in labels]
    v = [Fraction(c[s, b], 2) - int(b == s) for b in labels]
    updated = rank_one_update_inverse(ainv, u, v)
    b = b_hat(c, k, s)
    direct = bareiss_inverse(RationalMatrix.identity(labels) - b)
    return updated, direct


def suite_sherman_morrison(c: CartanMatrix, **_) -> SuiteResult:
    res = SuiteResult("sherman-morrison")
    for k in all_subsets(c.n):
        for s in k:
            upd, direct = sherman_morrison_instance(c, k, s)
            res.check(upd == direct, lambda: f"K={format_subset(k)} s={s}: update {upd} != direct {direct}")
    return res


def suite_convergence(c: CartanMatrix, truncation: int = 200, tolerance: float = 1e-9, **_) -> SuiteResult:
    res = SuiteResult("convergence")
    for k in all_subsets(c.n):
        for s in sorted(k):
            rep = numeric_convergence_check(c, k, s, truncation, tolerance)
            res.check(rep.ok, lambda: f"K={format_subset(k)} s={s}: " + "; ".join(rep.failures))
    return res


def suite_commutativity(c: CartanMatrix, **_) -> SuiteResult:
    _pair_guard(c)
    res = SuiteResult("commutativity")
    subs = all_subsets(c.n)
    for eq in (True, False):
        for a, i in enumerate(subs):
            for j in subs[a:]:
                x = structure_constants_c(c, i, j, eq).terms
                y = structure_constants_c(c, j, i, eq).terms
                res.check(x == y, lambda: f"I={format_subset(i)} J={format_subset(j)} eq={eq}: {_fmt(x)} != {_fmt(y)}")
    return res


def suite_positivity(c: CartanMatrix, **_) -> SuiteResult:
    """Nonnegativity of every d and c coefficient, and integrality/grading of c."""
    _pair_guard(c)
    res = SuiteResult("positivity")
    subs = all_subsets(c.n)
    for i in subs:
        for j in subs:
            d = chain_apply(c, i, j, True)
            cc = structure_constants_c(c, i, j, True)
            for k, v in d.terms.items():
                res.check(all(x >= 0 for x in v.coeffs.values()),
                          lambda: f"d_{{{format_subset(i)},{format_subset(j)}}}^{format_subset(k)} = {v} has a negative coefficient")
            for k, v in cc.terms.items():
                deg = len(i) + len(j) - len(k)
                ok = v.degrees() == [deg] and v.coefficient(deg) > 0 and v.coefficient(deg).denominator == 1
                res.check(ok, lambda: f"c_{{{format_subset(i)},{format_subset(j)}}}^{format_subset(k)} = {v} is not a positive integer times t^{deg}")
    return res


def suite_nonzero(c: CartanMatrix, **_) -> SuiteResult:
    _pair_guard(c)
    res = SuiteResult("nonzero")
    subs = all_subsets(c.n)
    for eq in (True, False):
        for i in subs:
            for j in subs:
                terms = chain_apply(c, i, j, eq).terms
                for k in subs:
                    crit = is_nonzero(c, i, j, k, eq)
                    res.check(crit == (k in terms),
                              lambda: f"I={format_subset(i)} J={format_subset(j)} K={format_subset(k)} eq={eq}: criterion {crit}, computed {k in terms}")
    return res


def suite_at_zero(c: CartanMatrix, **_) -> SuiteResult:
    _pair_guard(c)
    res = SuiteResult("at-zero")
    subs = all_subsets(c.n)
    for i in subs:
        for j in subs:
            eq = chain_apply(c, i, j, True).at_zero()
            ne = {k: v.at_zero() for k, v in chain_apply(c, i, j, False).terms.items()}
            res.check(eq == ne, lambda: f"I={format_subset(i)} J={format_subset(j)}: t=0 of equivariant {eq} != non-equivariant {ne}")
    return res


def suite_ordering(c: CartanMatrix, **_) -> SuiteResult:
    _pair_guard(c)
    res = SuiteResult("ordering")
    subs = all_subsets(c.n)
    for i in subs:
        if len(i) > 3:
            continue
        for j in subs:
            base = chain_apply(c, i, j, True).terms
            for perm in permutations(sorted(i)):
                other = chain_apply(c, i, j, True, order=perm).terms
                res.check(other == base, lambda: f"I order {perm} J={format_subset(j)}: {_fmt(other)} != {_fmt(base)}")
    return res


def double_expansions(c: CartanMatrix, i, j, l, equivariant: bool = True) -> tuple[dict, dict]:
    """``(p_I p_J) p_L`` and ``p_I (p_J p_L)`` expanded in the Peterson basis."""
    left: dict = {}
    for m, cm in structure_constants_c(c, i, j, equivariant).terms.items():
        for k, ck in structure_constants_c(c, m, l, equivariant).terms.items():
            left[k] = left.get(k, TPoly()) + cm * ck
    right: dict = {}
    for m, cm in structure_constants_c(c, j, l, equivariant).terms.items():
        for k, ck in structure_constants_c(c, i, m, equivariant).terms.items():
            right[k] = right.get(k, TPoly()) + cm * ck
    return {k: v for k, v in left.items() if v}, {k: v for k, v in right.items() if v}


def suite_associativity(c: CartanMatrix, samples: int = 100, seed: int = 0, **_) -> SuiteResult:
    res = SuiteResult("associativity")
    rng = random.Random(seed)
    nodes = list(c.nodes)

    def pick():
        return frozenset(x for x in nodes if rng.random() < 0.5)

    for _ in range(samples):
        i, j, l = pick(), pick(), pick()
        a, b = double_expansions(c, i, j, l)
        res.check(a == b, lambda: f"I={format_subset(i)} J={format_subset(j)} L={format_subset(l)}: {_fmt(a)} != {_fmt(b)}")
    return res


def suite_lusztig_tits(c: CartanMatrix, **_) -> SuiteResult:
    res = SuiteResult("lusztig-tits")
    rs = rootsystem(c)
    for k in all_subsets(c.n):
        if not k or not rs.is_connected(k):
            continue
        if any(c[a, b] not in (0, -1) for a in k for b in k if a != b):
            continue
        inv = rs.inverse(k)
        for i in k:
            for j in k:
                got = lusztig_tits_entry(c, k, i, j)
                res.check(got == inv[i, j], lambda: f"K={format_subset(k)} ({i},{j}): det ratio {got} != inverse {inv[i, j]}")
    return res


def suite_rootsys(c: CartanMatrix, **_) -> SuiteResult:
    res = SuiteResult("rootsys")
    rs = rootsystem(c)
    for k in all_subsets(c.n):
        comps = rs.components(k)
        d = 1
        w = 1
        for comp in comps:
            d *= rs.det(comp)
            w *= rs.weyl_order(comp)
            h = rs.coxeter_number(comp)
            heights = [sum(r) for r in rs.positive_roots(comp)]
            res.check(h == max(heights) + 1, lambda: f"{format_subset(comp)}: h={h}, max height={max(heights)}")
        res.check(rs.det(k) == d, lambda: f"det({format_subset(k)}) not multiplicative over components")
        res.check(rs.weyl_order(k) == w, lambda: f"|W_{format_subset(k)}| not multiplicative over components")
        if not k:
            continue
        inv = rs.inverse(k)
        comp_of = {x: comp for comp in comps for x in comp}
        for a in k:
            for b in k:
                v = inv[a, b]
                same = comp_of[a] == comp_of[b]
                res.check(v >= 0 and (v != 0) == same, lambda: f"inverse({format_subset(k)})[{a},{b}] = {v} breaks the sign/support pattern")
                res.check((v * rs.det(k)).denominator == 1, lambda: f"det * inverse({format_subset(k)})[{a},{b}] is not an integer")
    return res


def suite_basis(c: CartanMatrix, samples: int = 100, seed: int = 0, **_) -> SuiteResult:
    res = SuiteResult("basis")
    rng = random.Random(seed)
    subs = all_subsets(c.n)
    for _ in range(samples):
        terms = {rng.choice(subs): TPoly({rng.randrange(3): rng.randrange(1, 20)}) for _ in range(rng.randrange(1, 5))}
        e = BasisTaggedExpansion(PETERSON_BASIS, terms)
        back = monomial_to_peterson(c, peterson_to_monomial(c, e))
        res.check(back.terms == e.terms, lambda: f"round trip changed {_fmt(e.terms)} into {_fmt(back.terms)}")
    return res


def suite_eulerian(c: CartanMatrix, **_) -> SuiteResult:
    res = SuiteResult("eulerian")
    if not rootsystem(c).is_connected(c.nodes):
        raise UnsupportedError("eulerian suite needs an irreducible root system")
    vol = volume_polynomial(c)
    autos = diagram_automorphisms(c)
    for comp, a in vol.coefficients.items():
        for sigma in autos:
            other = vol.coefficients[permute_composition(comp, sigma)]
            res.check(other == a, lambda: f"A_{comp} = {a} but A under {sigma} = {other}")
    return res


SUITES = {
    "rootsys": suite_rootsys,
    "oracle": suite_oracle,
    "closed-form": suite_closed_form,
    "sherman-morrison": suite_sherman_morrison,
    "convergence": suite_convergence,
    "commutativity": suite_commutativity,
    "positivity": suite_positivity,
    "nonzero": suite_nonzero,
    "at-zero": suite_at_zero,
    "ordering": suite_ordering,
    "associativity": suite_associativity,
    "lusztig-tits": suite_lusztig_tits,
    "basis": suite_basis,
    "eulerian": suite_eulerian,
}


def run_suites(c: CartanMatrix, names, **options) -> list[SuiteResult]:
    """Run the named suites (``"all"`` expands to every applicable one)."""
    names = list(names)
    if names == ["all"]:
        names = [n for n in SUITES if n != "eulerian" or rootsystem(c).is_connected(c.nodes)]
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise ValueError(f"unknown suite(s) {unknown}; choose from {sorted(SUITES)} or 'all'")
    return [SUITES[n](c, **options) for n in names]
