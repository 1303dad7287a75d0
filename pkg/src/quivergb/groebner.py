"""Direct Groebner verification: S-pair checks, initial ideals, membership,
and a textbook completion oracle for cross-validation."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .poly import (
    DomainError, leading_term, mono_divides, mono_gcd_is_one,
    mono_is_squarefree, poly_scale, reduce, render, s_polynomial,
)


@dataclass
class CheckReport:
    total_pairs: int = 0
    skipped_coprime: int = 0
    reduced_to_zero: int = 0
    failures: list = field(default_factory=list)  # (i, j, remainder)
    complete: bool = True  # False when fail-fast stopped early

    @property
    def is_groebner(self):
        return not self.failures

    def render(self, ord=None, namer=None, machine=False):
        lines = [
            f"pairs: {self.total_pairs}  coprime-skipped: {self.skipped_coprime}  "
            f"reduced-to-zero: {self.reduced_to_zero}  failures: {len(self.failures)}",
            "verdict: " + ("GROEBNER" if self.is_groebner else "NOT A GROEBNER BASIS"),
        ]
        if machine and ord is not None and namer is not None:
            for i, j, rem in self.failures:
                lines.append(f"pair {i} {j} FAIL {render(rem, ord, namer)}")
        return "\n".join(lines)


def _check_pair(G, ord, i, j, coprime_skip):
    _, mi = leading_term(G[i], ord)
    _, mj = leading_term(G[j], ord)
    if coprime_skip and mono_gcd_is_one(mi, mj):
        return (i, j, "skip", None)
    rem, _ = reduce(s_polynomial(G[i], G[j], ord), G, ord)
    if rem.is_zero():
        return (i, j, "zero", None)
    return (i, j, "fail", rem)


def buchberger_check(G, ord, *, coprime_skip=True, fail_fast=False, threads=1):
    """Reduce every S-pair of G by G; report aggregated in pair-index order."""
    pairs = [(i, j) for i in range(len(G)) for j in range(i + 1, len(G))]
    report = CheckReport(total_pairs=len(pairs))

    def work(pair):
        return _check_pair(G, ord, pair[0], pair[1], coprime_skip)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = pool.map(work, pairs)
            results = _consume(results, report, fail_fast)
    else:
        results = _consume(map(work, pairs), report, fail_fast)
    return report


def _consume(results, report, fail_fast):
    for i, j, kind, rem in results:
        if kind == "skip":
            report.skipped_coprime += 1
        elif kind == "zero":
            report.reduced_to_zero += 1
        else:
            report.failures.append((i, j, rem))
            if fail_fast:
                report.complete = False
                break
    return report


def initial_ideal_gens(G, ord):
    """Minimal (divisibility-reduced, deduplicated) set of leading monomials."""
    lms = []
    for g in G:
        _, m = leading_term(g, ord)
        if m not in lms:
            lms.append(m)
    out = []
    for m in lms:
        if any(other != m and mono_divides(other, m) for other in lms):
            continue
        out.append(m)
    return out


def is_squarefree(monos):
    return all(mono_is_squarefree(m) for m in monos)


def ideal_membership(f, G, ord, report=None):
    """True iff f reduces to zero; requires a passing CheckReport for G."""
    if report is None:
        report = buchberger_check(G, ord)
    if not report.is_groebner:
        raise DomainError("generator set is not a verified Groebner basis")
    rem, _ = reduce(f, G, ord)
    return rem.is_zero()


def buchberger_complete(F, ord):
    """Textbook Buchberger with coprime-skip; deterministic insertion-order queue."""
    basis = []
    for f in F:
        if f.is_zero():
            raise DomainError("zero polynomial in input")
        basis.append(_monic(f, ord))
    queue = [(i, j) for i in range(len(basis)) for j in range(i + 1, len(basis))]
    head = 0
    while head < len(queue):
        i, j = queue[head]
        head += 1
        _, mi = leading_term(basis[i], ord)
        _, mj = leading_term(basis[j], ord)
        if mono_gcd_is_one(mi, mj):
            continue
        rem, _ = reduce(s_polynomial(basis[i], basis[j], ord), basis, ord)
        if rem.is_zero():
            continue
        basis.append(_monic(rem, ord))
        new = len(basis) - 1
        queue.extend((k, new) for k in range(new))
    return basis


def _monic(f, ord):
    c, _ = leading_term(f, ord)
    return poly_scale(f, (c ** -1, ()))
