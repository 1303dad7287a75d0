"""Sparse multivariate polynomials over exact coefficients.

Monomials are sorted tuples of (variable id, exponent) pairs; variable ids
are plain nonnegative integers handed out by a layout or tensor space.
Orders are ranked lexicographic: an OrderSpec assigns each variable a rank,
rank 0 being the largest variable, and monomials compare by the exponent
vector read in rank order.
"""

from __future__ import annotations

from fractions import Fraction


class InputError(ValueError):
    """Bad user-supplied input (files, indices, flags)."""


class DomainError(ValueError):
    """Operation applied outside its mathematical domain."""


# ---------------------------------------------------------------------------
# coefficient fields

class Rationals:
    """Arbitrary-precision rational coefficients (the default)."""

    char = 0

    def of(self, n):
        return Fraction(n)

    def __repr__(self):
        return "QQ"


class GFElement:
    __slots__ = ("val", "p")

    def __init__(self, val, p):
        self.val = val % p
        self.p = p

    def _lift(self, other):
        if isinstance(other, GFElement):
            if other.p != self.p:
                raise DomainError("mixed prime fields")
            return other
        if isinstance(other, int):
            return GFElement(other, self.p)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return GFElement(self.val + other.val, self.p)

    __radd__ = __add__

    def __neg__(self):
        return GFElement(-self.val, self.p)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return GFElement(self.val - other.val, self.p)

    def __rsub__(self, other):
        return -self + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return GFElement(self.val * other.val, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other ** -1

    def __pow__(self, n):
        if n < 0:
            if self.val == 0:
                raise ZeroDivisionError("inverse of 0 in GF(p)")
            return GFElement(pow(self.val, n, self.p), self.p)
        return GFElement(pow(self.val, n, self.p), self.p)

    def __bool__(self):
        return self.val != 0

    def __eq__(self, other):
        if isinstance(other, GFElement):
            return self.p == other.p and self.val == other.val
        if isinstance(other, int):
            return self.val == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.val, self.p))

    def __repr__(self):
        return f"{self.val} mod {self.p}"


class PrimeField:
    """GF(p) coefficients, p a machine-word prime."""

    def __init__(self, p):
        if p < 2 or any(p % q == 0 for q in range(2, min(p, 1 << 11)) if q * q <= p):
            raise InputError(f"{p} is not prime")
        self.p = p
        self.char = p

    def of(self, n):
        return GFElement(n, self.p)

    def __repr__(self):
        return f"GF({self.p})"


QQ = Rationals()


def coeff_is_negative(c):
    # only used for rendering; GF(p) values render as bare residues
    return isinstance(c, Fraction) and c < 0


# ---------------------------------------------------------------------------
# monomials

MONO_ONE = ()


def mono_from(pairs):
    """Build a monomial from (var, exp) pairs, merging repeats."""
    acc = {}
    for v, e in pairs:
        if e:
            acc[v] = acc.get(v, 0) + e
    return tuple(sorted((v, e) for v, e in acc.items() if e))


def mono_mul(a, b):
    if not a:
        return b
    if not b:
        return a
    acc = dict(a)
    for v, e in b:
        acc[v] = acc.get(v, 0) + e
    return tuple(sorted(acc.items()))


def mono_divides(a, b):
    """True iff a | b."""
    db = dict(b)
    return all(db.get(v, 0) >= e for v, e in a)


def mono_div(a, b):
    """a / b; raises DomainError when b does not divide a."""
    acc = dict(a)
    for v, e in b:
        r = acc.get(v, 0) - e
        if r < 0:
            raise DomainError("monomial division is not exact")
        if r:
            acc[v] = r
        else:
            acc.pop(v, None)
    return tuple(sorted(acc.items()))


def mono_lcm(a, b):
    acc = dict(a)
    for v, e in b:
        if acc.get(v, 0) < e:
            acc[v] = e
    return tuple(sorted(acc.items()))


def mono_gcd_is_one(a, b):
    vb = {v for v, _ in b}
    return all(v not in vb for v, _ in a)


def mono_vars(a):
    return frozenset(v for v, _ in a)


def mono_degree(a):
    return sum(e for _, e in a)


def mono_is_squarefree(a):
    return all(e == 1 for _, e in a)


class OrderSpec:
    """Ranked lexicographic monomial order. rank 0 = largest variable."""

    def __init__(self, rank):
        self.rank = dict(rank)
        n = len(self.rank)
        if sorted(self.rank.values()) != list(range(n)):
            raise InputError("ranks must be a permutation of 0..n-1")
        self.nvars = n

    def rank_of(self, v):
        try:
            return self.rank[v]
        except KeyError:
            raise InputError(f"variable {v} is not ranked by this order") from None

    def key(self, mono):
        """Dense exponent vector in rank order; tuple comparison = lex order."""
        vec = [0] * self.nvars
        for v, e in mono:
            vec[self.rank_of(v)] = e
        return tuple(vec)


def mono_cmp(a, b, ord):
    ka, kb = ord.key(a), ord.key(b)
    if ka < kb:
        return -1
    if ka > kb:
        return 1
    return 0


# ---------------------------------------------------------------------------
# polynomials

class Polynomial:
    """Immutable-by-convention sparse polynomial: dict monomial -> coeff."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = dict(terms) if terms else {}

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None

    def __add__(self, other):
        return poly_add(self, other)

    def __sub__(self, other):
        return poly_sub(self, other)

    def __neg__(self):
        return poly_neg(self)

    def __mul__(self, other):
        return poly_mul(self, other)

    def __repr__(self):
        if not self.terms:
            return "Polynomial(0)"
        return "Polynomial(" + " ".join(f"{c}*{m}" for m, c in self.terms.items()) + ")"


POLY_ZERO = Polynomial()


def poly_from_terms(terms):
    """terms: iterable of (coeff, monomial); merges and drops zeros."""
    acc = {}
    for c, m in terms:
        if m in acc:
            c = acc[m] + c
        if c:
            acc[m] = c
        else:
            acc.pop(m, None)
    return Polynomial(acc)


def poly_const(c):
    return Polynomial({MONO_ONE: c}) if c else Polynomial()


def poly_var(v, field=QQ):
    return Polynomial({((v, 1),): field.of(1)})


def poly_add(f, g):
    acc = dict(f.terms)
    for m, c in g.terms.items():
        if m in acc:
            s = acc[m] + c
            if s:
                acc[m] = s
            else:
                del acc[m]
        else:
            acc[m] = c
    return Polynomial(acc)


def poly_neg(f):
    return Polynomial({m: -c for m, c in f.terms.items()})


def poly_sub(f, g):
    return poly_add(f, poly_neg(g))


def poly_scale(f, term):
    """Multiply by a single term (coeff, monomial)."""
    c, m = term
    if not c:
        return Polynomial()
    return Polynomial({mono_mul(m, fm): c * fc for fm, fc in f.terms.items()})


def poly_mul_var(f, v):
    return Polynomial({mono_mul(m, ((v, 1),)): c for m, c in f.terms.items()})


def poly_mul(f, g):
    if len(f.terms) > len(g.terms):
        f, g = g, f
    acc = {}
    for fm, fc in f.terms.items():
        for gm, gc in g.terms.items():
            m = mono_mul(fm, gm)
            c = fc * gc
            if m in acc:
                c = acc[m] + c
            if c:
                acc[m] = c
            else:
                acc.pop(m, None)
    return Polynomial(acc)


def leading_term(f, ord):
    """(coeff, monomial) of the maximal term; DomainError on 0."""
    if not f.terms:
        raise DomainError("leading term of the zero polynomial")
    m = max(f.terms, key=ord.key)
    return f.terms[m], m


def leading_monomial(f, ord):
    return leading_term(f, ord)[1]


def sorted_terms(f, ord):
    """Terms as (coeff, monomial), strictly decreasing monomials."""
    return [(f.terms[m], m) for m in sorted(f.terms, key=ord.key, reverse=True)]


def s_polynomial(f, g, ord):
    cf, mf = leading_term(f, ord)
    cg, mg = leading_term(g, ord)
    big = mono_lcm(mf, mg)
    left = poly_scale(f, (cf ** -1, mono_div(big, mf)))
    right = poly_scale(g, (cg ** -1, mono_div(big, mg)))
    return poly_sub(left, right)


def reduce(f, G, ord):
    """Multivariate division of f by the list G.

    Returns (remainder, used) with used a list of ((coeff, monomial), index)
    such that f == sum(cofactor * G[index]) + remainder and no remainder term
    is divisible by any LM(g).  Deterministic: the largest reducible term is
    cancelled first, by the lowest-index eligible generator.
    """
    lts = []
    for g in G:
        if g.is_zero():
            raise DomainError("zero generator in division")
        lts.append(leading_term(g, ord))
    work = dict(f.terms)
    used = []
    # monomials already known irreducible; skip rescanning them
    dead = set()
    while True:
        target = None
        for m in sorted(work, key=ord.key, reverse=True):
            if m in dead:
                continue
            for idx, (lc, lm) in enumerate(lts):
                if mono_divides(lm, m):
                    target = (m, idx, lc, lm)
                    break
            if target:
                break
            dead.add(m)
        if target is None:
            break
        m, idx, lc, lm = target
        cof_c = work[m] / lc
        cof_m = mono_div(m, lm)
        used.append(((cof_c, cof_m), idx))
        for gm, gc in G[idx].terms.items():
            mm = mono_mul(cof_m, gm)
            delta = cof_c * gc
            if mm in work:
                s = work[mm] - delta
                if s:
                    work[mm] = s
                else:
                    del work[mm]
            elif delta:
                work[mm] = -delta
    return Polynomial(work), used


def render(f, ord, namer):
    """Canonical text form: terms strictly decreasing, ``{+|-}{c*}x[i,j,k]*…``."""
    if f.is_zero():
        return "0"
    out = []
    for c, m in sorted_terms(f, ord):
        neg = coeff_is_negative(c)
        mag = -c if neg else c
        out.append("-" if neg else "+")
        factors = []
        for v, e in sorted(m, key=lambda p: ord.rank_of(p[0])):
            factors.extend([namer(v)] * e)
        if mag == 1 and factors:
            out.append("*".join(factors))
        elif factors:
            out.append(f"{mag}*" + "*".join(factors))
        else:
            out.append(f"{mag}")
    return "".join(out)
