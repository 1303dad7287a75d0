"""Constructive S-pair certificates for minor pairs.

Given two minors M, N over one layout, the lcm L of their leading monomials
is a product of distinct lattice variables.  Permuting row coordinates of
L's points within the leading support of M (by sigma) and column coordinates
within the leading support of N (by tau) yields the monomials L(sigma,tau);
signed sums of these over cosets collapse to cofactor-times-pseudominor
terms, and the resulting decomposition P(M,N) equals the S-polynomial.
Whether its terms stay below L is governed by combinatorial patterns
(violations, defects) among the leading-term positions, and chains of
intermediate minors with small-leading-term steps certify the Groebner
property pair by pair.

Coordinate convention: a pair on the same vertex matrix is analyzed in
whole-matrix coordinates (row, column of A_gamma) with a single incidence
class; a cross-vertex pair is analyzed in page-local coordinates with one
incidence class per page.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations
from math import factorial

from .poly import (
    QQ, DomainError, InputError, Polynomial, mono_divides, mono_div,
    mono_from, mono_lcm, mono_mul, mono_vars, poly_add, poly_neg, poly_scale,
    poly_sub, render, s_polynomial, sorted_terms, leading_term,
)
from .minors import (
    MinorRef, PseudoMinorRef, expand_minor, expand_pseudominor,
    minor_leading_term, render_minor_spec, render_pseudominor_spec,
)


# ---------------------------------------------------------------------------
# analysis

@dataclass
class SPairAnalysis:
    layout: object
    ord: object
    M: MinorRef
    N: MinorRef
    mode: str            # "matrix" (same vertex) | "pages" (cross vertex)
    L: tuple             # the lcm monomial
    points: tuple        # lattice points, strictly decreasing variables
    alpha: tuple         # 1-based coordinate arrays; entry 0 unused
    beta: tuple
    page: tuple
    S_M: frozenset       # 1-based indices into points
    S_N: frozenset
    incidence_classes: tuple  # sorted index tuples

    @property
    def l(self):
        return len(self.points)

    @property
    def incidences(self):
        return frozenset(i for cls in self.incidence_classes for i in cls)


def analyze(layout, M, N, ord, field=QQ):
    # The cross-matrix machinery is oriented: sigma permutes row coordinates
    # inside the sink-side support, tau permutes column coordinates inside
    # the source-side support.  Normalize a reversed pair.
    if (M.vertex != N.vertex
            and layout.roles[M.vertex] == "source"
            and layout.roles[N.vertex] == "sink"):
        M, N = N, M
    _, lm_m = minor_leading_term(layout, M, ord, field)
    _, lm_n = minor_leading_term(layout, N, ord, field)
    L = mono_lcm(lm_m, lm_n)
    variables = sorted(mono_vars(L), key=ord.rank_of)
    points = tuple(layout.point_of[v] for v in variables)
    vm, vn = mono_vars(lm_m), mono_vars(lm_n)
    S_M = frozenset(i for i, v in enumerate(variables, start=1) if v in vm)
    S_N = frozenset(i for i, v in enumerate(variables, start=1) if v in vn)
    mode = "matrix" if M.vertex == N.vertex else "pages"
    alpha, beta, page = [0], [0], [0]
    for idx, v in enumerate(variables, start=1):
        i, j, k = layout.point_of[v]
        if mode == "matrix":
            p, q = layout.pos_in_matrix[(M.vertex, v)]
            alpha.append(p)
            beta.append(q)
            page.append(0)
        else:
            alpha.append(i)
            beta.append(j)
            page.append(k)
    inc = sorted(S_M & S_N)
    if mode == "matrix":
        classes = (tuple(inc),) if inc else ()
    else:
        by_page = {}
        for i in inc:
            by_page.setdefault(page[i], []).append(i)
        classes = tuple(tuple(sorted(v)) for _, v in sorted(by_page.items()))
    return SPairAnalysis(layout, ord, M, N, mode, L, points,
                         tuple(alpha), tuple(beta), tuple(page),
                         S_M, S_N, classes)


def _var_at(an, a, b, r):
    if an.mode == "matrix":
        grid = an.layout.matrix(an.M.vertex)
        if not (1 <= a <= len(grid) and 1 <= b <= len(grid[0])):
            raise InputError("permuted point leaves the matrix")
        return grid[a - 1][b - 1]
    try:
        return an.layout.var_of[(a, b, r)]
    except KeyError:
        raise InputError("permuted point leaves the variable lattice") from None


# ---------------------------------------------------------------------------
# permutations as dicts over a fixed index subset

def perms_of(S):
    base = sorted(S)
    return [dict(zip(base, img)) for img in permutations(base)]


def perm_apply(p, i):
    return p.get(i, i)


def perm_sign(p):
    keys = sorted(p)
    img = [p[k] for k in keys]
    sign = 1
    for a in range(len(img)):
        for b in range(a + 1, len(img)):
            if img[a] > img[b]:
                sign = -sign
    return sign


def perm_oneline(p, S):
    return tuple(perm_apply(p, i) for i in sorted(S))


def _check_member(p, S, what):
    dom = set(p)
    if not dom <= set(S) or set(p.values()) != dom:
        raise InputError(f"{what} is not a permutation of the required index set")


def coset_reps(an, side):
    """One representative per coset sigma * prod(Sym(I_j)); identity first."""
    S = an.S_M if side == "row" else an.S_N
    inc = an.incidences & S
    fixed = sorted(S - inc)
    buckets = {}
    for p in perms_of(S):
        key = (tuple(p[i] for i in fixed),
               tuple(frozenset(p[i] for i in cls) for cls in an.incidence_classes))
        line = perm_oneline(p, S)
        cur = buckets.get(key)
        if cur is None or line < perm_oneline(cur, S):
            buckets[key] = p
    reps = sorted(buckets.values(), key=lambda p: perm_oneline(p, S))
    # identity has the minimal one-line form, so it is already first
    return reps


def L_of(an, sigma, tau):
    _check_member(sigma, an.S_M, "sigma")
    _check_member(tau, an.S_N, "tau")
    pairs = []
    for i in range(1, an.l + 1):
        a = an.alpha[perm_apply(sigma, i)]
        b = an.beta[perm_apply(tau, i)]
        pairs.append((_var_at(an, a, b, an.page[i]), 1))
    return mono_from(pairs)


# ---------------------------------------------------------------------------
# pseudominor decompositions

@dataclass(frozen=True)
class DecompTerm:
    sign: int
    cofactor: tuple      # monomial
    pm: PseudoMinorRef


@dataclass
class Decomposition:
    M: MinorRef
    N: MinorRef
    row_terms: tuple
    col_terms: tuple


def _orientation_ok(an):
    if an.mode == "matrix":
        return True
    roles = an.layout.roles
    return roles[an.M.vertex] == "sink" and roles[an.N.vertex] == "source"


def _require_orientation(an):
    if not _orientation_ok(an):
        raise DomainError(
            "pseudominor decomposition is defined with the sink-side minor first; "
            "swap the pair")


def p_row(an, sigma):
    """P_{sigma,.} as (sign, cofactor, pseudominor of N's matrix)."""
    _check_member(sigma, an.S_M, "sigma")
    _require_orientation(an)
    jlist = sorted(an.S_N)
    layout = an.layout
    if an.mode == "matrix":
        rows = tuple(an.alpha[perm_apply(sigma, j)] for j in jlist)
        cols = tuple(an.beta[j] for j in jlist)
        pm = PseudoMinorRef(an.M.vertex, rows, cols)
    else:
        rows = []
        for j in jlist:
            v = layout.var_of[(an.alpha[perm_apply(sigma, j)], 1, an.page[j])]
            rows.append(layout.pos_in_matrix[(an.N.vertex, v)][0])
        cols = tuple(an.beta[j] for j in jlist)
        pm = PseudoMinorRef(an.N.vertex, tuple(rows), cols)
    cof = mono_from(
        (_var_at(an, an.alpha[perm_apply(sigma, k)], an.beta[k], an.page[k]), 1)
        for k in an.S_M - an.S_N)
    return perm_sign(sigma), cof, pm


def p_col(an, tau):
    """P_{.,tau} as (sign, cofactor, pseudominor of M's matrix)."""
    _check_member(tau, an.S_N, "tau")
    _require_orientation(an)
    ilist = sorted(an.S_M)
    layout = an.layout
    if an.mode == "matrix":
        rows = tuple(an.alpha[i] for i in ilist)
        cols = tuple(an.beta[perm_apply(tau, i)] for i in ilist)
        pm = PseudoMinorRef(an.M.vertex, rows, cols)
    else:
        rows = tuple(an.alpha[i] for i in ilist)
        cols = []
        for i in ilist:
            v = layout.var_of[(1, an.beta[perm_apply(tau, i)], an.page[i])]
            cols.append(layout.pos_in_matrix[(an.M.vertex, v)][1])
        pm = PseudoMinorRef(an.M.vertex, rows, tuple(cols))
    cof = mono_from(
        (_var_at(an, an.alpha[k], an.beta[perm_apply(tau, k)], an.page[k]), 1)
        for k in an.S_N - an.S_M)
    return perm_sign(tau), cof, pm


def _coset_decomposition(an):
    row_terms = []
    for sigma in coset_reps(an, "row")[1:]:
        sign, cof, pm = p_row(an, sigma)
        if not pm.trivial:
            row_terms.append(DecompTerm(sign, cof, pm))
    col_terms = []
    for tau in coset_reps(an, "col")[1:]:
        sign, cof, pm = p_col(an, tau)
        if not pm.trivial:
            col_terms.append(DecompTerm(sign, cof, pm))
    return Decomposition(an.M, an.N, tuple(row_terms), tuple(col_terms))


def _coprime_decomposition(layout, M, N, ord, field):
    """Pairs with no shared page have coprime leading monomials; the classical
    syzygy S = sum(tail(M))*N - sum(tail(N))*M serves as the decomposition,
    with the generators themselves as the pseudominors."""
    pm_m = expand_minor(layout, M, field)
    pm_n = expand_minor(layout, N, field)
    cm, lm_m = leading_term(pm_m, ord)
    cn, lm_n = leading_term(pm_n, ord)
    if not mono_divides(mono_from([]), mono_from([])):  # pragma: no cover
        raise AssertionError
    unit = cm * cn
    row_terms = []
    for c, m in sorted_terms(pm_m, ord):
        if m == lm_m:
            continue
        s = c / unit
        if s == field.of(1):
            sign = 1
        elif s == field.of(-1):
            sign = -1
        else:  # pragma: no cover - minors have unit coefficients
            raise DomainError("coprime decomposition needs unit coefficients")
        row_terms.append(DecompTerm(sign, m, PseudoMinorRef(N.vertex, N.rows, N.cols)))
    col_terms = []
    for c, m in sorted_terms(pm_n, ord):
        if m == lm_n:
            continue
        s = c / unit
        sign = 1 if s == field.of(1) else -1
        col_terms.append(DecompTerm(sign, m, PseudoMinorRef(M.vertex, M.rows, M.cols)))
    return Decomposition(M, N, tuple(row_terms), tuple(col_terms))


def p_decomposition(layout, M, N, ord, field=QQ):
    if M == N:
        return Decomposition(M, N, (), ())
    if M.vertex == N.vertex:
        return _coset_decomposition(analyze(layout, M, N, ord, field))
    role_m = layout.roles[M.vertex]
    role_n = layout.roles[N.vertex]
    if role_m == "sink" and role_n == "source":
        return _coset_decomposition(analyze(layout, M, N, ord, field))
    if role_m == "source" and role_n == "sink":
        # the machinery is oriented sink-first; mirror the swapped pair
        rev = p_decomposition(layout, N, M, ord, field)
        return Decomposition(M, N, rev.col_terms, rev.row_terms)
    return _coprime_decomposition(layout, M, N, ord, field)


def expand_term(layout, term, field=QQ):
    p = expand_pseudominor(layout, term.pm, field)
    if p.is_zero():
        return p
    coeff = field.of(term.sign)
    return poly_scale(p, (coeff, term.cofactor))


def expand_decomposition(layout, d, field=QQ):
    acc = Polynomial()
    for t in d.row_terms:
        acc = poly_add(acc, expand_term(layout, t, field))
    for t in d.col_terms:
        acc = poly_sub(acc, expand_term(layout, t, field))
    return acc


def has_small_lts(layout, d, L, ord, field=QQ):
    key_l = ord.key(L)
    for t in d.row_terms + d.col_terms:
        p = expand_term(layout, t, field)
        if p.is_zero():
            continue
        _, m = leading_term(p, ord)
        if not ord.key(m) < key_l:
            return False
    return True


# ---------------------------------------------------------------------------
# violations and defects

@dataclass(frozen=True)
class Violation:
    i: int
    j: int
    k: int
    strict: bool


def _violates(an, i, j, k):
    """(p_i, p_j, p_k) with i from S_M, j from S_N, k an incidence."""
    if len({i, j, k}) < 3:
        return None
    if an.page[i] != an.page[j] or an.page[j] != an.page[k]:
        return None
    ai, aj, ak = an.alpha[i], an.alpha[j], an.alpha[k]
    bi, bj, bk = an.beta[i], an.beta[j], an.beta[k]
    if (ai, bi) == (aj, bj):
        return None
    if ai <= aj < ak and bj <= bi < bk:
        return Violation(i, j, k, strict=(ai < aj and bj < bi))
    return None


def find_violations(layout, M, N, ord):
    an = analyze(layout, M, N, ord)
    return violations_of(an)


def violations_of(an):
    out = []
    inc = sorted(an.incidences)
    for i in sorted(an.S_M):
        for j in sorted(an.S_N):
            for k in inc:
                v = _violates(an, i, j, k)
                if v:
                    out.append(v)
    return out


@dataclass(frozen=True)
class Defect:
    kind: str            # "I" | "II"
    j: int
    k: int
    r: int
    s: int
    t: int
    maximal: bool


def _defect_chain_ok(an, j, k, r, s, t):
    a, b = an.alpha, an.beta
    return (a[j] <= a[k] < a[r] <= a[s] < a[t]
            and b[k] <= b[j] < b[s] <= b[r] < b[t])


def find_defects(layout, M, N, ord):
    if M.vertex != N.vertex:
        raise InputError("defects are a single-matrix notion; the pair crosses matrices")
    an = analyze(layout, M, N, ord)
    return defects_of(an)


def defects_of(an):
    only_m = sorted(an.S_M - an.S_N)
    only_n = sorted(an.S_N - an.S_M)
    inc = sorted(an.incidences)
    out = []
    for kind, first, second in (("I", only_m, only_n), ("II", only_n, only_m)):
        for j in first:
            for s in first:
                if s == j:
                    continue
                for k in second:
                    for r in second:
                        if r == k:
                            continue
                        for t in inc:
                            if not _defect_chain_ok(an, j, k, r, s, t):
                                continue
                            out.append(Defect(kind, j, k, r, s, t,
                                              _is_maximal_defect(an, kind, j, k, r, s, t)))
    return out


def _is_maximal_defect(an, kind, j, k, r, s, t):
    first = an.S_M if kind == "I" else an.S_N
    second = an.S_N if kind == "I" else an.S_M
    # (i) no violation triple with componentwise smaller (j', k') and same t
    for j2 in sorted(first):
        if j2 > j:
            continue
        for k2 in sorted(second):
            if k2 > k or (j2, k2) == (j, k):
                continue
            if _violates_roles(an, kind, j2, k2, t):
                return False
    # (ii) no tighter inner crossing with the same (j, k, t)
    first_only = first - second
    second_only = second - first
    for s2 in sorted(first_only):
        if not j < s2 <= s:
            continue
        for r2 in sorted(second_only):
            if not k < r2 <= r:
                continue
            if (s2, r2) != (s, r) and _defect_chain_ok(an, j, k, r2, s2, t):
                return False
    return True


def _violates_roles(an, kind, i, j, k):
    """Violation with the role split given by the defect kind."""
    v = _violates(an, i, j, k)
    return v is not None


def distance(layout, M, N, ord):
    _, lm_m = minor_leading_term(layout, M, ord)
    _, lm_n = minor_leading_term(layout, N, ord)
    vm, vn = mono_vars(lm_m), mono_vars(lm_n)
    return len(vm) + len(vn) - 2 * len(vm & vn)


# ---------------------------------------------------------------------------
# transplants

def _support_lists(an):
    """Positions m_1 > m_2 > ... (index lists into points, 1-based lists)."""
    m_list = [0] + sorted(an.S_M)
    n_list = [0] + sorted(an.S_N)
    return m_list, n_list


def _first_incidence_after(an, lst, pos):
    inc = an.incidences
    for i in range(pos + 1, len(lst)):
        if lst[i] in inc:
            return i
    return None


def _ref_from_points(layout, vertex, lattice_points):
    coords = []
    for pt in lattice_points:
        v = layout.var_of[pt]
        try:
            coords.append(layout.pos_in_matrix[(vertex, v)])
        except KeyError:
            raise DomainError("spliced point lies outside the target matrix") from None
    coords.sort()
    rows = tuple(p for p, _ in coords)
    cols_in_row_order = [q for _, q in coords]
    # NW-SE: sorting by row must also sort columns strictly
    assert len(set(rows)) == len(coords), "transplant produced a repeated row"
    assert all(cols_in_row_order[i] < cols_in_row_order[i + 1]
               for i in range(len(coords) - 1)), "transplant points are not NW-SE"
    return MinorRef(vertex, rows, tuple(sorted(cols_in_row_order)))


def transplant(layout, M, N, defect, ord):
    if not defect.maximal:
        raise InputError("transplant requires a maximal defect")
    if M.vertex != N.vertex:
        raise InputError("transplant is a single-matrix operation")
    if defect.kind == "II":
        flipped = Defect("I", defect.j, defect.k, defect.r, defect.s, defect.t, True)
        return transplant(layout, N, M, flipped, ord)
    an = analyze(layout, M, N, ord)
    m_list, n_list = _support_lists(an)
    u = len(m_list) - 1
    j = m_list.index(defect.j)
    s = m_list.index(defect.s)
    k = n_list.index(defect.k)
    r = n_list.index(defect.r)
    w1 = _first_incidence_after(an, m_list, j)
    w2 = _first_incidence_after(an, n_list, k)
    y1 = min(s, w1) - j
    y2 = min(r, w2) - k
    if y1 <= y2:
        chosen = (m_list[1:j] + n_list[k:k + y1] + m_list[j + y1:])
    else:
        chosen = (n_list[1:k] + m_list[j:j + y2] + n_list[k + y2:])
    assert len(chosen) == u
    pts = [an.points[i - 1] for i in chosen]
    P = _ref_from_points(layout, M.vertex, pts)
    _, lm_p = minor_leading_term(layout, P, ord)
    assert mono_divides(lm_p, an.L)
    assert P != M and P != N
    d_mp = distance(layout, M, P, ord)
    d_pn = distance(layout, P, N, ord)
    assert d_mp > 0 and d_pn > 0
    assert d_mp + d_pn == distance(layout, M, N, ord)
    return P


def maximal_violation(layout, M, N, ord):
    """The canonical maximal violation of (M, N), or None.

    Chooses the lexicographically least support positions (j, k) among all
    violations, then replaces the incidence by the first one below j (equally
    the first below k), which is again a violation.
    """
    an = analyze(layout, M, N, ord)
    viols = violations_of(an)
    if not viols:
        return None
    m_list, n_list = _support_lists(an)
    best = min((m_list.index(v.i), n_list.index(v.j)) for v in viols)
    j, k = best
    w1 = _first_incidence_after(an, m_list, j)
    w2 = _first_incidence_after(an, n_list, k)
    assert w1 is not None and w2 is not None and m_list[w1] == n_list[w2], \
        "first incidences after a minimal violation must coincide"
    v = _violates(an, m_list[j], n_list[k], m_list[w1])
    assert v is not None, "incidence swap must preserve the violation"
    return v


def cross_transplant(layout, M, N, viol, ord):
    if M.vertex == N.vertex:
        raise InputError("cross transplant needs minors of two different matrices")
    an = analyze(layout, M, N, ord)
    m_list, n_list = _support_lists(an)
    u = len(m_list) - 1
    j = m_list.index(viol.i)
    k = n_list.index(viol.j)
    w1 = _first_incidence_after(an, m_list, j)
    w2 = _first_incidence_after(an, n_list, k)
    if m_list[w1] != viol.k or n_list[w2] != viol.k:
        raise InputError("violation is not maximal: its incidence is not the first below (j,k)")
    for v2 in violations_of(an):
        j2, k2 = m_list.index(v2.i), n_list.index(v2.j)
        if j2 <= j and k2 <= k and (j2, k2) != (j, k) and v2.k == viol.k:
            raise InputError("violation is not maximal: a smaller (j,k) exists")
    if w1 - j > w2 - k:
        raise InputError("w1-j exceeds w2-k: swap the roles of M and N first")
    chosen = m_list[1:j] + n_list[k:k + (w1 - j)] + m_list[w1:]
    assert len(chosen) == u
    pts = [an.points[i - 1] for i in chosen]
    P = _ref_from_points(layout, an.M.vertex, pts)
    _, lm_p = minor_leading_term(layout, P, ord)
    assert mono_divides(lm_p, an.L)
    assert (distance(layout, P, an.N, ord)
            == distance(layout, an.M, an.N, ord) - 2 * (w1 - j))
    return P


# ---------------------------------------------------------------------------
# chains

@dataclass
class ChainCertificate:
    refs: list
    steps: list  # Decomposition per consecutive pair


def _mirror(d):
    return Decomposition(d.N, d.M, d.col_terms, d.row_terms)


def _step_decomposition(layout, F, G, ord, field):
    _, lf = minor_leading_term(layout, F, ord)
    _, lg = minor_leading_term(layout, G, ord)
    L = mono_lcm(lf, lg)
    d = p_decomposition(layout, F, G, ord, field)
    if has_small_lts(layout, d, L, ord, field):
        return d
    d2 = p_decomposition(layout, G, F, ord, field)
    if has_small_lts(layout, d2, L, ord, field):
        return _mirror(d2)
    raise DomainError("no small-leading-term decomposition for a chain step")


def _pick_defect(layout, F, G, ord):
    """Maximal type-I defect of (F,G) with least support positions (j,k);
    falls back to type II (a type-I defect of the swapped pair)."""
    an = analyze(layout, F, G, ord)
    m_list, n_list = _support_lists(an)

    def sort_key(d):
        first = m_list if d.kind == "I" else n_list
        second = n_list if d.kind == "I" else m_list
        return (first.index(d.j), second.index(d.k))

    defects = [d for d in defects_of(an) if d.maximal]
    type1 = [d for d in defects if d.kind == "I"]
    pool = type1 if type1 else defects
    if not pool:
        raise DomainError("pair is defective but has no maximal defect")
    return min(pool, key=sort_key)


def _same_matrix_chain(layout, F, G, ord, field):
    if F == G:
        return [F]
    _, lf = minor_leading_term(layout, F, ord)
    _, lg = minor_leading_term(layout, G, ord)
    L = mono_lcm(lf, lg)
    d = p_decomposition(layout, F, G, ord, field)
    if has_small_lts(layout, d, L, ord, field):
        return [F, G]
    d2 = p_decomposition(layout, G, F, ord, field)
    if has_small_lts(layout, d2, L, ord, field):
        return [F, G]
    P = transplant(layout, F, G, _pick_defect(layout, F, G, ord), ord)
    left = _same_matrix_chain(layout, F, P, ord, field)
    right = _same_matrix_chain(layout, P, G, ord, field)
    return left[:-1] + right


def _diagonal_minors_dividing(layout, vertex, L, size):
    """All size-minors of the vertex matrix whose leading diagonal uses only
    points of L (the D^L sets); L has few variables, so enumerate subsets."""
    coords = []
    for v in sorted(mono_vars(L)):
        pos = layout.pos_in_matrix.get((vertex, v))
        if pos is not None:
            coords.append(pos)
    out = []
    for sub in combinations(sorted(coords), size):
        rows = [p for p, _ in sub]
        cols = [q for _, q in sub]
        if all(rows[i] < rows[i + 1] and cols[i] < cols[i + 1] for i in range(size - 1)):
            out.append(MinorRef(vertex, tuple(rows), tuple(sorted(cols))))
    return out


def build_chain(layout, M, N, ord, field=QQ):
    if M == N:
        return ChainCertificate([M], [])
    if M.vertex == N.vertex:
        refs = _same_matrix_chain(layout, M, N, ord, field)
    else:
        _, lm = minor_leading_term(layout, M, ord)
        _, ln = minor_leading_term(layout, N, ord)
        L = mono_lcm(lm, ln)
        cand_m = _diagonal_minors_dividing(layout, M.vertex, L, M.size)
        cand_n = _diagonal_minors_dividing(layout, N.vertex, L, N.size)
        best = min(
            ((distance(layout, a, b, ord), a.rows, a.cols, b.rows, b.cols, a, b)
             for a in cand_m for b in cand_n),
            key=lambda t: t[:5])
        M2, N2 = best[5], best[6]
        left = _same_matrix_chain(layout, M, M2, ord, field)
        right = _same_matrix_chain(layout, N2, N, ord, field)
        refs = left + right
    steps = [_step_decomposition(layout, refs[i], refs[i + 1], ord, field)
             for i in range(len(refs) - 1)]
    return ChainCertificate(refs, steps)


def verify_chain(layout, cert, ord, field=QQ):
    refs = cert.refs
    if not refs:
        return False
    if len(refs) == 1:
        return not cert.steps
    if len(cert.steps) != len(refs) - 1:
        return False
    _, lm0 = minor_leading_term(layout, refs[0], ord)
    _, lmk = minor_leading_term(layout, refs[-1], ord)
    L_end = mono_lcm(lm0, lmk)
    for ref in refs:
        _, lm = minor_leading_term(layout, ref, ord)
        if not mono_divides(lm, L_end):
            return False
    for i, d in enumerate(cert.steps):
        F, G = refs[i], refs[i + 1]
        if d.M != F or d.N != G:
            return False
        pf = expand_minor(layout, F, field)
        pg = expand_minor(layout, G, field)
        target = s_polynomial(pf, pg, ord)
        if expand_decomposition(layout, d, field) != target:
            return False
        _, lf = minor_leading_term(layout, F, ord)
        _, lg = minor_leading_term(layout, G, ord)
        key_l = ord.key(mono_lcm(lf, lg))
        for t in d.row_terms + d.col_terms:
            # every surviving pseudominor must be a natural generator in disguise
            if len(t.pm.rows) != layout.minor_size(t.pm.vertex):
                return False
            p = expand_term(layout, t, field)
            if p.is_zero():
                continue
            _, m = leading_term(p, ord)
            if not ord.key(m) < key_l:
                return False
    return True


def check_noviolation_equivalence(layout, M, N, ord):
    """Brute-force check that strict violations characterize L(sigma,tau) > L
    and that L(sigma,tau) = L exactly on the diagonal incidence subgroup."""
    an = analyze(layout, M, N, ord)
    if factorial(len(an.S_M)) * factorial(len(an.S_N)) > factorial(8) ** 2:
        raise InputError("enumeration budget exceeded")
    strict_exists = any(v.strict for v in violations_of(an))
    key_l = ord.key(an.L)
    any_gt = False
    cond_a = True
    for sigma in perms_of(an.S_M):
        for tau in perms_of(an.S_N):
            m = L_of(an, sigma, tau)
            k = ord.key(m)
            if k > key_l:
                any_gt = True
            if (m == an.L) != _in_H(an, sigma, tau):
                cond_a = False
    return cond_a and (strict_exists == any_gt)


def _in_H(an, sigma, tau):
    for i in an.S_M - an.S_N:
        if perm_apply(sigma, i) != i:
            return False
    for i in an.S_N - an.S_M:
        if perm_apply(tau, i) != i:
            return False
    cls_of = {}
    for idx, cls in enumerate(an.incidence_classes):
        for i in cls:
            cls_of[i] = idx
    for i in an.incidences:
        si, ti = perm_apply(sigma, i), perm_apply(tau, i)
        if si != ti or cls_of.get(si) != cls_of.get(i):
            return False
    return True


# ---------------------------------------------------------------------------
# rendering

def render_decomposition(layout, d, ord):
    def side(terms):
        if not terms:
            return "(empty)"
        bits = []
        for t in terms:
            cof = "*".join(layout.var_name(v) for v, e in
                           sorted(t.cofactor, key=lambda p: ord.rank_of(p[0]))
                           for _ in range(e))
            bits.append(f"[{'+' if t.sign > 0 else '-'} {cof or '1'} "
                        f"pm {render_pseudominor_spec(t.pm)}]")
        return " ".join(bits)

    return f"rows: {side(d.row_terms)}\ncols: {side(d.col_terms)}"


def render_certificate(layout, cert, ord):
    lines = ["chain " + " ".join(render_minor_spec(r) for r in cert.refs)]
    for i, d in enumerate(cert.steps):
        body = render_decomposition(layout, d, ord).replace("\n", " ; ")
        lines.append(f"step {i}: {body}")
    return "\n".join(lines)
