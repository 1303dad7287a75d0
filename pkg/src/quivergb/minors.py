"""Minors and pseudominors of the concatenated matrices, and the natural
generator set of the bipartite determinantal ideal."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .poly import (
    QQ, DomainError, InputError, Polynomial, leading_term, mono_from,
    poly_const, poly_mul_var,
)
from .layout import validate_consistent


@dataclass(frozen=True)
class MinorRef:
    vertex: int
    rows: tuple  # strictly increasing, 1-based
    cols: tuple

    def __post_init__(self):
        if len(self.rows) != len(self.cols) or not self.rows:
            raise InputError("minor needs equally many rows and columns, at least one")
        if list(self.rows) != sorted(set(self.rows)) or list(self.cols) != sorted(set(self.cols)):
            raise InputError("minor rows and columns must be strictly increasing")

    @property
    def size(self):
        return len(self.rows)


@dataclass(frozen=True)
class PseudoMinorRef:
    vertex: int
    rows: tuple  # arbitrary sequences, repeats allowed
    cols: tuple

    def __post_init__(self):
        if len(self.rows) != len(self.cols):
            raise InputError("pseudominor needs equally many rows and columns")

    @property
    def trivial(self):
        return len(set(self.rows)) < len(self.rows) or len(set(self.cols)) < len(self.cols)


def enumerate_minors(layout, gamma, size):
    if size < 1 or not layout.has_matrix(gamma):
        return []
    nrows, ncols = layout.matrix_shape(gamma)
    if size > nrows or size > ncols:
        return []
    out = []
    for rows in combinations(range(1, nrows + 1), size):
        for cols in combinations(range(1, ncols + 1), size):
            out.append(MinorRef(gamma, rows, cols))
    return out


def _det_var_grid(grid, field):
    """Determinant of a square grid of VarIds by DP over column subsets."""
    n = len(grid)
    prev = {0: poly_const(field.of(1))}
    for i in range(n):
        row = grid[i]
        nxt = {}
        for mask, sub in prev.items():
            for j in range(n):
                bit = 1 << j
                if mask & bit:
                    continue
                term = poly_mul_var(sub, row[j])
                # Laplace sign: parity of already-chosen columns right of j
                if (mask >> (j + 1)).bit_count() & 1:
                    term = -term
                key = mask | bit
                if key in nxt:
                    nxt[key] = nxt[key] + term
                else:
                    nxt[key] = term
        prev = nxt
    return prev[(1 << n) - 1]


def _submatrix(layout, ref):
    grid = layout.matrix(ref.vertex)
    nrows = len(grid)
    ncols = len(grid[0]) if grid else 0
    for p in ref.rows:
        if not 1 <= p <= nrows:
            raise InputError(f"row {p} out of bounds for vertex {ref.vertex}")
    for q in ref.cols:
        if not 1 <= q <= ncols:
            raise InputError(f"column {q} out of bounds for vertex {ref.vertex}")
    return [[grid[p - 1][q - 1] for q in ref.cols] for p in ref.rows]


def expand_minor(layout, ref, field=QQ):
    return _det_var_grid(_submatrix(layout, ref), field)


def expand_pseudominor(layout, ref, field=QQ):
    if ref.trivial:
        return Polynomial()
    return _det_var_grid(_submatrix(layout, ref), field)


_CONSISTENT_CACHE = {}


def ensure_consistent(layout, ord):
    key = (id(layout), id(ord))
    if key not in _CONSISTENT_CACHE:
        _CONSISTENT_CACHE[key] = not validate_consistent(ord, layout)
    if not _CONSISTENT_CACHE[key]:
        raise DomainError("order is not consistent with the layout")


def minor_leading_term(layout, ref, ord, field=QQ):
    """Fast path: under a consistent order the leading term is the diagonal."""
    ensure_consistent(layout, ord)
    grid = _submatrix(layout, ref)
    mono = mono_from((grid[i][i], 1) for i in range(len(grid)))
    return field.of(1), mono


def minor_points(layout, ref):
    """The set of lattice points covered by the submatrix (dedup key)."""
    return frozenset(layout.point_of[v] for row in _submatrix(layout, ref) for v in row)


def natural_generators(layout, field=QQ):
    """Deduplicated (u_gamma+1)-minors over all vertices, with polynomials."""
    seen = {}
    out = []
    for gamma in sorted(layout.matrices):
        size = layout.minor_size(gamma)
        for ref in enumerate_minors(layout, gamma, size):
            key = minor_points(layout, ref)
            if key in seen:
                continue
            seen[key] = ref
            out.append((ref, expand_minor(layout, ref, field)))
    return out


def parse_minor_spec(text):
    """CLI form ``<vertex>:<r1>,<r2>,…;<c1>,<c2>,…`` (1-based)."""
    try:
        vtx, rest = text.split(":", 1)
        rows, cols = rest.split(";", 1)
        ref = MinorRef(int(vtx),
                       tuple(int(x) for x in rows.split(",")),
                       tuple(int(x) for x in cols.split(",")))
    except (ValueError, InputError) as exc:
        raise InputError(f"bad minor spec {text!r}: {exc}") from None
    return ref


def render_minor_spec(ref):
    return f"{ref.vertex}:{','.join(map(str, ref.rows))};{','.join(map(str, ref.cols))}"


def render_pseudominor_spec(ref):
    return f"{ref.vertex}:{','.join(map(str, ref.rows))};{','.join(map(str, ref.cols))}"
