"""Quiver parsing and the variable lattice behind the concatenated matrices.

A bipartite quiver with d vertices and r arrows produces one page of fresh
variables per arrow; the page of arrow k (source s, target t) has shape
m_t x m_s.  Every sink vertex owns the horizontal concatenation of its
in-arrow pages, every source vertex the vertical stack of its out-arrow
pages, pages ordered by arrow index.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .poly import InputError, OrderSpec


@dataclass(frozen=True)
class QuiverSpec:
    d: int
    arrows: tuple  # ordered (source, target) pairs, 1-based
    m: tuple       # dimension vector, length d
    u: tuple       # rank bounds u_gamma, length d
    order_file: str | None = None


def parse_quiver(text):
    """Parse the line-oriented quiver config grammar."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    d = None
    arrows = []
    m = u = None
    order_file = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kw = parts[0]
        try:
            if kw == "vertices":
                if d is not None:
                    raise InputError("duplicate vertices line")
                d = int(parts[1])
                if d < 1:
                    raise InputError("vertex count must be positive")
            elif kw == "arrow":
                if d is None:
                    raise InputError("vertices must come first")
                s, t = int(parts[1]), int(parts[2])
                if not (1 <= s <= d and 1 <= t <= d):
                    raise InputError("vertex index out of range")
                arrows.append((s, t))
            elif kw == "m":
                m = tuple(int(x) for x in parts[1:])
            elif kw == "rank":
                u = tuple(int(x) for x in parts[1:])
            elif kw == "order":
                order_file = parts[1]
            else:
                raise InputError(f"unknown keyword {kw!r}")
        except (IndexError, ValueError) as exc:
            raise InputError(f"line {lineno}: malformed: {raw.strip()!r}") from exc
        except InputError as exc:
            raise InputError(f"line {lineno}: {exc}") from None
    if d is None:
        raise InputError("missing vertices line")
    if m is None or len(m) != d:
        raise InputError(f"dimension vector m must have length {d}")
    if u is None or len(u) != d:
        raise InputError(f"rank vector must have length {d}")
    if any(x < 0 for x in m) or any(x < 0 for x in u):
        raise InputError("m and rank entries must be nonnegative")
    sources = {s for s, _ in arrows}
    targets = {t for _, t in arrows}
    both = sources & targets
    if both:
        raise InputError(f"vertex {min(both)} used as both source and sink")
    return QuiverSpec(d, tuple(arrows), m, u, order_file)


def render_quiver(spec):
    lines = [f"vertices {spec.d}"]
    lines.extend(f"arrow {s} {t}" for s, t in spec.arrows)
    lines.append("m " + " ".join(str(x) for x in spec.m))
    lines.append("rank " + " ".join(str(x) for x in spec.u))
    if spec.order_file:
        lines.append(f"order {spec.order_file}")
    return "\n".join(lines) + "\n"


@dataclass
class Layout:
    spec: QuiverSpec
    pages: list          # per arrow (0-based): (nrows, ncols)
    var_of: dict         # (i, j, k) 1-based lattice point -> VarId
    point_of: list       # VarId -> (i, j, k)
    matrices: dict       # vertex -> list of rows of VarIds (may be absent)
    roles: dict          # vertex -> "sink" | "source"
    pos_in_matrix: dict = field(default_factory=dict)  # (vertex, VarId) -> (p, q)

    @property
    def nvars(self):
        return len(self.point_of)

    def var_name(self, v):
        i, j, k = self.point_of[v]
        return f"x[{i},{j},{k}]"

    def has_matrix(self, gamma):
        return gamma in self.matrices

    def matrix(self, gamma):
        try:
            return self.matrices[gamma]
        except KeyError:
            raise InputError(f"vertex {gamma} has no incident arrows") from None

    def matrix_shape(self, gamma):
        grid = self.matrix(gamma)
        return len(grid), len(grid[0]) if grid else 0

    def minor_size(self, gamma):
        return self.spec.u[gamma - 1] + 1


def build_layout(spec):
    pages = []
    var_of = {}
    point_of = []
    for k, (s, t) in enumerate(spec.arrows, start=1):
        nrows, ncols = spec.m[t - 1], spec.m[s - 1]
        pages.append((nrows, ncols))
        for i in range(1, nrows + 1):
            for j in range(1, ncols + 1):
                var_of[(i, j, k)] = len(point_of)
                point_of.append((i, j, k))
    matrices = {}
    roles = {}
    for gamma in range(1, spec.d + 1):
        in_pages = [k for k, (_, t) in enumerate(spec.arrows, start=1) if t == gamma]
        out_pages = [k for k, (s, _) in enumerate(spec.arrows, start=1) if s == gamma]
        if in_pages:
            roles[gamma] = "sink"
            nrows = spec.m[gamma - 1]
            grid = [[] for _ in range(nrows)]
            for k in in_pages:
                _, ncols = pages[k - 1]
                for i in range(1, nrows + 1):
                    grid[i - 1].extend(var_of[(i, j, k)] for j in range(1, ncols + 1))
            matrices[gamma] = grid
        elif out_pages:
            roles[gamma] = "source"
            ncols = spec.m[gamma - 1]
            grid = []
            for k in out_pages:
                nrows, _ = pages[k - 1]
                for i in range(1, nrows + 1):
                    grid.append([var_of[(i, j, k)] for j in range(1, ncols + 1)])
            matrices[gamma] = grid
    layout = Layout(spec, pages, var_of, point_of, matrices, roles)
    for gamma, grid in matrices.items():
        for p, row in enumerate(grid, start=1):
            for q, v in enumerate(row, start=1):
                layout.pos_in_matrix[(gamma, v)] = (p, q)
    return layout


def entry_at(layout, gamma, p, q):
    grid = layout.matrix(gamma)
    if not (1 <= p <= len(grid)) or not grid or not (1 <= q <= len(grid[0])):
        raise InputError(f"entry ({p},{q}) out of bounds for vertex {gamma}")
    return grid[p - 1][q - 1]


def default_order(layout):
    """Page-major ranking, reading order within each page."""
    # point_of[v] = (i, j, k); sort by (k, i, j)
    order = sorted(range(layout.nvars),
                   key=lambda v: (layout.point_of[v][2], layout.point_of[v][0], layout.point_of[v][1]))
    return OrderSpec({v: r for r, v in enumerate(order)})


def parse_order_file(layout, text):
    """Ranking file: one line per variable, ``x[i,j,k] <rank>``."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    rank = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            name, r = line.split()
            inner = name[name.index("[") + 1:name.index("]")]
            i, j, k = (int(x) for x in inner.split(","))
            rank[layout.var_of[(i, j, k)]] = int(r)
        except (ValueError, KeyError, IndexError) as exc:
            raise InputError(f"order file line {lineno}: malformed: {raw.strip()!r}") from exc
    if len(rank) != layout.nvars:
        raise InputError("order file must rank every lattice variable exactly once")
    return OrderSpec(rank)


def validate_consistent(ord, layout):
    """List the (vertex, position pair) places where ord breaks consistency.

    Consistency means every A_gamma decreases left-to-right along rows and
    top-to-bottom along columns.  Adjacent entries suffice by transitivity;
    a variable pair is reported once even if it appears in two matrices.
    """
    seen = set()
    bad = []
    for gamma, grid in sorted(layout.matrices.items()):
        nrows = len(grid)
        ncols = len(grid[0]) if grid else 0
        for p in range(nrows):
            for q in range(ncols):
                v = grid[p][q]
                if q + 1 < ncols:
                    w = grid[p][q + 1]
                    if ord.rank_of(v) > ord.rank_of(w) and (v, w) not in seen:
                        seen.add((v, w))
                        bad.append((gamma, (p + 1, q + 1), (p + 1, q + 2)))
                if p + 1 < nrows:
                    w = grid[p + 1][q]
                    if ord.rank_of(v) > ord.rank_of(w) and (v, w) not in seen:
                        seen.add((v, w))
                        bad.append((gamma, (p + 1, q + 1), (p + 2, q + 1)))
    return bad
