"""Finite cell complexes over GF(2) with a graph metric on the 1-skeleton.

A complex is a list of cell counts per grade plus boundary matrices
boundary(k): C_k -> C_(k-1). The double-boundary identity is asserted for
every constructed or loaded complex. Periodic hypercubic tori in dimension
2..4 are the primary family; arbitrary complexes come from a small text
format.

Spacetime cells model a complex crossed with a time interval: spacelike
cells live at integer slices, timelike cells span unit intervals between
slices.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Set, Tuple

import numpy as np

from .z2 import Z2Matrix, bits_of

__all__ = [
    "ChainComplex",
    "ComplexFormatError",
    "ComplexValidationError",
    "SpacetimeCell",
    "build_hypercubic_torus",
    "dual_complex",
    "load_complex",
    "parse_complex",
    "dump_complex",
    "metric_ball",
    "spacetime_boundary",
]


class ComplexFormatError(ValueError):
    """Malformed complex file (syntax, ids, references)."""


class ComplexValidationError(ValueError):
    """Structurally invalid complex (double boundary nonzero)."""


@dataclass
class ChainComplex:
    """Graded cells with GF(2) boundary maps; immutable after construction.

    boundaries[k-1] is the matrix of boundary(k), rows indexed by
    (k-1)-cells and columns by k-cells. coords, when present, give integer
    coordinates per 0-cell. systole_hint is a lower-bound hint for the
    shortest noncontractible cycle; torus_shape tags complexes built as
    periodic hypercubic tori with (dim, L).
    """

    dim: int
    n_cells: Tuple[int, ...]
    boundaries: Tuple[Z2Matrix, ...]
    coords: Optional[Tuple[Tuple[int, ...], ...]] = None
    systole_hint: Optional[int] = None
    torus_shape: Optional[Tuple[int, int]] = None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.dim < 1:
            raise ComplexValidationError("dimension must be >= 1")
        if len(self.n_cells) != self.dim + 1 or len(self.boundaries) != self.dim:
            raise ComplexValidationError("grade count mismatch")
        for k in range(1, self.dim + 1):
            m = self.boundaries[k - 1]
            if m.rows != self.n_cells[k - 1] or m.cols != self.n_cells[k]:
                raise ComplexValidationError(f"boundary({k}) shape mismatch")
        self._assert_dd_zero()

    def _assert_dd_zero(self):
        for k in range(2, self.dim + 1):
            hi = self.boundaries[k - 1]
            lo = self.boundaries[k - 2]
            for cell in range(hi.cols):
                acc = 0
                for face in bits_of(hi.column(cell)):
                    acc ^= lo.column(face)
                if acc:
                    raise ComplexValidationError(
                        f"double boundary nonzero at grade {k} cell {cell}"
                    )

    def boundary(self, k: int) -> Z2Matrix:
        if not 1 <= k <= self.dim:
            raise ValueError(f"no boundary map at grade {k}")
        return self.boundaries[k - 1]

    def cell_count(self, k: int) -> int:
        return self.n_cells[k]

    def boundary_support(self, k: int, cell: int) -> Tuple[int, ...]:
        return tuple(bits_of(self.boundary(k).column(cell)))

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * n for k, n in enumerate(self.n_cells))

    # ----- cached derived structure -------------------------------------

    def vertex_adjacency(self) -> List[List[int]]:
        """Neighbor lists on the 1-skeleton (unit-length edges)."""
        adj = self._cache.get("adj")
        if adj is None:
            adj = [[] for _ in range(self.n_cells[0])]
            for e in range(self.n_cells[1]):
                vs = self.boundary_support(1, e)
                for a, b in itertools.combinations(vs, 2):
                    adj[a].append(b)
                    adj[b].append(a)
            self._cache["adj"] = adj
        return adj

    def cofaces(self, k: int) -> List[List[int]]:
        """For each k-cell, the (k+1)-cells whose boundary contains it."""
        key = ("cofaces", k)
        out = self._cache.get(key)
        if out is None:
            if not 0 <= k < self.dim:
                raise ValueError(f"no cofaces at grade {k}")
            m = self.boundaries[k]
            out = [[] for _ in range(self.n_cells[k])]
            for c in range(m.cols):
                for f in bits_of(m.column(c)):
                    out[f].append(c)
            self._cache[key] = out
        return out

    def cell_vertices(self, k: int, cell: int) -> Tuple[int, ...]:
        """The 0-cells underlying a k-cell (closure of its boundary)."""
        if k == 0:
            return (cell,)
        key = ("verts", k)
        table = self._cache.get(key)
        if table is None:
            table = [None] * self.n_cells[k]
            self._cache[key] = table
        got = table[cell]
        if got is None:
            if k == 1:
                got = self.boundary_support(1, cell)
            else:
                acc: Set[int] = set()
                for f in self.boundary_support(k, cell):
                    acc.update(self.cell_vertices(k - 1, f))
                got = tuple(sorted(acc))
            table[cell] = got
        return got

    def bfs_distances(self, center: int, radius: Optional[int] = None) -> Dict[int, int]:
        """Graph distances from center, truncated at radius when given."""
        adj = self.vertex_adjacency()
        dist = {center: 0}
        frontier = [center]
        d = 0
        while frontier and (radius is None or d < radius):
            d += 1
            nxt = []
            for v in frontier:
                for w in adj[v]:
                    if w not in dist:
                        dist[w] = d
                        nxt.append(w)
            frontier = nxt
        return dist

    def distance_table(self) -> List[List[int]]:
        """All-pairs vertex distances (cached; BFS per vertex)."""
        table = self._cache.get("dist_table")
        if table is None:
            n = self.n_cells[0]
            table = []
            for v in range(n):
                dv = self.bfs_distances(v)
                row = [-1] * n
                for w, d in dv.items():
                    row[w] = d
                table.append(row)
            self._cache["dist_table"] = table
        return table

    def cell_distance(self, ka: int, a: int, kb: int, b: int) -> int:
        """Distance between two cells: min over their vertex pairs."""
        table = self.distance_table()
        best = None
        for va in self.cell_vertices(ka, a):
            row = table[va]
            for vb in self.cell_vertices(kb, b):
                d = row[vb]
                if d >= 0 and (best is None or d < best):
                    best = d
        if best is None:
            raise ValueError("cells in different components")
        return best

    def cell_distance_matrix(self, ka: int, kb: int) -> np.ndarray:
        """All cell_distance values between grades ka and kb as int32.

        Disconnected pairs get -1. Cached; large but amortized over the
        pairwise queries of component analysis.
        """
        key = ("cdist", ka, kb)
        out = self._cache.get(key)
        if out is not None:
            return out
        if ka > kb:
            out = self.cell_distance_matrix(kb, ka).T
            self._cache[key] = out
            return out
        if self.n_cells[ka] == 0 or self.n_cells[kb] == 0:
            out = np.zeros((self.n_cells[ka], self.n_cells[kb]), dtype=np.int32)
            self._cache[key] = out
            return out
        table = self._cache.get("dist_np")
        if table is None:
            table = np.array(self.distance_table(), dtype=np.int32)
            self._cache["dist_np"] = table
        big = np.int32(1 << 30)
        table = np.where(table < 0, big, table)

        def corner_array(k: int) -> np.ndarray:
            verts = [self.cell_vertices(k, i) for i in range(self.n_cells[k])]
            width = max(len(v) for v in verts)
            # padding repeats the first corner; min over pairs unaffected
            return np.array(
                [v + (v[0],) * (width - len(v)) for v in verts], dtype=np.intp
            )

        ca = corner_array(ka)
        cb = corner_array(kb)
        best = None
        for i in range(ca.shape[1]):
            rows = table[ca[:, i]]
            for j in range(cb.shape[1]):
                block = rows[:, cb[:, j]]
                best = block if best is None else np.minimum(best, block)
        out = np.where(best >= big, np.int32(-1), best)
        out.setflags(write=False)
        self._cache[key] = out
        return out


def metric_ball(c: ChainComplex, center: int, r: int) -> Set[int]:
    """The 0-cells at graph distance <= r from center."""
    if r < 0:
        raise ValueError("radius must be >= 0")
    return set(c.bfs_distances(center, r))


# ----- periodic hypercubic torus ----------------------------------------


def build_hypercubic_torus(d: int, L: int) -> ChainComplex:
    """Torus (Z/L)^d with one k-cell per (direction k-subset, base vertex).

    Cell ids at grade k are subset_index * L^d + vertex, subsets in
    lexicographic order. Requires 2 <= d <= 4 and L >= 2 (L=2 gives a
    multigraph 1-skeleton, which is fine: cells are indexed, not named by
    endpoints).
    """
    if not 2 <= d <= 4:
        raise ValueError("dimension must be in 2..4")
    if L < 2:
        raise ValueError("L must be >= 2")
    n0 = L**d
    strides = [L**i for i in range(d)]

    def shift(v: int, axis: int) -> int:
        c = (v // strides[axis]) % L
        return v + strides[axis] * ((c + 1) % L - c)

    subsets = [list(itertools.combinations(range(d), k)) for k in range(d + 1)]
    subset_index = [
        {s: i for i, s in enumerate(level)} for level in subsets
    ]
    n_cells = tuple(len(subsets[k]) * n0 for k in range(d + 1))

    boundaries = []
    for k in range(1, d + 1):
        cols = []
        for si, s in enumerate(subsets[k]):
            faces_of = []
            for axis in s:
                rest = tuple(x for x in s if x != axis)
                faces_of.append((axis, subset_index[k - 1][rest]))
            for v in range(n0):
                col = 0
                for axis, fi in faces_of:
                    col ^= 1 << (fi * n0 + v)
                    col ^= 1 << (fi * n0 + shift(v, axis))
                cols.append(col)
        boundaries.append(Z2Matrix(n_cells[k - 1], n_cells[k], cols))

    coords = tuple(
        tuple((v // strides[i]) % L for i in range(d)) for v in range(n0)
    )
    return ChainComplex(
        dim=d,
        n_cells=n_cells,
        boundaries=tuple(boundaries),
        coords=coords,
        systole_hint=L,
        torus_shape=(d, L),
    )


def dual_complex(c: ChainComplex) -> ChainComplex:
    """Dual complex: grade j cells are the original (dim-j)-cells and
    boundary maps are the transposed coboundaries, reversed in grade."""
    d = c.dim
    boundaries = tuple(
        c.boundary(d - j + 1).transpose() for j in range(1, d + 1)
    )
    coords = None
    if c.coords is not None and c.torus_shape is not None:
        # dual 0-cells are the top cells; use their base vertex coordinates
        n0 = len(c.coords)
        coords = tuple(c.coords[top % n0] for top in range(c.n_cells[d]))
    return ChainComplex(
        dim=d,
        n_cells=tuple(reversed(c.n_cells)),
        boundaries=boundaries,
        coords=coords,
        systole_hint=c.systole_hint,
        torus_shape=c.torus_shape,
    )


# ----- text format -------------------------------------------------------


def parse_complex(text: str) -> ChainComplex:
    """Parse the line-oriented complex format.

    Header `complex dim=<d>`, then `vertices <n>`, lines
    `cell <k> <id>: <face ids>`, optional `coords <id>: <ints>` and
    `systole <n>`. `#` starts a comment.
    """
    dim: Optional[int] = None
    n_vertices: Optional[int] = None
    systole: Optional[int] = None
    cells: Dict[int, Dict[int, List[int]]] = {}
    coord_map: Dict[int, Tuple[int, ...]] = {}

    def fail(lineno: int, msg: str):
        raise ComplexFormatError(f"line {lineno}: {msg}")

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        head = parts[0]
        if dim is None:
            if head != "complex" or len(parts) != 2 or not parts[1].startswith("dim="):
                fail(lineno, "expected header 'complex dim=<d>'")
            try:
                dim = int(parts[1][4:])
            except ValueError:
                fail(lineno, "bad dimension")
            if dim < 1:
                fail(lineno, "dimension must be >= 1")
            continue
        if head == "vertices":
            if len(parts) != 2 or n_vertices is not None:
                fail(lineno, "bad or duplicate vertices line")
            try:
                n_vertices = int(parts[1])
            except ValueError:
                fail(lineno, "bad vertex count")
            if n_vertices < 0:
                fail(lineno, "negative vertex count")
        elif head == "systole":
            if len(parts) != 2:
                fail(lineno, "bad systole line")
            try:
                systole = int(parts[1])
            except ValueError:
                fail(lineno, "bad systole value")
        elif head == "cell":
            try:
                k = int(parts[1])
                id_part = parts[2]
                if not id_part.endswith(":"):
                    fail(lineno, "expected 'cell <k> <id>:'")
                cid = int(id_part[:-1])
                faces = [int(t) for t in parts[3:]]
            except (IndexError, ValueError):
                fail(lineno, "malformed cell line")
            if not 1 <= k <= dim:
                fail(lineno, f"grade {k} outside 1..{dim}")
            grade = cells.setdefault(k, {})
            if cid in grade:
                fail(lineno, f"duplicate cell id {cid} at grade {k}")
            grade[cid] = faces
        elif head == "coords":
            try:
                id_part = parts[1]
                if not id_part.endswith(":"):
                    fail(lineno, "expected 'coords <id>:'")
                cid = int(id_part[:-1])
                coord_map[cid] = tuple(int(t) for t in parts[2:])
            except (IndexError, ValueError):
                fail(lineno, "malformed coords line")
        else:
            fail(lineno, f"unknown directive '{head}'")

    if dim is None:
        raise ComplexFormatError("missing 'complex dim=' header")
    if n_vertices is None:
        raise ComplexFormatError("missing 'vertices' line")

    n_cells = [n_vertices]
    boundaries = []
    for k in range(1, dim + 1):
        grade = cells.get(k, {})
        n_k = len(grade)
        if grade and sorted(grade) != list(range(n_k)):
            raise ComplexFormatError(f"grade {k} ids not dense 0..{n_k - 1}")
        cols = []
        for cid in range(n_k):
            # repeated faces cancel over GF(2): only odd incidence survives
            col = 0
            for f in grade[cid]:
                if not 0 <= f < n_cells[k - 1]:
                    raise ComplexFormatError(
                        f"grade {k} cell {cid} references missing "
                        f"grade {k - 1} cell {f}"
                    )
                col ^= 1 << f
            cols.append(col)
        n_cells.append(n_k)
        boundaries.append(Z2Matrix(n_cells[k - 1], n_k, cols))

    coords = None
    if coord_map:
        if sorted(coord_map) != list(range(n_vertices)):
            raise ComplexFormatError("coords must cover all vertices or none")
        coords = tuple(coord_map[i] for i in range(n_vertices))

    return ChainComplex(
        dim=dim,
        n_cells=tuple(n_cells),
        boundaries=tuple(boundaries),
        coords=coords,
        systole_hint=systole,
    )


def load_complex(path) -> ChainComplex:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_complex(fh.read())


def dump_complex(c: ChainComplex) -> str:
    """Serialize in the text format; parse_complex round-trips it."""
    out = [f"complex dim={c.dim}", f"vertices {c.n_cells[0]}"]
    if c.systole_hint is not None:
        out.append(f"systole {c.systole_hint}")
    for k in range(1, c.dim + 1):
        for cid in range(c.n_cells[k]):
            faces = " ".join(str(f) for f in c.boundary_support(k, cid))
            out.append(f"cell {k} {cid}: {faces}")
    if c.coords is not None:
        for i, xyz in enumerate(c.coords):
            out.append(f"coords {i}: " + " ".join(str(x) for x in xyz))
    return "\n".join(out) + "\n"


# ----- spacetime cells ---------------------------------------------------


class SpacetimeCell(NamedTuple):
    """A cell of the complex crossed with time.

    For 2-cells of the product: kind "spacelike" pairs a 2-cell with a
    slice t in [0, tau]; kind "timelike" pairs a 1-cell with the interval
    (t-1, t), t in [1, tau]. The same shape describes product 1-cells
    (spacelike: 1-cell at a slice; timelike: 0-cell over an interval).
    """

    kind: str
    space_index: int
    time: int


def spacelike(q: int, t: int) -> SpacetimeCell:
    return SpacetimeCell("spacelike", q, t)


def timelike(s: int, t: int) -> SpacetimeCell:
    return SpacetimeCell("timelike", s, t)


def spacetime_boundary(
    chain: Iterable[SpacetimeCell], c: ChainComplex, tau: int
) -> Set[SpacetimeCell]:
    """GF(2) boundary of a set of spacetime 2-cells, as spacetime 1-cells.

    boundary(q x {t}) = (dq) x {t};
    boundary(s x [t]) = (ds) x [t] + s x {t-1} + s x {t}.
    """
    out: Set[SpacetimeCell] = set()

    def toggle(cell: SpacetimeCell):
        if cell in out:
            out.remove(cell)
        else:
            out.add(cell)

    for cell in chain:
        if cell.kind == "spacelike":
            if not 0 <= cell.time <= tau:
                raise ValueError(f"spacelike slice {cell.time} outside 0..{tau}")
            for e in c.boundary_support(2, cell.space_index):
                toggle(spacelike(e, cell.time))
        elif cell.kind == "timelike":
            if not 1 <= cell.time <= tau:
                raise ValueError(f"timelike interval {cell.time} outside 1..{tau}")
            for v in c.boundary_support(1, cell.space_index):
                toggle(timelike(v, cell.time))
            toggle(spacelike(cell.space_index, cell.time - 1))
            toggle(spacelike(cell.space_index, cell.time))
        else:
            raise ValueError(f"unknown spacetime kind {cell.kind!r}")
    return out
