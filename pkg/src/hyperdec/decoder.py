"""Greedy ball-local decoding on the 2-cells of a complex.

Balls are vertex balls of radius r_dec in the 1-skeleton metric. A 1-cell
with every endpoint inside the ball is variable; with an endpoint inside
and one outside it is fixed (it crosses the ball boundary, which sits at
the generic radius r_dec + 1/2 between vertex shells). A 2-cell whose
boundary 1-cells are all variable is interior and may be flipped. Flips
therefore never touch fixed cells, and balls whose centers are more than
2*r_dec apart have disjoint variable sets, so corrections in one round
commute.

The local problem is: minimize the variable-cell weight of s + dD over
flip sets D inside the ball. The solver is exact whenever the restricted
boundary matrix is consistent with s (weight 0 is reached) or its rank is
small enough to enumerate the image space; otherwise it runs a
deterministic best-improvement descent over single and pair flips, which
still guarantees the documented monotonicity and single-flip optimality.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Set, Tuple

import numpy as np

from .code import Syndrome
from .complexes import ChainComplex, metric_ball
from .z2 import Z2Vector, bits_of

__all__ = [
    "Ball",
    "Cover",
    "DecodeOutcome",
    "DecodeState",
    "DecoderConfig",
    "SizeExceededError",
    "build_ball",
    "build_cover",
    "decode_to_convergence",
    "deterministic_cover",
    "local_correction",
    "run_round",
    "sample_balls",
]

# Exact image enumeration is used when rank(B) <= EXACT_RANK_MAX; the
# kernel sweep that minimizes flip count runs when the kernel dimension
# is <= KERNEL_SWEEP_MAX. Both are work bounds, not correctness switches.
EXACT_RANK_MAX = 14
KERNEL_SWEEP_MAX = 16


if hasattr(np, "bitwise_count"):
    _popcount_u64 = np.bitwise_count
else:  # numpy < 2.0
    _POP8 = np.array([bin(i).count("1") for i in range(256)], dtype=np.uint16)

    def _popcount_u64(a: np.ndarray) -> np.ndarray:
        return _POP8[a.view(np.uint8)].reshape(a.shape + (8,)).sum(axis=-1)


def _xor_span(seed: int, gens: Sequence[int]) -> np.ndarray:
    """All 2^len(gens) xor combinations of gens with seed, as uint64."""
    out = np.empty(1 << len(gens), dtype=np.uint64)
    out[0] = seed
    size = 1
    for g in gens:
        out[size : 2 * size] = out[:size] ^ np.uint64(g)
        size *= 2
    return out


class SizeExceededError(RuntimeError):
    """Restricted kernel dimension exceeds the configured cap."""


@dataclass
class DecoderConfig:
    """Knobs for ball placement and the local solver.

    rho = None means the sampling density defaults to 1/|ball(2*r_dec)|.
    """

    r_dec: int = 2
    rho: Optional[float] = None
    kernel_cap: int = 24
    seed: int = 0
    scheme: str = "deterministic"

    def __post_init__(self):
        if self.r_dec < 1:
            raise ValueError("r_dec must be >= 1")
        if self.rho is not None and not 0 < self.rho <= 1:
            raise ValueError("rho must lie in (0, 1]")
        if not 0 <= self.kernel_cap <= 24:
            raise ValueError("kernel_cap must lie in 0..24")
        if self.scheme not in ("deterministic", "randomized"):
            raise ValueError(f"unknown scheme {self.scheme!r}")


class Ball:
    """A decoding ball with its precomputed local solver state."""

    __slots__ = (
        "center",
        "radius",
        "variable_1cells",
        "fixed_1cells",
        "interior_2cells",
        "mask_var",
        "mask_meas",
        "cols",
        "pivots",
        "kernel",
        "rank",
        "kernel_dim",
        "touch",
        "col_neighbors",
        "_packed",
        "_kern_np",
    )

    def __init__(self, c: ChainComplex, center: int, radius: int):
        self.center = center
        self.radius = radius
        dist = c.bfs_distances(center, radius)

        variable: List[int] = []
        fixed: List[int] = []
        seen_edges: Set[int] = set()
        for v in dist:
            for e in c.cofaces(0)[v]:
                if e in seen_edges:
                    continue
                seen_edges.add(e)
                ends = c.boundary_support(1, e)
                inside = sum(1 for w in ends if w in dist)
                if inside == len(ends):
                    variable.append(e)
                elif inside > 0:
                    fixed.append(e)
        variable.sort()
        fixed.sort()
        self.variable_1cells = tuple(variable)
        self.fixed_1cells = tuple(fixed)
        var_set = set(variable)

        interior: List[int] = []
        seen_cells: Set[int] = set()
        if c.dim >= 2:
            for e in variable:
                for q in c.cofaces(1)[e]:
                    if q in seen_cells:
                        continue
                    seen_cells.add(q)
                    if all(f in var_set for f in c.boundary_support(2, q)):
                        interior.append(q)
            interior.sort()
        self.interior_2cells = tuple(interior)

        self.mask_var = 0
        for e in variable:
            self.mask_var |= 1 << e
        self.mask_meas = self.mask_var
        for e in fixed:
            self.mask_meas |= 1 << e

        b2 = c.boundary(2) if c.dim >= 2 else None
        self.cols = [b2.column(q) for q in interior] if b2 else []

        # full column reduction with flip-combination tracking
        pivots: List[Tuple[int, int, int]] = []  # (pivot bit, col, combo)
        kernel: List[int] = []
        for i, col in enumerate(self.cols):
            cur, combo = col, 1 << i
            for pb, pc, pf in pivots:
                if (cur >> pb) & 1:
                    cur ^= pc
                    combo ^= pf
            if cur:
                pb = cur.bit_length() - 1
                for j, (qb, qc, qf) in enumerate(pivots):
                    if (qc >> pb) & 1:
                        pivots[j] = (qb, qc ^ cur, qf ^ combo)
                pivots.append((pb, cur, combo))
            else:
                kernel.append(combo)
        self.pivots = pivots
        self.kernel = kernel
        self.rank = len(pivots)
        self.kernel_dim = len(kernel)

        touch: Dict[int, List[int]] = {}
        for i, col in enumerate(self.cols):
            for b in bits_of(col):
                touch.setdefault(b, []).append(i)
        self.touch = {b: tuple(v) for b, v in touch.items()}
        self.col_neighbors = tuple(
            tuple(
                j
                for j in range(len(self.cols))
                if j != i and self.cols[i] & self.cols[j]
            )
            for i in range(len(self.cols))
        )

        # compact uint64 images of the local problem for vectorized
        # enumeration; only when everything fits one machine word
        self._packed = None
        self._kern_np = None
        if len(variable) <= 64 and len(interior) <= 64:
            if self.rank <= EXACT_RANK_MAX:
                piv_cols = np.array(
                    [self._to_local(pc) for _, pc, _ in pivots], dtype=np.uint64
                )
                ds = _xor_span(
                    0, np.array([pf for _, _, pf in pivots], dtype=np.uint64)
                )
                flip_counts = _popcount_u64(ds).astype(np.uint32)
                self._packed = (piv_cols, ds, flip_counts)
            if 0 < self.kernel_dim <= KERNEL_SWEEP_MAX:
                self._kern_np = np.array(kernel, dtype=np.uint64)

    def _to_local(self, bits: int) -> int:
        out = 0
        for i, e in enumerate(self.variable_1cells):
            out |= ((bits >> e) & 1) << i
        return out

    # ----- local solve ---------------------------------------------------

    def solve(self, s_bits: int, kernel_cap: int) -> int:
        """Flip combination (bit i = interior_2cells[i]) for syndrome bits.

        Minimizes the variable-cell weight of the corrected syndrome;
        among weight ties prefers fewer flips, then the first candidate in
        enumeration order.
        """
        s_loc = s_bits & self.mask_var
        if not s_loc:
            return 0
        if self.kernel_dim > kernel_cap:
            raise SizeExceededError(
                f"ball at {self.center}: kernel dimension {self.kernel_dim} "
                f"exceeds cap {kernel_cap}"
            )
        res, combo = s_loc, 0
        for pb, pc, pf in self.pivots:
            if (res >> pb) & 1:
                res ^= pc
                combo ^= pf
        if not res:
            return self._min_flips(combo)
        if self.rank <= EXACT_RANK_MAX:
            return self._exact_search(s_loc)
        return self._descent(s_loc)

    def _min_flips(self, combo: int) -> int:
        """Cheapest flip set in combo + kernel (exact for small kernels)."""
        if not self.kernel or self.kernel_dim > KERNEL_SWEEP_MAX:
            return combo
        if self._kern_np is not None:
            ds = _xor_span(combo, self._kern_np)
            return int(ds[int(np.argmin(_popcount_u64(ds)))])
        best, best_w = combo, combo.bit_count()
        cur = combo
        for t in range(1, 1 << self.kernel_dim):
            cur ^= self.kernel[(t & -t).bit_length() - 1]
            w = cur.bit_count()
            if w < best_w:
                best, best_w = cur, w
        return best

    def _exact_search(self, s_loc: int) -> int:
        """Full sweep of the image space: globally exact minimum weight,
        then fewest flips before kernel reduction, then sweep order."""
        if self._packed is not None:
            piv_cols, ds, flip_counts = self._packed
            xs = _xor_span(self._to_local(s_loc), piv_cols)
            score = (_popcount_u64(xs).astype(np.uint32) << np.uint32(8)) | flip_counts
            best = int(ds[int(np.argmin(score))])
            return self._min_flips(best) if best else 0
        gens = self.pivots
        x, combo = s_loc, 0
        best_w, best_f, best = x.bit_count(), 0, 0
        for t in range(1, 1 << self.rank):
            g = (t & -t).bit_length() - 1
            x ^= gens[g][1]
            combo ^= gens[g][2]
            w = x.bit_count()
            if w < best_w:
                best_w, best_f, best = w, combo.bit_count(), combo
            elif w == best_w:
                f = combo.bit_count()
                if f < best_f:
                    best_f, best = f, combo
        return self._min_flips(best) if best else 0

    def _descent(self, s_loc: int) -> int:
        """Deterministic best-improvement descent over 1- and 2-flip moves.

        An improving move must involve a cell overlapping the current
        residual (a disjoint flip adds 4 and a disjoint pair adds >= 6),
        so candidate scans stay local to the syndrome.
        """
        x = s_loc
        combo = 0
        cols = self.cols
        while True:
            cand = sorted(
                {i for b in bits_of(x) for i in self.touch.get(b, ())}
            )
            w0 = x.bit_count()
            best_gain, best_move = 0, None
            for i in cand:
                gain = w0 - (x ^ cols[i]).bit_count()
                if gain > best_gain:
                    best_gain, best_move = gain, (i,)
            if best_move is None:
                cand_set = set(cand)
                for i in cand:
                    xi = x ^ cols[i]
                    others = sorted(
                        {j for j in cand_set if j > i}
                        | {j for j in self.col_neighbors[i] if j not in cand_set}
                    )
                    for j in others:
                        gain = w0 - (xi ^ cols[j]).bit_count()
                        if gain > best_gain:
                            best_gain, best_move = gain, (i, j)
            if best_move is None:
                return combo
            for i in best_move:
                x ^= cols[i]
                combo ^= 1 << i
            if not x:
                return combo

    def flips_to_cells(self, combo: int, n_2cells: int) -> Z2Vector:
        bits = 0
        for i in bits_of(combo):
            bits |= 1 << self.interior_2cells[i]
        return Z2Vector(n_2cells, bits)


def build_ball(c: ChainComplex, center: int, radius: int) -> Ball:
    if not 0 <= center < c.n_cells[0]:
        raise ValueError(f"center {center} out of range")
    return Ball(c, center, radius)


def default_rho(c: ChainComplex, r_dec: int) -> float:
    """Sampling density 1/|ball(2*r_dec)| measured at vertex 0."""
    return 1.0 / len(metric_ball(c, 0, 2 * r_dec))


def sample_balls(
    c: ChainComplex, cfg: DecoderConfig, rng: np.random.Generator
) -> List[Ball]:
    """Thinned random ball placement.

    Candidate centers are an iid Bernoulli(rho) sample of the 0-cells; a
    candidate survives only if no other candidate lies within 2*r_dec, so
    surviving balls are pairwise non-interacting.
    """
    rho = cfg.rho if cfg.rho is not None else default_rho(c, cfg.r_dec)
    n0 = c.n_cells[0]
    draws = rng.random(n0)
    candidates = [v for v in range(n0) if draws[v] < rho]
    cand_set = set(candidates)
    centers = []
    for v in candidates:
        near = c.bfs_distances(v, 2 * cfg.r_dec)
        if all(w == v or w not in cand_set for w in near):
            centers.append(v)
    return [Ball(c, v, cfg.r_dec) for v in centers]


@dataclass
class Cover:
    """A deterministic cover: balls, a coloring, and its color classes.

    Same-color balls are pairwise farther than 2*r_dec apart; a full round
    processes the classes in order as subrounds.
    """

    balls: List[Ball]
    colors: List[int]
    n_colors: int
    color_classes: List[List[int]]


def _torus_cover_centers(c: ChainComplex, r_dec: int) -> List[int]:
    d, L = c.torus_shape
    want = -(-r_dec // 2)  # ceil
    s = 1
    for cand in range(2, L + 1):
        if d * (cand // 2) <= want:
            s = cand
    assert c.coords is not None
    return [v for v in range(c.n_cells[0]) if all(x % s == 0 for x in c.coords[v])]


def _greedy_net_centers(c: ChainComplex, r_dec: int) -> List[int]:
    cover_r = -(-r_dec // 2)
    centers: List[int] = []
    covered: Set[int] = set()
    for v in range(c.n_cells[0]):
        if v not in covered:
            centers.append(v)
            covered.update(c.bfs_distances(v, cover_r))
    return centers


def deterministic_cover(c: ChainComplex, cfg: DecoderConfig) -> Cover:
    """Fixed ball centers covering every 0-cell within ceil(r_dec/2),
    greedily colored so same-color balls never interact. Cached on the
    complex per radius; the result is treated as immutable."""
    r = cfg.r_dec
    cached = c._cache.get(("cover", r))
    if cached is not None:
        return cached
    if c.torus_shape is not None:
        centers = _torus_cover_centers(c, r)
    else:
        centers = _greedy_net_centers(c, r)

    cover_r = -(-r // 2)
    reached: Set[int] = set()
    for v in centers:
        reached.update(c.bfs_distances(v, cover_r))
    if len(reached) != c.n_cells[0]:
        raise RuntimeError("cover construction failed to reach every 0-cell")

    center_set = set(centers)
    colors: List[int] = []
    color_of: Dict[int, int] = {}
    for v in centers:
        near = c.bfs_distances(v, 2 * r)
        used = {color_of[w] for w in near if w in color_of and w != v}
        col = 0
        while col in used:
            col += 1
        color_of[v] = col
        colors.append(col)
    n_colors = max(colors) + 1 if colors else 0
    classes: List[List[int]] = [[] for _ in range(n_colors)]
    for i, col in enumerate(colors):
        classes[col].append(i)
    balls = [Ball(c, v, r) for v in centers]
    cover = Cover(balls=balls, colors=colors, n_colors=n_colors, color_classes=classes)
    c._cache[("cover", r)] = cover
    return cover


def build_cover(c: ChainComplex, cfg: DecoderConfig) -> Cover:
    return deterministic_cover(c, cfg)


def local_correction(
    ball: Ball, s: Syndrome, c: ChainComplex, cfg: DecoderConfig
) -> Z2Vector:
    """Flip chain over 2-cells minimizing the ball's variable syndrome
    weight; see Ball.solve for tie-breaking and exactness."""
    combo = ball.solve(s.chain.bits, cfg.kernel_cap)
    return ball.flips_to_cells(combo, c.n_cells[2])


@dataclass
class DecodeState:
    """Current syndrome (over 1-cells) and accumulated flips (over 2-cells)."""

    complex: ChainComplex
    syndrome: Z2Vector
    frame: Z2Vector

    @classmethod
    def start(cls, c: ChainComplex, syndrome: Z2Vector) -> "DecodeState":
        return cls(c, syndrome, Z2Vector(c.n_cells[2]))


def run_round(
    state: DecodeState,
    cfg: DecoderConfig,
    rng: Optional[np.random.Generator] = None,
    cover: Optional[Cover] = None,
) -> Tuple[DecodeState, Z2Vector]:
    """One decoder round; returns the new state and the flips applied.

    Randomized: one jointly-applied pass over freshly sampled balls.
    Deterministic: the cover's color classes in order, each class applied
    jointly against the syndrome left by the previous class.
    """
    c = state.complex
    b2 = c.boundary(2)
    s_bits = state.syndrome.bits
    total = 0
    if cfg.scheme == "randomized":
        if rng is None:
            rng = np.random.default_rng(cfg.seed)
        for ball in sample_balls(c, cfg, rng):
            combo = ball.solve(s_bits, cfg.kernel_cap)
            for i in bits_of(combo):
                total ^= 1 << ball.interior_2cells[i]
        s_bits ^= b2.mul_bits(total)
    else:
        if cover is None:
            cover = deterministic_cover(c, cfg)
        for cls_indices in cover.color_classes:
            class_flips = 0
            for bi in cls_indices:
                ball = cover.balls[bi]
                combo = ball.solve(s_bits, cfg.kernel_cap)
                for i in bits_of(combo):
                    class_flips ^= 1 << ball.interior_2cells[i]
            if class_flips:
                total ^= class_flips
                s_bits ^= b2.mul_bits(class_flips)
    flips = Z2Vector(c.n_cells[2], total)
    new_state = DecodeState(c, Z2Vector(state.syndrome.n, s_bits), state.frame ^ flips)
    return new_state, flips


@dataclass
class DecodeOutcome:
    converged: bool
    rounds_used: int
    total_flips: Z2Vector
    final: DecodeState


def decode_to_convergence(
    state: DecodeState,
    cfg: DecoderConfig,
    max_rounds: int,
    rng: Optional[np.random.Generator] = None,
    cover: Optional[Cover] = None,
) -> DecodeOutcome:
    """Iterate rounds until the syndrome clears or max_rounds is hit."""
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    if cfg.scheme == "deterministic" and cover is None:
        cover = deterministic_cover(state.complex, cfg)
    total = Z2Vector(state.complex.n_cells[2])
    rounds = 0
    while state.syndrome and rounds < max_rounds:
        state, flips = run_round(state, cfg, rng, cover)
        total = total ^ flips
        rounds += 1
    return DecodeOutcome(
        converged=not state.syndrome,
        rounds_used=rounds,
        total_flips=total,
        final=state,
    )
