"""Noisy quantum-memory simulation with spacetime history recording.

Each step applies fresh data noise, places decoding balls, takes one
noisy syndrome measurement restricted to the edges those balls can see,
and runs one decoder round against that measurement. The true net change
of the data (noise plus correction) is recorded as a spacelike 2-chain at
that time slice, and the true residual syndrome entering the step as a
timelike chain on the preceding interval. The recorded chain has zero
spacetime boundary exactly when the final residual syndrome is zero.

A trial is tau noisy steps followed by up to delta noise-free rounds with
exact measurement; it ends in "success" (syndrome cleared, residual in
the image of the flip boundary), "logical" (cleared but homologically
nontrivial), or "timeout".
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .code import CssCode, Syndrome, Verdict, residual_verdict
from .complexes import (
    ChainComplex,
    SpacetimeCell,
    spacelike,
    spacetime_boundary,
    timelike,
)
from .decoder import Ball, Cover, DecoderConfig, deterministic_cover, sample_balls
from .z2 import Z2Vector, bits_of

__all__ = [
    "MeasuredSyndrome",
    "NoiseConfig",
    "SpacetimeChain",
    "TrialResult",
    "adversarial_chain",
    "component_extent",
    "components",
    "measure_syndrome",
    "run_trial",
    "sample_error",
    "wilson_interval",
]


@dataclass
class NoiseConfig:
    """Per-step noise rates: p_flip on 2-cells, q_meas on measured edges.

    mode "adversarial" ignores p_flip and injects one connected 2-chain of
    chain_weight cells at the first noisy step only.
    """

    p_flip: float = 0.0
    q_meas: float = 0.0
    mode: str = "iid"
    chain_weight: int = 0

    def __post_init__(self):
        if not 0 <= self.p_flip <= 1 or not 0 <= self.q_meas <= 1:
            raise ValueError("rates must lie in [0, 1]")
        if self.mode not in ("iid", "adversarial"):
            raise ValueError(f"unknown noise mode {self.mode!r}")
        if self.mode == "adversarial" and self.chain_weight < 1:
            raise ValueError("adversarial mode needs chain_weight >= 1")


def adversarial_chain(
    c: ChainComplex, weight: int, rng: np.random.Generator
) -> Z2Vector:
    """A connected random 2-chain of the given weight (cells sharing
    1-cells form the connectivity), grown by seeded frontier expansion."""
    n2 = c.n_cells[2]
    if weight > n2:
        raise ValueError(f"chain weight {weight} exceeds {n2} cells")
    start = int(rng.integers(n2))
    chosen = {start}
    frontier = set()

    def widen(q: int):
        for e in c.boundary_support(2, q):
            for nb in c.cofaces(1)[e]:
                if nb not in chosen:
                    frontier.add(nb)

    widen(start)
    while len(chosen) < weight:
        if not frontier:
            raise ValueError("complex too small for connected chain growth")
        pick = sorted(frontier)[int(rng.integers(len(frontier)))]
        frontier.discard(pick)
        chosen.add(pick)
        widen(pick)
    return Z2Vector.from_support(n2, chosen)


def sample_error(
    c: ChainComplex, cfg: NoiseConfig, rng: np.random.Generator
) -> Z2Vector:
    """One step of data noise on the 2-cells."""
    n2 = c.n_cells[2]
    if cfg.mode == "adversarial":
        return adversarial_chain(c, cfg.chain_weight, rng)
    if cfg.p_flip == 0:
        return Z2Vector(n2)
    draws = rng.random(n2)
    bits = 0
    for q in np.flatnonzero(draws < cfg.p_flip):
        bits |= 1 << int(q)
    return Z2Vector(n2, bits)


class MeasuredSyndrome(NamedTuple):
    """Syndrome bits on the measured edges only; mask marks which edges
    were measured at all (absent bits mean no outcome, not outcome 0)."""

    bits: int
    mask: int


def measure_syndrome(
    code: CssCode,
    error: Z2Vector,
    balls: Sequence[Ball],
    q_meas: float,
    rng: Optional[np.random.Generator] = None,
) -> MeasuredSyndrome:
    """One noisy readout of the edges visible to the given balls."""
    mask = 0
    for ball in balls:
        mask |= ball.mask_meas
    true_bits = code.z_checks.mul_bits(error.bits) & mask
    if q_meas > 0:
        if rng is None:
            raise ValueError("q_meas > 0 needs an rng")
        draws = rng.random(code.complex.n_cells[1])
        for e in bits_of(mask):
            if draws[e] < q_meas:
                true_bits ^= 1 << e
    return MeasuredSyndrome(true_bits, mask)


@dataclass
class SpacetimeChain:
    """Recorded history: slices[t] holds net 2-cell flips at slice t,
    intervals[i-1] the true residual syndrome over interval i."""

    n_1cells: int
    n_2cells: int
    slices: List[int] = field(default_factory=list)
    intervals: List[int] = field(default_factory=list)

    @property
    def tau(self) -> int:
        return len(self.slices) - 1

    def cells(self) -> List[SpacetimeCell]:
        out: List[SpacetimeCell] = []
        for t, bits in enumerate(self.slices):
            out.extend(spacelike(q, t) for q in bits_of(bits))
        for i, bits in enumerate(self.intervals, start=1):
            out.extend(timelike(s, i) for s in bits_of(bits))
        return out

    def is_closed(self, c: ChainComplex) -> bool:
        return not spacetime_boundary(self.cells(), c, self.tau)


def components(
    chain: SpacetimeChain, c: ChainComplex, r_link: int
) -> List[List[SpacetimeCell]]:
    """Connected components of the recorded chain.

    Two spacelike cells in the same slice link when their cell distance is
    at most r_link (one round of ball corrections can span that far); a
    spacelike cell links to the timelike syndrome cells it borders on the
    adjacent intervals; timelike cells link within an interval by shared
    0-cells and across consecutive intervals on the same edge.
    """
    cells = chain.cells()
    index = {cell: i for i, cell in enumerate(cells)}
    parent = list(range(len(cells)))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a: int, b: int):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra

    by_slice: dict = {}
    by_interval: dict = {}
    for cell in cells:
        if cell.kind == "spacelike":
            by_slice.setdefault(cell.time, []).append(cell)
        else:
            by_interval.setdefault(cell.time, []).append(cell)

    if by_slice:
        m22 = c.cell_distance_matrix(2, 2)
        for group in by_slice.values():
            qs = np.array([a.space_index for a in group], dtype=np.intp)
            sub = m22[np.ix_(qs, qs)]
            for i, j in np.argwhere((sub >= 0) & (sub <= r_link)):
                if i < j:
                    union(index[group[i]], index[group[j]])

    for t, group in by_slice.items():
        for a in group:
            edges = c.boundary_support(2, a.space_index)
            for i in (t, t + 1):
                for s in edges:
                    other = timelike(s, i)
                    if other in index:
                        union(index[a], index[other])

    if by_interval:
        m11 = c.cell_distance_matrix(1, 1)
        for i, group in by_interval.items():
            ss = np.array([a.space_index for a in group], dtype=np.intp)
            sub = m11[np.ix_(ss, ss)]
            # edges share a 0-cell exactly when their cell distance is 0
            for j, k in np.argwhere(sub == 0):
                if j < k:
                    union(index[group[j]], index[group[k]])
            for a in group:
                succ = timelike(a.space_index, i + 1)
                if succ in index:
                    union(index[a], index[succ])

    groups: dict = {}
    for i, cell in enumerate(cells):
        groups.setdefault(find(i), []).append(cell)
    return [groups[r] for r in sorted(groups, key=lambda r: min(index[x] for x in groups[r]))]


def component_extent(
    comp: Sequence[SpacetimeCell], c: ChainComplex
) -> Tuple[int, int]:
    """(spatial diameter, enclosing radius) of a component.

    Diameter is the max cell distance between members; enclosing radius
    the best max distance from a member chosen as center. A component
    whose diameter stays below systole_hint - 2*r_dec cannot wrap a
    noncontractible cycle.
    """
    # distances ignore time, so distinct spatial cells suffice
    spatial = sorted({(2 if x.kind == "spacelike" else 1, x.space_index) for x in comp})
    qs = np.array([s for k, s in spatial if k == 2], dtype=np.intp)
    ss = np.array([s for k, s in spatial if k == 1], dtype=np.intp)
    n = len(qs) + len(ss)
    if n == 1:
        return 0, 0
    dmat = np.zeros((n, n), dtype=np.int64)
    nq = len(qs)
    if nq:
        dmat[:nq, :nq] = c.cell_distance_matrix(2, 2)[np.ix_(qs, qs)]
    if len(ss):
        dmat[nq:, nq:] = c.cell_distance_matrix(1, 1)[np.ix_(ss, ss)]
    if nq and len(ss):
        cross = c.cell_distance_matrix(2, 1)[np.ix_(qs, ss)]
        dmat[:nq, nq:] = cross
        dmat[nq:, :nq] = cross.T
    ecc = dmat.max(axis=1)
    return int(ecc.max()), int(ecc.min())


@dataclass
class TrialResult:
    verdict: str  # "success" | "logical" | "timeout"
    rounds_used: int  # noise-free rounds consumed after the noisy phase
    max_component_cells: int
    max_component_diameter: int
    syndrome_weights: List[int]  # residual weight entering each step, then final
    error_weights: List[int]  # true error weight after each step
    chain: Optional[SpacetimeChain]
    seed: object = None


def _decode_one_round(
    code: CssCode,
    meas_bits: int,
    balls: Sequence[Ball],
    subrounds: Sequence[Sequence[int]],
    cfg: DecoderConfig,
) -> int:
    """One round against a fixed measurement, updating it by the known
    boundary of the applied flips between subrounds. Returns flip bits."""
    b2 = code.z_checks
    total = 0
    for group in subrounds:
        group_flips = 0
        for bi in group:
            ball = balls[bi]
            combo = ball.solve(meas_bits, cfg.kernel_cap)
            for i in bits_of(combo):
                group_flips ^= 1 << ball.interior_2cells[i]
        if group_flips:
            total ^= group_flips
            meas_bits ^= b2.mul_bits(group_flips)
    return total


def run_trial(
    code: CssCode,
    tau: int,
    dec_cfg: DecoderConfig,
    noise_cfg: NoiseConfig,
    rng: np.random.Generator,
    *,
    delta: Optional[int] = None,
    initial_error: Optional[Z2Vector] = None,
    record: bool = True,
) -> TrialResult:
    """Simulate one memory trial; see the module docstring for the protocol.

    delta defaults to ceil(4 * log2(n_qubits)). The spacetime chain is
    recorded over the noisy phase and the cleanup rounds actually run, so
    on success it is closed.
    """
    c = code.complex
    n1, n2 = c.n_cells[1], c.n_cells[2]
    if delta is None:
        delta = math.ceil(4 * math.log2(max(2, n2)))

    cover: Optional[Cover] = None
    if dec_cfg.scheme == "deterministic":
        cover = deterministic_cover(c, dec_cfg)

    error = initial_error if initial_error is not None else Z2Vector(n2)
    chain = SpacetimeChain(n1, n2) if record else None
    if chain is not None:
        chain.slices.append(error.bits)

    syndrome_weights: List[int] = []
    error_weights: List[int] = []
    first_noisy = True

    def step(noisy: bool):
        nonlocal error, first_noisy
        sigma_before = code.z_checks.mul_bits(error.bits)
        syndrome_weights.append(sigma_before.bit_count())
        if noisy:
            if noise_cfg.mode == "adversarial" and not first_noisy:
                e = Z2Vector(n2)
            else:
                e = sample_error(c, noise_cfg, rng)
            first_noisy = False
        else:
            e = Z2Vector(n2)
        error = error ^ e
        if dec_cfg.scheme == "randomized":
            balls = sample_balls(c, dec_cfg, rng)
            subrounds: Sequence[Sequence[int]] = [list(range(len(balls)))]
        else:
            assert cover is not None
            balls = cover.balls
            subrounds = cover.color_classes
        q = noise_cfg.q_meas if noisy else 0.0
        meas = measure_syndrome(code, error, balls, q, rng if noisy else None)
        flips = _decode_one_round(code, meas.bits, balls, subrounds, dec_cfg)
        error = error ^ Z2Vector(n2, flips)
        if chain is not None:
            chain.intervals.append(sigma_before)
            chain.slices.append(e.bits ^ flips)
        error_weights.append(error.weight)

    for _ in range(tau):
        step(noisy=True)

    rounds_used = 0
    while code.z_checks.mul_bits(error.bits) and rounds_used < delta:
        step(noisy=False)
        rounds_used += 1

    if code.z_checks.mul_bits(error.bits):
        verdict = "timeout"
    else:
        v = residual_verdict(code, error)
        verdict = "success" if v is Verdict.TRIVIAL else "logical"

    max_cells = 0
    max_diam = 0
    if chain is not None and (any(chain.slices) or any(chain.intervals)):
        comps = components(chain, c, 2 * dec_cfg.r_dec)
        for comp in comps:
            if len(comp) > max_cells:
                max_cells = len(comp)
            diam, _ = component_extent(comp, c)
            if diam > max_diam:
                max_diam = diam
    return TrialResult(
        verdict=verdict,
        rounds_used=rounds_used,
        max_component_cells=max_cells,
        max_component_diameter=max_diam,
        syndrome_weights=syndrome_weights,
        error_weights=error_weights,
        chain=chain,
    )


def wilson_interval(k: int, n: int, z: float = 1.96) -> Tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if n == 0:
        return 0.0, 1.0
    phat = k / n
    denom = 1 + z * z / n
    center = (phat + z * z / (2 * n)) / denom
    half = z * math.sqrt(phat * (1 - phat) / n + z * z / (4 * n * n)) / denom
    return max(0.0, center - half), min(1.0, center + half)
