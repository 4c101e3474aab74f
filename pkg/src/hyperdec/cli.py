"""Command-line front end: code info, one-shot decoding, memory
simulation, and reproducible sweep CSVs.

Exit codes: 0 success or trivial residual, 2 bad input, 3 logical
residual, 4 timeout, 5 local solver size cap exceeded.
"""
from __future__ import annotations

import argparse
import itertools
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .code import CssCode, Verdict, residual_verdict
from .complexes import (
    ComplexFormatError,
    ComplexValidationError,
    build_hypercubic_torus,
    load_complex,
)
from .decoder import (
    DecodeState,
    DecoderConfig,
    SizeExceededError,
    decode_to_convergence,
)
from .memory import NoiseConfig, run_trial
from .z2 import Z2Vector

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_LOGICAL = 3
EXIT_TIMEOUT = 4
EXIT_SIZE = 5

RNG_NAME = "philox4x64-seedseq"
CSV_HEADER = (
    "L,p,q,r_dec,scheme,trials,successes,logical_failures,timeouts,"
    "mean_rounds,mean_max_component,wall_ms,seed"
)


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.6g}"
    return str(x)


# ----- sweep specification ------------------------------------------------


@dataclass
class SweepSpec:
    """Grid of memory simulations: all (L, p, q, r_dec) combinations at
    fixed dimension. qs = None pairs each p with q = p instead of taking
    the product. Trials at the same index share an RNG stream across grid
    points, so equal-trial points are seed-paired for comparisons."""

    dim: int = 3
    grade: int = 2
    Ls: List[int] = field(default_factory=lambda: [3])
    ps: List[float] = field(default_factory=lambda: [0.01])
    qs: Optional[List[float]] = None
    r_decs: List[int] = field(default_factory=lambda: [2])
    scheme: str = "deterministic"
    tau: int = 4
    trials: int = 20
    delta: Optional[int] = None
    rho: Optional[float] = None
    kernel_cap: int = 24
    seed: int = 0
    out: Optional[str] = None

    def points(self) -> List[Tuple[int, float, float, int]]:
        if self.qs is None:
            pq = [(p, p) for p in self.ps]
        else:
            pq = list(itertools.product(self.ps, self.qs))
        return [
            (L, p, q, r)
            for L in self.Ls
            for (p, q) in pq
            for r in self.r_decs
        ]

    @classmethod
    def from_file(cls, path: str) -> "SweepSpec":
        with open(path) as fh:
            raw = json.load(fh)
        known = {f for f in cls.__dataclass_fields__}
        bad = set(raw) - known
        if bad:
            raise ValueError(f"unknown sweep config keys: {sorted(bad)}")
        return cls(**raw)


@dataclass
class ResultRow:
    L: int
    p: float
    q: float
    r_dec: int
    scheme: str
    trials: int
    successes: int
    logical_failures: int
    timeouts: int
    mean_rounds: float
    mean_max_component: float
    wall_ms: int
    seed: int

    def line(self) -> str:
        vals = [
            self.L, self.p, self.q, self.r_dec, self.scheme, self.trials,
            self.successes, self.logical_failures, self.timeouts,
            self.mean_rounds, self.mean_max_component, self.wall_ms, self.seed,
        ]
        return ",".join(_fmt(v) for v in vals)


def _trial_rng(base_seed: int, trial_index: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=base_seed, spawn_key=(trial_index,))
    return np.random.Generator(np.random.Philox(ss))


def run_sweep_point(spec: SweepSpec, point_index: int) -> ResultRow:
    """All trials for one grid point. Trial t draws from the stream keyed
    by (seed, t) alone, so the result is independent of scheduling and
    grid points are compared with common random numbers."""
    L, p, q, r_dec = spec.points()[point_index]
    c = build_hypercubic_torus(spec.dim, L)
    code = CssCode.from_complex(c, spec.grade)
    dec_cfg = DecoderConfig(
        r_dec=r_dec, rho=spec.rho, kernel_cap=spec.kernel_cap,
        seed=spec.seed, scheme=spec.scheme,
    )
    noise_cfg = NoiseConfig(p_flip=p, q_meas=q)
    successes = logical = timeouts = 0
    rounds_total = 0
    comp_total = 0
    for t in range(spec.trials):
        rng = _trial_rng(spec.seed, t)
        res = run_trial(
            code, spec.tau, dec_cfg, noise_cfg, rng, delta=spec.delta
        )
        if res.verdict == "success":
            successes += 1
        elif res.verdict == "logical":
            logical += 1
        else:
            timeouts += 1
        rounds_total += res.rounds_used
        comp_total += res.max_component_cells
    n = spec.trials
    return ResultRow(
        L=L, p=p, q=q, r_dec=r_dec, scheme=spec.scheme, trials=n,
        successes=successes, logical_failures=logical, timeouts=timeouts,
        mean_rounds=rounds_total / n if n else 0.0,
        mean_max_component=comp_total / n if n else 0.0,
        wall_ms=0, seed=spec.seed,
    )


def _sweep_worker(args: Tuple[dict, int]) -> Tuple[int, ResultRow]:
    raw, idx = args
    return idx, run_sweep_point(SweepSpec(**raw), idx)


def run_sweep(spec: SweepSpec, out) -> None:
    """Write the sweep CSV to the stream; identical bytes for identical
    specs and seeds (wall time goes to stderr, not the file)."""
    points = spec.points()
    t0 = time.monotonic()
    threads = int(os.environ.get("HYPERDEC_THREADS", "0") or "0")
    if threads == 0:
        threads = min(os.cpu_count() or 1, len(points))
    rows: List[Optional[ResultRow]] = [None] * len(points)
    if threads > 1 and len(points) > 1:
        raw = asdict(spec)
        with ProcessPoolExecutor(max_workers=threads) as pool:
            for idx, row in pool.map(
                _sweep_worker, [(raw, i) for i in range(len(points))]
            ):
                rows[idx] = row
    else:
        for i in range(len(points)):
            rows[i] = run_sweep_point(spec, i)
    out.write(f"# rng={RNG_NAME}\n")
    out.write(CSV_HEADER + "\n")
    for row in rows:
        assert row is not None
        out.write(row.line() + "\n")
    elapsed = (time.monotonic() - t0) * 1000
    print(f"sweep: {len(points)} points in {elapsed:.0f} ms", file=sys.stderr)


# ----- shared argument plumbing ------------------------------------------


def _add_complex_args(sub):
    sub.add_argument("--dim", type=int, default=3, help="torus dimension (2..4)")
    sub.add_argument("--L", type=int, default=3, help="torus side length")
    sub.add_argument("--complex", dest="complex_file", metavar="FILE",
                     help="load a complex from FILE instead of building a torus")


def _get_complex(args):
    if args.complex_file:
        return load_complex(args.complex_file)
    return build_hypercubic_torus(args.dim, args.L)


def _parse_error(spec: str, c) -> Z2Vector:
    """cells=ID[,ID..] lists 2-cells; plane=IJ fills the closed IJ
    coordinate plane through the origin of a torus."""
    n2 = c.n_cells[2]
    if spec.startswith("cells="):
        ids = [int(tok) for tok in spec[len("cells="):].split(",") if tok]
        for q in ids:
            if not 0 <= q < n2:
                raise ValueError(f"2-cell id {q} out of range 0..{n2 - 1}")
        return Z2Vector.from_support(n2, ids)
    if spec.startswith("plane="):
        if c.torus_shape is None:
            raise ValueError("plane= errors need a torus complex")
        d, L = c.torus_shape
        digits = [int(ch) for ch in spec[len("plane="):].replace(",", "")]
        if len(digits) != 2 or len(set(digits)) != 2:
            raise ValueError("plane= wants two distinct direction digits")
        i, j = sorted(digits)
        if not 0 <= i < j < d:
            raise ValueError(f"plane directions must lie in 0..{d - 1}")
        subsets = list(itertools.combinations(range(d), 2))
        base = subsets.index((i, j)) * L**d
        cells = [
            base + xi * L**i + xj * L**j
            for xi in range(L)
            for xj in range(L)
        ]
        return Z2Vector.from_support(n2, cells)
    raise ValueError("error spec must start with cells= or plane=")


# ----- subcommands --------------------------------------------------------


def cmd_info(args) -> int:
    c = _get_complex(args)
    code = CssCode.from_complex(c, args.grade)
    print(f"dimension: {c.dim}")
    print("cells per grade: " + " ".join(str(n) for n in c.n_cells))
    print(f"euler characteristic: {c.euler_characteristic()}")
    if c.systole_hint is not None:
        print(f"systole hint: {c.systole_hint}")
    print(f"qubit grade: {code.qubit_grade}")
    print(f"qubits: {code.n_qubits}")
    print(f"logical qubits: {code.n_logical}")
    zmin, zmax = code.check_weights()[0]
    xmin, xmax = code.check_weights()[1]
    print(f"z-check weights: {zmin}..{zmax}")
    print(f"x-check weights: {xmin}..{xmax}")
    return EXIT_OK


def cmd_decode(args) -> int:
    c = _get_complex(args)
    if c.dim < 2:
        raise ValueError("decoding needs 2-cells")
    code = CssCode.from_complex(c, 2)
    error = _parse_error(args.error, c)
    cfg = DecoderConfig(
        r_dec=args.r_dec, rho=args.rho, kernel_cap=args.kernel_cap,
        seed=args.seed, scheme=args.scheme,
    )
    syndrome = Z2Vector(c.n_cells[1], code.z_checks.mul_bits(error.bits))
    state = DecodeState.start(c, syndrome)
    rng = np.random.default_rng(args.seed)
    outcome = decode_to_convergence(state, cfg, args.max_rounds, rng)
    print(f"initial syndrome weight: {syndrome.weight}")
    print(f"rounds used: {outcome.rounds_used}")
    print(f"residual syndrome weight: {outcome.final.syndrome.weight}")
    if not outcome.converged:
        print("verdict: timeout")
        return EXIT_TIMEOUT
    residual = error ^ outcome.total_flips
    v = residual_verdict(code, residual)
    if v is Verdict.TRIVIAL:
        print("verdict: trivial")
        return EXIT_OK
    print("verdict: logical")
    return EXIT_LOGICAL


def cmd_memory_sim(args) -> int:
    c = _get_complex(args)
    code = CssCode.from_complex(c, 2)
    dec_cfg = DecoderConfig(
        r_dec=args.r_dec, rho=args.rho, kernel_cap=args.kernel_cap,
        seed=args.seed, scheme=args.scheme,
    )
    noise_cfg = NoiseConfig(
        p_flip=args.p, q_meas=args.q, mode=args.mode,
        chain_weight=args.chain_weight,
    )
    counts = {"success": 0, "logical": 0, "timeout": 0}
    rounds_total = 0
    comp_total = 0
    weight_rows: List[List[int]] = []
    for t in range(args.trials):
        rng = _trial_rng(args.seed, t)
        res = run_trial(code, args.tau, dec_cfg, noise_cfg, rng, delta=args.delta)
        counts[res.verdict] += 1
        rounds_total += res.rounds_used
        comp_total += res.max_component_cells
        weight_rows.append(res.syndrome_weights)
    n = args.trials
    print(f"trials: {n}")
    print(f"successes: {counts['success']}")
    print(f"logical failures: {counts['logical']}")
    print(f"timeouts: {counts['timeout']}")
    print(f"mean cleanup rounds: {rounds_total / n:.6g}")
    print(f"mean max component cells: {comp_total / n:.6g}")
    if args.weights_out:
        depth = max(len(r) for r in weight_rows)
        with open(args.weights_out, "w") as fh:
            fh.write("round,mean_weight\n")
            for i in range(depth):
                vals = [r[i] if i < len(r) else 0 for r in weight_rows]
                fh.write(f"{i},{_fmt(sum(vals) / n)}\n")
    return EXIT_OK


def cmd_sweep(args) -> int:
    if args.config:
        spec = SweepSpec.from_file(args.config)
    else:
        spec = SweepSpec()
    overrides = {
        "dim": args.dim, "Ls": args.Ls, "ps": args.ps, "qs": args.qs,
        "r_decs": args.r_decs, "scheme": args.scheme, "tau": args.tau,
        "trials": args.trials, "seed": args.seed, "delta": args.delta,
        "rho": args.rho, "kernel_cap": args.kernel_cap, "out": args.out,
    }
    for name, val in overrides.items():
        if val is not None:
            setattr(spec, name, val)
    if spec.out:
        with open(spec.out, "w") as fh:
            run_sweep(spec, fh)
    else:
        run_sweep(spec, sys.stdout)
    return EXIT_OK


def _csv_floats(text: str) -> List[float]:
    return [float(tok) for tok in text.split(",") if tok]


def _csv_ints(text: str) -> List[int]:
    return [int(tok) for tok in text.split(",") if tok]


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="hyperdec",
        description="ball-local decoding of homology codes on cell complexes",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p_info = sub.add_parser("info", help="print code parameters")
    _add_complex_args(p_info)
    p_info.add_argument("--grade", type=int, default=2, help="qubit grade")
    p_info.set_defaults(fn=cmd_info)

    p_dec = sub.add_parser("decode", help="decode one injected error")
    _add_complex_args(p_dec)
    p_dec.add_argument("--error", required=True,
                       help="cells=ID,.. or plane=IJ")
    p_dec.add_argument("--r-dec", type=int, default=2)
    p_dec.add_argument("--scheme", choices=["deterministic", "randomized"],
                       default="deterministic")
    p_dec.add_argument("--rho", type=float, default=None)
    p_dec.add_argument("--kernel-cap", type=int, default=24)
    p_dec.add_argument("--max-rounds", type=int, default=64)
    p_dec.add_argument("--seed", type=int, default=0)
    p_dec.set_defaults(fn=cmd_decode)

    p_mem = sub.add_parser("memory-sim", help="noisy memory trials")
    _add_complex_args(p_mem)
    p_mem.add_argument("--tau", type=int, default=4, help="noisy steps")
    p_mem.add_argument("--p", type=float, default=0.001, help="flip rate")
    p_mem.add_argument("--q", type=float, default=0.001,
                       help="measurement error rate")
    p_mem.add_argument("--mode", choices=["iid", "adversarial"], default="iid")
    p_mem.add_argument("--chain-weight", type=int, default=0)
    p_mem.add_argument("--trials", type=int, default=20)
    p_mem.add_argument("--delta", type=int, default=None,
                       help="cleanup round budget")
    p_mem.add_argument("--r-dec", type=int, default=2)
    p_mem.add_argument("--scheme", choices=["deterministic", "randomized"],
                       default="deterministic")
    p_mem.add_argument("--rho", type=float, default=None)
    p_mem.add_argument("--kernel-cap", type=int, default=24)
    p_mem.add_argument("--seed", type=int, default=0)
    p_mem.add_argument("--weights-out", metavar="FILE",
                       help="write round,mean_weight CSV")
    p_mem.set_defaults(fn=cmd_memory_sim)

    p_sw = sub.add_parser("sweep", help="grid of memory simulations to CSV")
    p_sw.add_argument("--config", metavar="FILE", help="JSON sweep spec")
    p_sw.add_argument("--dim", type=int, default=None)
    p_sw.add_argument("--Ls", type=_csv_ints, default=None)
    p_sw.add_argument("--ps", type=_csv_floats, default=None)
    p_sw.add_argument("--qs", type=_csv_floats, default=None)
    p_sw.add_argument("--r-decs", type=_csv_ints, default=None)
    p_sw.add_argument("--scheme", choices=["deterministic", "randomized"],
                      default=None)
    p_sw.add_argument("--tau", type=int, default=None)
    p_sw.add_argument("--trials", type=int, default=None)
    p_sw.add_argument("--delta", type=int, default=None)
    p_sw.add_argument("--rho", type=float, default=None)
    p_sw.add_argument("--kernel-cap", type=int, default=None)
    p_sw.add_argument("--seed", type=int, default=None)
    p_sw.add_argument("--out", metavar="FILE", help="CSV path (default stdout)")
    p_sw.set_defaults(fn=cmd_sweep)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except SizeExceededError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_SIZE
    except (ComplexFormatError, ComplexValidationError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
