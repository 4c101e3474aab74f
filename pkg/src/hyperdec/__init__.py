"""Greedy ball-local decoding and memory simulation for homology codes
built from cell complexes."""

from .code import CssCode, Syndrome, Verdict, atomic_decomposition, residual_verdict
from .complexes import (
    ChainComplex,
    ComplexFormatError,
    ComplexValidationError,
    SpacetimeCell,
    build_hypercubic_torus,
    dual_complex,
    dump_complex,
    load_complex,
    metric_ball,
    parse_complex,
    spacelike,
    spacetime_boundary,
    timelike,
)
from .decoder import (
    Ball,
    Cover,
    DecodeOutcome,
    DecodeState,
    DecoderConfig,
    SizeExceededError,
    build_ball,
    build_cover,
    decode_to_convergence,
    deterministic_cover,
    local_correction,
    run_round,
    sample_balls,
)
from .memory import (
    MeasuredSyndrome,
    NoiseConfig,
    SpacetimeChain,
    TrialResult,
    adversarial_chain,
    component_extent,
    components,
    measure_syndrome,
    run_trial,
    sample_error,
    wilson_interval,
)
from .z2 import Z2Matrix, Z2Solver, Z2Vector, kernel_basis, rank, solve

__version__ = "0.1.0"

__all__ = [
    "Ball",
    "ChainComplex",
    "ComplexFormatError",
    "ComplexValidationError",
    "Cover",
    "CssCode",
    "DecodeOutcome",
    "DecodeState",
    "DecoderConfig",
    "MeasuredSyndrome",
    "NoiseConfig",
    "SizeExceededError",
    "SpacetimeCell",
    "SpacetimeChain",
    "Syndrome",
    "TrialResult",
    "Verdict",
    "Z2Matrix",
    "Z2Solver",
    "Z2Vector",
    "adversarial_chain",
    "atomic_decomposition",
    "build_ball",
    "build_cover",
    "build_hypercubic_torus",
    "component_extent",
    "components",
    "decode_to_convergence",
    "deterministic_cover",
    "dual_complex",
    "dump_complex",
    "kernel_basis",
    "load_complex",
    "local_correction",
    "measure_syndrome",
    "metric_ball",
    "parse_complex",
    "rank",
    "residual_verdict",
    "run_round",
    "run_trial",
    "sample_balls",
    "sample_error",
    "solve",
    "spacelike",
    "spacetime_boundary",
    "timelike",
    "wilson_interval",
]
