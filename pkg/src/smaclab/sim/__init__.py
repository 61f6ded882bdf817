"""Executable random-coding schemes over the state-dependent MAC.

Three schemes are implemented: per-block codebooks with simultaneous
non-unique decoding (scheme A), a single codebook with cell-partitioned
compression indices and backward decoding (scheme B), and scheme B modified
to decode the compression index uniquely (scheme C).
"""

from .config import ResourceLimits, SchemeContext, SchemeRates, SimConfig
from .codebooks import CodebookA, CodebookB, generate_codebooks_A, generate_codebooks_B
from .schemes import (
    DecodeResult,
    EncodeResult,
    decode_A,
    decode_B_backward,
    decode_C_unique,
    encode_A,
    encode_B,
)
from .montecarlo import SimResult, run_monte_carlo, wilson_interval
from .exact import exact_error_micro
from .probes import ProbeResult, covering_probe, gp_binning_probe, packing_probe

__all__ = [
    "CodebookA",
    "CodebookB",
    "DecodeResult",
    "EncodeResult",
    "ProbeResult",
    "ResourceLimits",
    "SchemeContext",
    "SchemeRates",
    "SimConfig",
    "SimResult",
    "covering_probe",
    "decode_A",
    "decode_B_backward",
    "decode_C_unique",
    "encode_A",
    "encode_B",
    "exact_error_micro",
    "generate_codebooks_A",
    "generate_codebooks_B",
    "gp_binning_probe",
    "packing_probe",
    "run_monte_carlo",
    "wilson_interval",
]
