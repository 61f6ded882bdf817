"""smaclab: a desk-scale laboratory for the two-user state-dependent MAC
with asymmetric state knowledge.

Submodules: probability objects and the factorized joint (``probability``),
information measures (``information``), rate-region search (``region``),
symbolic Fourier-Motzkin elimination (``fme``), brute-force references
(``oracle``), and the random-coding simulators (``sim``).
"""

__version__ = "0.1.0"

from .probability import (
    Alphabet,
    ConditionalKernel,
    FinitePmf,
    JointDistribution,
    build_joint,
    marginalize,
    validate,
)
from .information import cond_mutual_info, entropy, eval_atoms
from .region import (
    RatePair,
    RegionFrontier,
    SearchConfig,
    compute_region,
    compute_region_constrained,
    convexify,
    pair_bounds,
    region_distance,
)
from .typicality import TypicalityParams, is_jointly_typical

__all__ = [
    "Alphabet",
    "ConditionalKernel",
    "FinitePmf",
    "JointDistribution",
    "RatePair",
    "RegionFrontier",
    "SearchConfig",
    "TypicalityParams",
    "build_joint",
    "compute_region",
    "compute_region_constrained",
    "cond_mutual_info",
    "convexify",
    "entropy",
    "eval_atoms",
    "is_jointly_typical",
    "marginalize",
    "pair_bounds",
    "region_distance",
    "validate",
]
