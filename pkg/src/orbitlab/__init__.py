"""Numerical laboratory for scaled orbit geometry on type-A flag manifolds.

Building blocks: Iwasawa factorization and the dressing action on the
triangular dual group, seed minors on the big double Bruhat cell with a
closed-form exponential chart, the dominance cone controlling every decay
rate, closed-form rank-1 sphere geometry, and claim-by-claim verification
engines behind a reproducible command-line runner.
"""

from .cluster import ClusterPoint, Seed, build_seed, detropicalize, minors_map
from .errors import OrbitLabError
from .iwasawa import CartanPoint, casimir, dressing, iwasawa_factor, moment_map
from .tropical import cone_margin, leaf_of, sample_leaf
from .verify import CLAIMS, CheckReport, SGrid, fit_decay_rate

__version__ = "0.1.0"

__all__ = [
    "CLAIMS",
    "CartanPoint",
    "CheckReport",
    "ClusterPoint",
    "OrbitLabError",
    "SGrid",
    "Seed",
    "build_seed",
    "casimir",
    "cone_margin",
    "detropicalize",
    "dressing",
    "fit_decay_rate",
    "iwasawa_factor",
    "leaf_of",
    "minors_map",
    "moment_map",
    "sample_leaf",
    "__version__",
]
