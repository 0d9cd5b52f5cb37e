"""Desk-scale numerical laboratory for random displacement Schrodinger operators.

Subpackages split along the experiment pipeline: grids/sites assemble the
operators, eigen solves and counts, landscape and configs probe the
single-cell energy surface and multi-cell pasting, mc and ids run the
Monte Carlo and density-of-states experiments, cli fronts everything with
reproducible manifests.
"""

__version__ = "0.1.0"

from .errors import (
    AlternativeTwoError,
    CapacityError,
    ConfigError,
    ConvergenceError,
    InconclusiveError,
    RdmLabError,
    ResolutionError,
    SiteError,
)
from .grids import Grid, assemble, build_laplacian
from .sites import (
    DisplacementConfig,
    DisplacementLaw,
    SingleSite,
    default_site,
    make_alt2_site,
    minimizer_config,
    sample_config,
)

__all__ = [
    "AlternativeTwoError",
    "CapacityError",
    "ConfigError",
    "ConvergenceError",
    "DisplacementConfig",
    "DisplacementLaw",
    "Grid",
    "InconclusiveError",
    "RdmLabError",
    "ResolutionError",
    "SingleSite",
    "SiteError",
    "assemble",
    "build_laplacian",
    "default_site",
    "make_alt2_site",
    "minimizer_config",
    "sample_config",
]
