"""Bilevel hierarchical clustering by smoothing and DC programming."""

from .continuation import PRESETS, ContinuationSchedule, SolveReport, derive_sigmas, solve
from .dataio import load_dataset, load_points, parse_csv, parse_tsplib
from .dca import DcaTrace, DcOracles, dca_run
from .estimator import BilevelClustering
from .exceptions import (
    BilevelError,
    ConfigError,
    DimensionError,
    DomainError,
    NumericalFailure,
    ParseError,
)
from .initialization import StartSpec, multistart, radial_search, random_start
from .model_one import ModelOne
from .model_two import ModelTwo
from .postprocess import SnappedSolution, discrete_optimum, snap, tree_cost

__version__ = "0.1.0"

__all__ = [
    "BilevelClustering",
    "ModelOne",
    "ModelTwo",
    "ContinuationSchedule",
    "PRESETS",
    "SolveReport",
    "StartSpec",
    "DcOracles",
    "DcaTrace",
    "SnappedSolution",
    "dca_run",
    "derive_sigmas",
    "solve",
    "multistart",
    "radial_search",
    "random_start",
    "snap",
    "tree_cost",
    "discrete_optimum",
    "load_dataset",
    "load_points",
    "parse_csv",
    "parse_tsplib",
    "BilevelError",
    "ConfigError",
    "DimensionError",
    "DomainError",
    "NumericalFailure",
    "ParseError",
]
