from .common.errors import (
    BracketError,
    ConfigError,
    DomainError,
    EvaluationAborted,
    InvalidInput,
    LiebLabError,
)
from .functions.scalar import ScalarFn, build_function
from .lieb.functionals import LiebSpec, lieb_trace, mean_norm_fn
from .linalg.matrices import PosDefMatrix
from .operators.means import OperatorMean, build_mean
from .verifier.pipeline import SuitePipeline, default_pipeline
from .verifier.suites import Suite
from .verifier.trials import ConcavityReport, MidpointTrial, run_midpoint

__all__ = [
    "LiebLabError",
    "InvalidInput",
    "DomainError",
    "BracketError",
    "ConfigError",
    "EvaluationAborted",
    "ScalarFn",
    "build_function",
    "LiebSpec",
    "lieb_trace",
    "mean_norm_fn",
    "PosDefMatrix",
    "OperatorMean",
    "build_mean",
    "SuitePipeline",
    "default_pipeline",
    "Suite",
    "ConcavityReport",
    "MidpointTrial",
    "run_midpoint",
]
