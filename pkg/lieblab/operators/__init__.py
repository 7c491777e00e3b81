from .means import BUILTIN_MEANS, OperatorMean, build_mean
from .norms import NormSpec, eval_norm, parse_norm

__all__ = [
    "BUILTIN_MEANS",
    "OperatorMean",
    "build_mean",
    "NormSpec",
    "eval_norm",
    "parse_norm",
]
