from .conjugate import ConjugateDirection, ConjugateFn, conjugate, mollify
from .scalar import FnFlag, ScalarFn, build_function

__all__ = [
    "ConjugateDirection",
    "ConjugateFn",
    "conjugate",
    "mollify",
    "FnFlag",
    "ScalarFn",
    "build_function",
]
