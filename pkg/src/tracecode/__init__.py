"""Exact-arithmetic toolkit for the trace codes C_{D_a} over F_p.

D_a = {x in GF(p^m) : Tr(x) = 1, Tr(a x) = 0} and the codeword of b is
(Tr(b x^2)) for x in D_a.
"""

from .closed_form import TheoremCase, classify_case, mds_check, predict_cwe, predict_dual, predict_wd
from .codes import (
    CompleteWeightEnumerator,
    DefiningSet,
    DualLowWeights,
    WeightDistribution,
    codeword,
    defining_set,
    dual_low_weights_columns,
    dual_low_weights_moments,
    enumerate_code,
    generator_matrix,
    min_distance,
)
from .errors import TraceCodeError
from .field import FieldCtx, FieldElement, element_from_exponent, make_field, trace

__version__ = "0.1.0"

__all__ = [
    "CompleteWeightEnumerator",
    "DefiningSet",
    "DualLowWeights",
    "FieldCtx",
    "FieldElement",
    "TheoremCase",
    "TraceCodeError",
    "WeightDistribution",
    "classify_case",
    "codeword",
    "defining_set",
    "dual_low_weights_columns",
    "dual_low_weights_moments",
    "element_from_exponent",
    "enumerate_code",
    "generator_matrix",
    "make_field",
    "mds_check",
    "min_distance",
    "predict_cwe",
    "predict_dual",
    "predict_wd",
    "trace",
]
