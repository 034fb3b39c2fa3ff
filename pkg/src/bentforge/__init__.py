"""Bent and partially bent functions GF(p^n) -> GF(p): exact spectra, classification, merging."""
from .analysis import (
    BentClassification,
    Kind,
    classify,
    is_partially_bent,
    linear_space,
    plateau_order,
)
from .construction import run_pipeline
from .cyclotomic import CycInt
from .finite_field import FieldCtx, InnerProduct, Subspace, default_field, make_field, named_field
from .functions import FpFunction, linear_function, monomial, trace_form
from .poly_repr import UnivariatePoly, algebraic_degree, evaluate, interpolate
from .walsh import WalshSpectrum, walsh_fast, walsh_naive

__all__ = [
    "BentClassification",
    "CycInt",
    "FieldCtx",
    "FpFunction",
    "InnerProduct",
    "Kind",
    "Subspace",
    "UnivariatePoly",
    "WalshSpectrum",
    "algebraic_degree",
    "classify",
    "default_field",
    "evaluate",
    "interpolate",
    "is_partially_bent",
    "linear_function",
    "linear_space",
    "make_field",
    "monomial",
    "named_field",
    "plateau_order",
    "run_pipeline",
    "trace_form",
    "walsh_fast",
    "walsh_naive",
]
