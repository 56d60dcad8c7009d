"""Finite-order moment, subnormality and hyperexpansivity checks for diagonal kernels."""

from .differences import (FINITE_ORDER_CAVEAT, DiffTable, Fail, Indeterminate, PassUpTo,
                          build_table, check_ca, check_ca_via_delta, check_cm)
from .errors import (ContractionError, DisagreementError, DomainError, IncompatibleMeasures,
                     LeftInvertibilityWarning, MomentkitError, NonConvergence, ParseError,
                     RangeError, UnknownKernel)
from .expr import (SeqExpr, add, const, evaluate, is_exact, k_var, mul, poch, poly, pow_k1,
                   power, prefix_tail, recip, render, scalar_mul, values)
from .kernels import KernelSpec, kernel_sum, make, parse_kernel, product
from .parser import parse
from .shifts import (ShiftView, analyze, cauchy_dual, is_completely_hyperexpansive,
                     is_contraction, is_hyponormal, is_subnormal_contraction)

__version__ = "0.1.0"

__all__ = [
    "FINITE_ORDER_CAVEAT", "DiffTable", "Fail", "Indeterminate", "PassUpTo", "build_table",
    "check_ca", "check_ca_via_delta", "check_cm",
    "ContractionError", "DisagreementError", "DomainError", "IncompatibleMeasures",
    "LeftInvertibilityWarning", "MomentkitError", "NonConvergence", "ParseError", "RangeError",
    "UnknownKernel",
    "SeqExpr", "add", "const", "evaluate", "is_exact", "k_var", "mul", "poch", "poly", "pow_k1",
    "power", "prefix_tail", "recip", "render", "scalar_mul", "values",
    "KernelSpec", "kernel_sum", "make", "parse_kernel", "product", "parse",
    "ShiftView", "analyze", "cauchy_dual", "is_completely_hyperexpansive", "is_contraction",
    "is_hyponormal", "is_subnormal_contraction",
]
