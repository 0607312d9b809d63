"""Norms of differences of singular moduli of level 1, 2 and 3.

Exact divisor-product formulas are reconciled against high-precision
q-series evaluation over complete sets of conjugates.
"""

from .arith import DiscPair, FactoredInteger, F_closed, F_product, epsilon, factorize, kronecker
from .errors import CMNormsError, DomainError, PrecisionError, ResourceError, RootError
from .modfunc import PrecisionContext
from .norms import NormReport, compare, conjugate_values, norm_formula, norm_numeric, paper_table, unit_norm
from .quadforms import GroupSpec, HeegnerPoint, QuadForm, UnimodularMap, class_reps, reduce

__version__ = "0.1.0"

__all__ = [
    "CMNormsError", "DiscPair", "DomainError", "F_closed", "F_product", "FactoredInteger",
    "GroupSpec", "HeegnerPoint", "NormReport", "PrecisionContext", "PrecisionError",
    "QuadForm", "ResourceError", "RootError", "UnimodularMap", "class_reps", "compare",
    "conjugate_values", "epsilon", "factorize", "kronecker", "norm_formula", "norm_numeric",
    "paper_table", "reduce", "unit_norm",
]
