"""Exact computation with differential operators on R^n, their symbols, and
the derivations and automorphisms of the associated algebras."""

from .errors import (
    DimensionError,
    DopalgError,
    ExactnessUnavailable,
    ModeError,
    NotClosedError,
    ParseError,
    PreconditionError,
    UnsupportedFlow,
)
from .scalar import Mode
from .poly import SymbolPoly
from .weyl import WeylOp, full_symbol, quantize_standard, symbol_of_order, weyl_commutator
from .symbols import ClosedOneForm, poisson_bracket
from .derivations import D1Derivation, DDerivation, Divergence, SDerivation
from .flows import AffineMap, FlowField, flow_at
from .automorphisms import NotIntegrable, one_param_group
from .textio import read_oneform, read_operator, read_symbol

__version__ = "0.1.0"

__all__ = [
    "AffineMap",
    "ClosedOneForm",
    "D1Derivation",
    "DDerivation",
    "DimensionError",
    "Divergence",
    "DopalgError",
    "ExactnessUnavailable",
    "FlowField",
    "Mode",
    "ModeError",
    "NotClosedError",
    "NotIntegrable",
    "ParseError",
    "PreconditionError",
    "SDerivation",
    "SymbolPoly",
    "UnsupportedFlow",
    "WeylOp",
    "flow_at",
    "full_symbol",
    "one_param_group",
    "poisson_bracket",
    "quantize_standard",
    "read_oneform",
    "read_operator",
    "read_symbol",
    "symbol_of_order",
    "weyl_commutator",
]
