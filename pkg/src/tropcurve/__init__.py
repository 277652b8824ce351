"""Exact rational functions on tropical curves and their generator expressions."""

from .extended import INF, NEG_INF, Q, fmt, to_value
from .graph import Point, Subgraph, TropicalCurve, canonical_model, contract_infinite_edges
from .functions import (RationalFunction, cf, cf_point, compare, evaluate, pl_equal, poles,
                        trop_add, trop_inv, trop_mul, trop_pow)
from .expression import eval_expr, generators, parse_expr, print_expr
from .synthesis import (extension_range, decompose_into_cf, express_function,
                        express_point_cf, express_subgraph_cf)

__all__ = [
    "INF", "NEG_INF", "Q", "fmt", "to_value",
    "Point", "Subgraph", "TropicalCurve", "canonical_model", "contract_infinite_edges",
    "RationalFunction", "cf", "cf_point", "compare", "evaluate", "pl_equal", "poles",
    "trop_add", "trop_inv", "trop_mul", "trop_pow",
    "eval_expr", "generators", "parse_expr", "print_expr",
    "extension_range", "decompose_into_cf", "express_function", "express_point_cf",
    "express_subgraph_cf",
]

__version__ = "0.1.0"
