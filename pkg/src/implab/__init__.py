"""Desk-scale verification and discovery engine for impossibility theorems
and second-price auction properties."""

__version__ = "0.1.0"

from .orders import LinearOrder, Profile, all_linear_orders, all_profiles, bits_of_order, kendall_tau, order_of_bits
from .satkit import Cnf, SolveResult, encode_arrow, enumerate_models, from_dimacs, solve, to_dimacs

__all__ = [
    "__version__",
    "LinearOrder",
    "Profile",
    "all_linear_orders",
    "all_profiles",
    "bits_of_order",
    "kendall_tau",
    "order_of_bits",
    "Cnf",
    "SolveResult",
    "solve",
    "enumerate_models",
    "to_dimacs",
    "from_dimacs",
    "encode_arrow",
]
