"""Exact computations around the two-part q-Dyson constant term.

Modules, bottom up: ``qpoly`` (polynomials and rational functions in q),
``laurent`` (Laurent polynomials over those), ``symfun`` (alphabets, complete
and Schur functions), ``ctengine`` (brute-force constant terms), then the
closed forms in ``identities``, the recursions in ``recursion``, the partial
fraction splitting in ``splitting``, the acceptance grids and the ``cli``.
"""

from .ctengine import DysonInstance, d_brute, d_brute_schur, dyson_product, two_part_ct
from .identities import kadell_rhs, qdyson_rhs, vanishing_predicate
from .qpoly import QPoly, ScalarQ, parse_qpoly, parse_scalar, poch_int, q_binomial, q_multinomial
from .recursion import analyze, d_recursive

__all__ = [
    "DysonInstance",
    "QPoly",
    "ScalarQ",
    "analyze",
    "d_brute",
    "d_brute_schur",
    "d_recursive",
    "dyson_product",
    "kadell_rhs",
    "parse_qpoly",
    "parse_scalar",
    "poch_int",
    "q_binomial",
    "q_multinomial",
    "qdyson_rhs",
    "two_part_ct",
    "vanishing_predicate",
]

__version__ = "0.1.0"
