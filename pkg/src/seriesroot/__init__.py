"""Finite-truncation analysis of polynomial maps as roots of power series."""

__version__ = "0.1.0"

from .errors import (
    DocumentError,
    ExponentSaturationError,
    NumericalBreakdownError,
    PreconditionError,
    SeriesRootError,
)
from .extscalar import ExtScalar
from .jets import Jet, PolyMap, coeff_sequence, iterate_jets, jet_compose
from .polynomials import DensePoly, poly_roots
from .spectral import (
    Regime,
    Verdict,
    build_char_jet_poly,
    classify_regime,
    decompose_expanding,
    eigenvalues,
    linear_part,
)
from .annihilator import minpoly_up_to_degree, poly_divides, verify_annihilates
from .series import SeriesTrunc, circle_product_truncated, goodness_check, weierstrass_truncated
from .univar import (
    choose_constant,
    conjugate_to_origin,
    fixed_points,
    growth_diagnostics,
    monic_normalize,
    residue_sum,
    select_nonattracting,
    shifted_iterate_table,
)
from .orthogonal import orthogonal_solve, solve_about_c
from .documents import parse_map, parse_poly, serialize_map
