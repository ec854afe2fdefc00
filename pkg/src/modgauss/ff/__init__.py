"""Function-field L-functions over finite fields."""
from .characters import (MultCharacter, companion_sum, companion_sums_all,
                         deligne_polynomial, is_admissible)
from .field import DESK_BUDGET, FieldTower, field_tower
from .lfunc import (ConjugacyClass, EquidistReport, LPolynomial, Symmetry,
                    central_value, check_functional_equation, dirichlet_family,
                    equidist_diagnostic, hyperelliptic_l, l_polynomial,
                    newton_coefficients, power_sums_from_coefficients,
                    verify_rh_and_unitarize)

__all__ = [
    "MultCharacter", "companion_sum", "companion_sums_all", "deligne_polynomial",
    "is_admissible", "DESK_BUDGET", "FieldTower", "field_tower", "ConjugacyClass",
    "EquidistReport", "LPolynomial", "Symmetry", "central_value",
    "check_functional_equation", "dirichlet_family", "equidist_diagnostic",
    "hyperelliptic_l", "l_polynomial", "newton_coefficients",
    "power_sums_from_coefficients", "verify_rh_and_unitarize",
]
