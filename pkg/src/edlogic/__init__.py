"""Expected distance on finite metric probability spaces, and a decision
procedure for linear expected-distance formulas."""

from .decision import (Model, SatResult, build_model, check_consistency, entails,
                       extension, satisfies, translate_conjunct)
from .evidence import (MassFunction, SetFunction, alternating_max, alternating_max_multiplicative,
                       alternating_min, belief_from_mass, doubt_from_mass, is_doubt_function,
                       mass_from_doubt, plausibility_from_mass)
from .linarith import (Constraint, FeasibilityResult, LinearConstraintSystem, feasible,
                       feasible_by_elimination)
from .product import (ProductSpace, build_product, cylinder, independent_relative_to_ed,
                      lambda_combine, product_set_distance)
from .space import (Frame, MeasureQuad, MetricProbSpace, dual_measures, ed_set_function,
                    expected_distance, set_distance, validate_space)
from .syntax import atom_basis, parse, print_formula, prop_to_atom_set, to_dnf

__all__ = [
    "Model", "SatResult", "build_model", "check_consistency", "entails", "extension",
    "satisfies", "translate_conjunct", "MassFunction", "SetFunction", "alternating_max",
    "alternating_max_multiplicative", "alternating_min", "belief_from_mass", "doubt_from_mass",
    "is_doubt_function", "mass_from_doubt", "plausibility_from_mass", "Constraint",
    "FeasibilityResult", "LinearConstraintSystem", "feasible", "feasible_by_elimination",
    "ProductSpace", "build_product", "cylinder", "independent_relative_to_ed",
    "lambda_combine", "product_set_distance", "Frame", "MeasureQuad", "MetricProbSpace",
    "dual_measures", "ed_set_function", "expected_distance", "set_distance", "validate_space",
    "atom_basis", "parse", "print_formula", "prop_to_atom_set", "to_dnf"
]

__version__ = "0.1.0"
