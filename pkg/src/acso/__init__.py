"""Exact obstruction calculus for almost complex structures.

The package decides, from characteristic-class data presented over finite
graded rings, whether an oriented real vector bundle can admit an almost
complex structure: it evaluates the integral Stiefel-Whitney class W_3,
Massey's two theorems on higher obstructions, and the rank-specific
top-degree criteria, all in exact integer arithmetic.
"""

from .intlin import (
    AbelianGroupDescriptor,
    IntMatrix,
    SmithDecomposition,
    group_from_presentation,
    hermite_basis,
    smith_normal_form,
    solve_integer_linear,
)
from .gradedring import (
    CoefficientMap,
    ConfluenceError,
    DegreeError,
    Generator,
    GradedRing,
    LiftSearch,
    NoIntegralLift,
    RewriteRule,
    RingElement,
    RingError,
    RingPresentation,
    RingSystem,
    SignRuleError,
    any_integral_lift,
    apply_map,
    build_ring,
    cup,
    divide_by,
    integral_lifts,
    pontryagin_square,
    sq1_derivation,
)
from .obstruct import (
    BudgetExceeded,
    BundleData,
    ChernCandidate,
    DataValidationError,
    DivisibilityViolation,
    NoSolution,
    ObstructionReport,
    Pairing,
    SearchOutcome,
    Verdict,
    WuCheck,
    acs_verdict,
    construct_w4m_lift,
    first_obstruction,
    homotopy_group,
    integral_sw,
    obstruction_denominator,
    rank6_second_obstruction,
    search_vanishing_lifts,
    survey_candidates,
    theorem1_obstruction,
    theorem2_class,
    validate_wu_formula,
    wu_dim4_obstruction,
)
from .spacefile import (
    SpaceFile,
    SpaceFileError,
    dump_space_file,
    load_space_file,
    parse_space_file,
)
from .report import exit_code, render_json, render_text, report_doc

__version__ = "0.1.0"

__all__ = [
    "AbelianGroupDescriptor", "IntMatrix", "SmithDecomposition",
    "group_from_presentation", "hermite_basis", "smith_normal_form",
    "solve_integer_linear",
    "CoefficientMap", "ConfluenceError", "DegreeError", "Generator",
    "GradedRing", "LiftSearch", "NoIntegralLift", "RewriteRule",
    "RingElement", "RingError", "RingPresentation", "RingSystem",
    "SignRuleError", "any_integral_lift", "apply_map", "build_ring", "cup",
    "divide_by", "integral_lifts", "pontryagin_square", "sq1_derivation",
    "BudgetExceeded", "BundleData", "ChernCandidate", "DataValidationError",
    "DivisibilityViolation", "NoSolution", "ObstructionReport", "Pairing",
    "SearchOutcome", "Verdict", "WuCheck", "acs_verdict",
    "construct_w4m_lift", "first_obstruction", "homotopy_group",
    "integral_sw", "obstruction_denominator", "rank6_second_obstruction",
    "search_vanishing_lifts", "survey_candidates", "theorem1_obstruction",
    "theorem2_class", "validate_wu_formula", "wu_dim4_obstruction",
    "SpaceFile", "SpaceFileError", "dump_space_file", "load_space_file",
    "parse_space_file",
    "exit_code", "render_json", "render_text", "report_doc",
    "__version__",
]
