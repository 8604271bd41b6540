"""Disjoint fibring of two-valued fragments of classical propositional logic."""
from .syntax import (
    Application,
    Connective,
    Formula,
    FormulaError,
    Signature,
    SkeletalVariable,
    Substitution,
    Variable,
    analyze,
    apply_substitution,
    monoliths,
    parse_formula,
    render_formula,
    skeleton,
)
from .semantics import (
    BooleanMatrix,
    TruthTable,
    builtin_matrix,
    entails,
    eval_formula,
    is_satisfiable,
    truth_table_of_term,
)
from .clones import (
    classify,
    completable_by_top,
    generates_top_clone,
    in_equiv_clone,
    is_functionally_complete,
    post_profile,
    projective_components,
)
from .hilbert import (
    DerivationTree,
    HilbertCalculus,
    InferenceRule,
    bounded_derive,
    builtin_calculus,
    check_derivation,
    merge_calculi,
)
from .fibring import FibredSystem, decide_fibred, equivalent_fibred, is_explosive, saturate
from .collapse import (
    collapse_pair,
    find_significant_unary,
    inequivalence_family,
    merge_is_classical,
    search_discrepancy,
)

__version__ = "0.1.0"

__all__ = [
    "Application",
    "Connective",
    "Formula",
    "FormulaError",
    "Signature",
    "SkeletalVariable",
    "Substitution",
    "Variable",
    "analyze",
    "apply_substitution",
    "monoliths",
    "parse_formula",
    "render_formula",
    "skeleton",
    "BooleanMatrix",
    "TruthTable",
    "builtin_matrix",
    "entails",
    "eval_formula",
    "is_satisfiable",
    "truth_table_of_term",
    "classify",
    "completable_by_top",
    "generates_top_clone",
    "in_equiv_clone",
    "is_functionally_complete",
    "post_profile",
    "projective_components",
    "DerivationTree",
    "HilbertCalculus",
    "InferenceRule",
    "bounded_derive",
    "builtin_calculus",
    "check_derivation",
    "merge_calculi",
    "collapse_pair",
    "find_significant_unary",
    "inequivalence_family",
    "merge_is_classical",
    "search_discrepancy",
    "FibredSystem",
    "decide_fibred",
    "equivalent_fibred",
    "is_explosive",
    "saturate",
]
