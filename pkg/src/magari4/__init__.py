"""The four-element Magari algebra of provability logic.

Formula evaluation and equivalence over the algebra, relation-preservation
analysis, constructive synthesis of realizing formulas, a brute-force
expressibility oracle, and derivation of the four constants from any
twelve-member violating system.
"""

from .algebra import (
    Connective,
    DeltaClass,
    Element,
    ELEMENTS,
    apply,
    box,
    delta,
    delta_class,
    elem_equiv,
    magari_identity_report,
)
from .closure import (
    ClosureFragment,
    SystemSigma,
    closure_fragment,
    contains,
    expressible_constants,
)
from .constants import (
    Derivation,
    InternalProofCheckFailed,
    PreconditionViolated,
    TwelveSystem,
    derive_all_constants,
    lemma1_A,
    lemma2_B,
    lemma3,
    lemma4,
    lemma5,
)
from .formula import (
    Binary,
    Const,
    EvaluationError,
    Formula,
    ParseError,
    Unary,
    Var,
    counterexample,
    equivalent,
    evaluate,
    format_formula,
    free_vars,
    parse,
    substitute,
    substitute_all,
    truth_table,
)
from .preservation import (
    RelationMatrix,
    ViolationWitness,
    builtin_relation,
    classify,
    delta_pairing_relation,
    delta_preserving_tables,
    find_violation,
    i_op,
    preserves,
    preserves_delta_pairing,
)
from .synthesis import AlphaSelector, NotRepresentable, c_alpha, synthesize
from .tables import FuncTable, compose, constant_table, projection

__version__ = "0.1.0"

__all__ = [
    "AlphaSelector",
    "Binary",
    "ClosureFragment",
    "Connective",
    "Const",
    "Derivation",
    "DeltaClass",
    "Element",
    "ELEMENTS",
    "EvaluationError",
    "Formula",
    "FuncTable",
    "InternalProofCheckFailed",
    "NotRepresentable",
    "ParseError",
    "PreconditionViolated",
    "RelationMatrix",
    "SystemSigma",
    "TwelveSystem",
    "Unary",
    "Var",
    "ViolationWitness",
    "apply",
    "box",
    "builtin_relation",
    "c_alpha",
    "classify",
    "closure_fragment",
    "compose",
    "constant_table",
    "contains",
    "counterexample",
    "delta",
    "delta_class",
    "delta_pairing_relation",
    "delta_preserving_tables",
    "derive_all_constants",
    "elem_equiv",
    "equivalent",
    "evaluate",
    "expressible_constants",
    "find_violation",
    "format_formula",
    "free_vars",
    "i_op",
    "lemma1_A",
    "lemma2_B",
    "lemma3",
    "lemma4",
    "lemma5",
    "magari_identity_report",
    "parse",
    "preserves",
    "preserves_delta_pairing",
    "projection",
    "substitute",
    "substitute_all",
    "synthesize",
    "truth_table",
]
