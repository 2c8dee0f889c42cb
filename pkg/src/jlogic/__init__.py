"""Toolkit for an intuitionistic justification logic with factivity and
positive introspection: syntax, Hilbert-style proof checking, constructive
metatheory (deduction and internalization), finite modular-model semantics,
countermodel search, and bounded prime-set saturation.
"""

from jlogic.syntax import (
    App,
    Atom,
    Bang,
    Constant,
    Falsum,
    FALSUM,
    Formula,
    Implies,
    Just,
    And,
    Or,
    ParseError,
    Sum,
    Term,
    Variable,
    parse_formula,
    parse_term,
    print_formula,
    print_term,
    subformulas,
    subterms,
)
from jlogic.proof_system import (
    AXIOM_TAGS,
    AxiomNecessitation,
    AxiomRule,
    CheckReport,
    ConstantSpecification,
    Derivable,
    Hypothesis,
    HypothesisNotFound,
    ModusPonens,
    NotAppropriate,
    Proof,
    ProofStep,
    UnknownAtBound,
    bounded_derive,
    check_proof,
    deduce,
    internalize,
    match_axiom,
    match_schema,
    parse_cs,
    parse_proof,
    print_cs,
    print_proof,
)
from jlogic.semantics import (
    BasicEvaluation,
    CheckVerdict,
    Countermodel,
    UniverseNotClosed,
    Violation,
    check_validity,
    close_evidence,
    evaluate_truth,
    find_countermodel,
    parse_model,
    print_model,
    validate_model,
)
from jlogic.saturation import (
    BoundedTheory,
    CanonicalModel,
    CapExceeded,
    DerivabilityOracle,
    FailedPrecondition,
    FormulaUniverse,
    PrimeVerdict,
    RefutedBySemantics,
    Unknown,
    UniverseSpec,
    bounded_canonical_model,
    check_prime,
    inverse_evidence,
    parse_universe,
    prime_saturate,
    split_disjunction,
)

__all__ = [
    "App",
    "Atom",
    "Bang",
    "Constant",
    "Falsum",
    "FALSUM",
    "Formula",
    "Implies",
    "Just",
    "And",
    "Or",
    "ParseError",
    "Sum",
    "Term",
    "Variable",
    "parse_formula",
    "parse_term",
    "print_formula",
    "print_term",
    "subformulas",
    "subterms",
    "AXIOM_TAGS",
    "AxiomNecessitation",
    "AxiomRule",
    "CheckReport",
    "ConstantSpecification",
    "Derivable",
    "Hypothesis",
    "HypothesisNotFound",
    "ModusPonens",
    "NotAppropriate",
    "Proof",
    "ProofStep",
    "UnknownAtBound",
    "bounded_derive",
    "check_proof",
    "deduce",
    "internalize",
    "match_axiom",
    "match_schema",
    "parse_cs",
    "parse_proof",
    "print_cs",
    "print_proof",
    "BasicEvaluation",
    "CheckVerdict",
    "Countermodel",
    "UniverseNotClosed",
    "Violation",
    "check_validity",
    "close_evidence",
    "evaluate_truth",
    "find_countermodel",
    "parse_model",
    "print_model",
    "validate_model",
    "BoundedTheory",
    "CanonicalModel",
    "CapExceeded",
    "DerivabilityOracle",
    "FailedPrecondition",
    "FormulaUniverse",
    "PrimeVerdict",
    "RefutedBySemantics",
    "Unknown",
    "UniverseSpec",
    "bounded_canonical_model",
    "check_prime",
    "inverse_evidence",
    "parse_universe",
    "prime_saturate",
    "split_disjunction",
]

__version__ = "0.1.0"
