"""Stratified axiom programs: parsing, evaluation, and the rewrite that
eliminates negative occurrences of derived predicates via stage-order
relations, verified against brute-force oracles on small universes."""

from .logic import (
    And,
    Atom,
    Axiom,
    AxiomProgram,
    Bottom,
    Const,
    Exists,
    Forall,
    Formula,
    LogicError,
    Not,
    OccurrenceRef,
    Or,
    Predicate,
    SignatureError,
    StratificationError,
    Top,
    Var,
    Violation,
    affected_predicates,
    check_stratified,
    collapse_double_negation,
    free_vars,
    iter_atoms,
    negative_occurrences,
    node_count,
    prune_constants,
    substitute,
)
from .parser import (
    Diagnostic,
    ParseError,
    format_formula,
    parse_program,
    parse_state,
    print_program,
    print_state,
    program_to_json,
)
from .evaluator import (
    RELATION_NAMES,
    Engine,
    EvalError,
    StageRelations,
    StageTable,
    TruthAssignment,
    Universe,
    check_no_shadowing,
    eval_formula,
    extend,
    extend_in_stages,
    extend_stratum_in_stages,
    stage_relations,
)
from .transformer import (
    ProgramMetrics,
    StageMode,
    StagePredicateFamily,
    StratumMetrics,
    TransformError,
    TransformReport,
    compute_metrics,
    eliminate_negative_occurrences,
    generate_stage_axioms,
    merge_to_single_stratum,
    normalize_stratum,
    substitute_stage,
)
from .verifier import (
    BudgetError,
    CheckResult,
    Counterexample,
    RandomProfile,
    VerificationPlan,
    VerificationResult,
    VerifyError,
    basic_cells,
    check_polarity,
    enumerate_basic_states,
    generate_random_program,
    lint_polarity,
    power_fit,
    run_checks,
    sample_basic_state,
    universe_for,
    verify_aux,
    verify_equivalence,
    verify_order_independence,
    verify_theorem1,
    verify_theorem2,
    worker_count,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
