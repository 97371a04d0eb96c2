"""Counterfactual causes over basic action theories.

The engine parses a small domain language into a basic action theory
(initial state, one precondition clause per action, one successor state
axiom per fluent), evaluates and regresses queries over finite object
domains, and computes three families of causes: minimal causes over all
executable traces, achievement causes inside a given narrative, and actual
causes in finite structural equation models for comparison.

Quantifiers range over the declared object constants; that finite-domain
restriction is global and deliberate.
"""

from .logic import (
    ActionTerm,
    After,
    And,
    Box,
    Equal,
    Exists,
    FALSE,
    FluentAtom,
    Forall,
    Formula,
    GroundAction,
    LanguageError,
    Not,
    ObjName,
    Or,
    Poss,
    SortError,
    TRUE,
    Term,
    Trace,
    Var,
    Vocabulary,
    free_vars,
    is_static,
    simplify,
    substitute,
)
from .theory import (
    ACTION_VAR,
    BasicActionTheory,
    InitialTheory,
    PreconditionClause,
    SuccessorStateAxiom,
    ValidationReport,
    affected_fluents,
    poss_rhs,
    ssa_instance,
    validate,
)
from .evaluator import (
    EvaluationError,
    ExecutabilityReport,
    StateAssignment,
    Verdict,
    entails,
    enumerate_executable,
    eval_at,
    eval_static,
    executability,
    initial_states,
    is_executable,
    successor_state,
)
from .regression import RegressionResult, regress, regress_step
from .cause import (
    AchievementAnswer,
    CausalSetting,
    MinimalCauseAnswer,
    SettingError,
    achievement_cause,
    filter_trace,
    fluent_footprint,
    minimal_causes,
)
from .bschain import (
    ActionSequencePair,
    CausalChain,
    InclusionReport,
    achievement_pair,
    bs_chain,
    chain_of,
    verify_chain_inclusion,
)
from .hpmodels import (
    Context,
    HPCause,
    HPModel,
    Intervention,
    ModelError,
    VarDecl,
    actual_causes,
    intervene,
    satisfies,
    solve,
)
from .parser import (
    ParseError,
    ParsedFile,
    TheoryValidationError,
    parse_file,
    parse_goal,
    parse_query,
    parse_theory,
    parse_trace,
)
from .render import render_formula, render_file, to_json

__version__ = "0.1.0"
