"""Exact reasoning about expertise, soundness and belief change over finite worlds."""

from .collection import (
    CaseCollection,
    WorldSet,
    elementary_closure,
    is_consequence,
    is_elementary,
    mod_of,
    prop_belief_models,
)
from .decomposed import BlockOutput, decomposed_eval
from .errors import (
    BottomReportError,
    BoundednessViolated,
    BudgetExceeded,
    ExpertRevError,
    FormulaSyntaxError,
    NotApplicable,
    ScenarioError,
    UnknownNameError,
)
from .expertise import Partition, Universe, World, enumerate_partitions, enumerate_worlds, get_universe, satisfies
from .operators import (
    OPERATOR_NAMES,
    OperatorOutput,
    RankFunction,
    Report,
    ReportSequence,
    ScoreFunction,
    in_belief,
    in_knowledge,
    make_operator,
)
from .postulates import (
    PostulateReport,
    SelectionScheme,
    SequenceSpace,
    check_agm_star,
    check_h_boundedness,
    check_postulate,
    check_success_variants,
    extract_selection_scheme,
)
from .propositional import RELIABLE, ModelSet, Signature, parse_expertise_formula, parse_formula

__version__ = "0.1.0"
