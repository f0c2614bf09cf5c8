"""Answer Set Programming with Quantifiers: parser, grounder, stable-model engine and evaluator."""

__version__ = "0.1.0"

from .engine import (
    EngineConfig,
    brute_force_answer_sets,
    enumerate_answer_sets,
    gl_reduct,
    is_answer_set,
    is_model,
    minimal_models,
)
from .errors import (
    CapExceeded,
    EngineError,
    EvaluationError,
    GroundingError,
    NotNormalError,
    ParseError,
    QaspError,
    SafetyError,
    SourceSpan,
    StratificationError,
)
from .grounder import GroundProgram, ground, herbrand_base, herbrand_universe
from .model import (
    Atom,
    Program,
    QuantifiedProgram,
    Quantifier,
    Rule,
    at,
    check_stratified,
    format_interpretation,
)
from .parser import dumps_aspq, dumps_program, parse_aspq, parse_program, parse_qdimacs
from .qbf import eval_qbf, qbf_to_aspq
from .qdimacs import Qbf
from .quantified import Verdict, coherent, combine, fix, quantified_answer_sets

__all__ = [
    "Atom",
    "CapExceeded",
    "EngineConfig",
    "EngineError",
    "EvaluationError",
    "GroundProgram",
    "GroundingError",
    "NotNormalError",
    "ParseError",
    "Program",
    "Qbf",
    "QaspError",
    "QuantifiedProgram",
    "Quantifier",
    "Rule",
    "SafetyError",
    "SourceSpan",
    "StratificationError",
    "Verdict",
    "at",
    "brute_force_answer_sets",
    "check_stratified",
    "coherent",
    "combine",
    "dumps_aspq",
    "dumps_program",
    "enumerate_answer_sets",
    "eval_qbf",
    "fix",
    "format_interpretation",
    "gl_reduct",
    "ground",
    "herbrand_base",
    "herbrand_universe",
    "is_answer_set",
    "is_model",
    "minimal_models",
    "parse_aspq",
    "parse_program",
    "parse_qdimacs",
    "qbf_to_aspq",
    "quantified_answer_sets",
]
