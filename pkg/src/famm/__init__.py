"""Standards-transparent self-assessment engine for focus-area maturity models."""

from .model import (
    ApplicabilityCondition,
    Capability,
    Diagnostic,
    FocusArea,
    MaturityModel,
    OrganizationProfile,
    Question,
    QuestionType,
    ScaleValue,
    Standard,
    StandardRef,
    applicable_questions,
    lookup_refs,
    validate_model,
)
from .modelio import (
    AnswersDocument,
    parse_answers,
    parse_model,
    serialize_answers,
    serialize_model,
)
from .planner import ImprovementPlan, ImprovementTask, PlanConfig, generate_plan, plan_what_if
from .report import CoverageMatrix, ReportBundle, build_bundle, coverage_matrix, render
from .scoring import (
    CONTRIBUTION,
    LevelScore,
    MaturityProfile,
    ScoringConfig,
    contribution,
    maturity_level,
    profile,
    score_capability_level,
    what_if,
)
from .seed import load_seed_model, seed_model_bytes
from .session import (
    AnswerRecord,
    Progress,
    Session,
    create_session,
    load_session,
    progress,
    record_answer,
    save_session,
    session_from_answers,
)

__version__ = "0.1.0"

__all__ = [
    "AnswerRecord",
    "AnswersDocument",
    "ApplicabilityCondition",
    "CONTRIBUTION",
    "Capability",
    "CoverageMatrix",
    "Diagnostic",
    "FocusArea",
    "ImprovementPlan",
    "ImprovementTask",
    "LevelScore",
    "MaturityModel",
    "MaturityProfile",
    "OrganizationProfile",
    "PlanConfig",
    "Progress",
    "Question",
    "QuestionType",
    "ReportBundle",
    "ScaleValue",
    "ScoringConfig",
    "Session",
    "Standard",
    "StandardRef",
    "applicable_questions",
    "build_bundle",
    "contribution",
    "coverage_matrix",
    "create_session",
    "generate_plan",
    "load_seed_model",
    "load_session",
    "lookup_refs",
    "maturity_level",
    "parse_answers",
    "parse_model",
    "plan_what_if",
    "profile",
    "progress",
    "record_answer",
    "render",
    "save_session",
    "score_capability_level",
    "seed_model_bytes",
    "serialize_answers",
    "serialize_model",
    "session_from_answers",
    "validate_model",
    "what_if",
]
