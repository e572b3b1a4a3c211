"""Deterministic scoring: contributions, level scores, maturity, what-if.

Score arithmetic is exact: level scores are rational numbers (unweighted
means of the fixed contribution percentages), so results are identical on
every platform. Rounding happens only at display time, in famm.report.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime
from fractions import Fraction
from typing import Mapping, Sequence

from .model import (
    Capability,
    FocusArea,
    MaturityModel,
    QuestionType,
    ScaleValue,
    UnknownLevel,
    is_applicable,
    iter_questions,
)
from .session import AnswerValue, Session, record_answer

#: Score contribution percentage per implementation level. The order
#: NI < PI < LI < FI is strict by contribution.
CONTRIBUTION: Mapping[ScaleValue, int] = {
    ScaleValue.FI: 100,
    ScaleValue.LI: 85,
    ScaleValue.PI: 50,
    ScaleValue.NI: 0,
}

NO_MATURITY = "none"


def contribution(value: ScaleValue) -> int:
    """The contribution percentage of an implementation level.

    NA carries no contribution at all (it removes the question from both the
    numerator and the denominator) and raises ValueError.
    """
    try:
        return CONTRIBUTION[value]
    except KeyError:
        raise ValueError(f"{value.value} has no score contribution") from None


@dataclass(frozen=True)
class ScoringConfig:
    """Tunables the underlying scale does not fix.

    achievement_threshold: minimum level score (percent) for a level to count
        as achieved; the default 85 means "on average at least largely
        implemented".
    rounding: decimal places used when scores are displayed.
    """

    achievement_threshold: Fraction = Fraction(85)
    rounding: int = 1

    def __post_init__(self):
        threshold = Fraction(self.achievement_threshold)
        object.__setattr__(self, "achievement_threshold", threshold)
        if not 0 < threshold <= 100:
            raise ValueError("achievement_threshold must be in (0, 100]")
        if self.rounding < 0:
            raise ValueError("rounding must be >= 0")


DEFAULT_CONFIG = ScoringConfig()


@dataclass(frozen=True)
class LevelScore:
    focus_area_id: str
    level: str
    score: Fraction
    contributing_question_count: int
    achieved: bool
    vacuous: bool


@dataclass(frozen=True)
class FocusAreaScore:
    focus_area_id: str
    name: str
    maturity_level: str
    score: Fraction
    level_scores: tuple[LevelScore, ...]


@dataclass(frozen=True)
class MaturityProfile:
    """Scores for every focus area and level of one (model, session) pair."""

    focus_areas: tuple[FocusAreaScore, ...]
    overall: Mapping[str, str]
    provisional: bool
    config: ScoringConfig
    model_name: str
    model_version: str
    session_id: str
    session_updated_at: datetime


def _effective_values(
    capability: Capability, session: Session
) -> list[ScaleValue]:
    """Contribution-carrying values of a capability's scale questions.

    Applicability-filtered; unanswered questions count as NI; NA answers are
    excluded entirely.
    """
    values: list[ScaleValue] = []
    for question in capability.questions:
        if question.qtype is not QuestionType.SCALE:
            continue
        if not is_applicable(question, session.profile):
            continue
        record = session.answers.get(question.id)
        value = record.value if record is not None else ScaleValue.NI
        if value is ScaleValue.NA:
            continue
        assert isinstance(value, ScaleValue)
        values.append(value)
    return values


def _score_level(
    fa: FocusArea, capability: Capability, session: Session, config: ScoringConfig
) -> LevelScore:
    values = _effective_values(capability, session)
    if not values:
        # No scored questions left: the level cannot block maturity.
        return LevelScore(
            focus_area_id=fa.id,
            level=capability.level,
            score=Fraction(100),
            contributing_question_count=0,
            achieved=True,
            vacuous=True,
        )
    score = Fraction(sum(contribution(v) for v in values), len(values))
    return LevelScore(
        focus_area_id=fa.id,
        level=capability.level,
        score=score,
        contributing_question_count=len(values),
        achieved=score >= config.achievement_threshold,
        vacuous=False,
    )


def score_capability_level(
    model: MaturityModel,
    session: Session,
    focus_area_id: str,
    level: str,
    config: ScoringConfig = DEFAULT_CONFIG,
) -> LevelScore:
    """Score one capability level: the mean contribution of its scale answers."""
    fa = model.focus_area(focus_area_id)
    for capability in fa.capabilities:
        if capability.level == level:
            return _score_level(fa, capability, session, config)
    raise UnknownLevel(focus_area_id, level)


def maturity_level(level_scores: Sequence[LevelScore]) -> str:
    """The highest letter whose prefix A..letter is fully achieved.

    Returns "none" when the first level is not achieved.
    """
    reached = NO_MATURITY
    for level_score in level_scores:
        if not level_score.achieved:
            break
        reached = level_score.level
    return reached


def profile(
    model: MaturityModel,
    session: Session,
    config: ScoringConfig = DEFAULT_CONFIG,
) -> MaturityProfile:
    """Score every focus area and level of the model for this session."""
    focus_areas: list[FocusAreaScore] = []
    overall: dict[str, str] = {}
    for fa in model.focus_areas:
        level_scores = tuple(
            _score_level(fa, capability, session, config) for capability in fa.capabilities
        )
        maturity = maturity_level(level_scores)
        scored = [ls.score for ls in level_scores if not ls.vacuous]
        fa_score = (
            Fraction(sum(scored), len(scored)) if scored else Fraction(100)
        )
        focus_areas.append(
            FocusAreaScore(
                focus_area_id=fa.id,
                name=fa.name,
                maturity_level=maturity,
                score=fa_score,
                level_scores=level_scores,
            )
        )
        overall[fa.id] = maturity

    provisional = any(
        question.qtype is QuestionType.SCALE
        and is_applicable(question, session.profile)
        and question.id not in session.answers
        for _fa, _cap, question in iter_questions(model)
    )

    return MaturityProfile(
        focus_areas=tuple(focus_areas),
        overall=overall,
        provisional=provisional,
        config=config,
        model_name=model.name,
        model_version=model.version,
        session_id=session.session_id,
        session_updated_at=session.updated_at,
    )


def what_if(
    model: MaturityModel,
    session: Session,
    hypothetical: Sequence[tuple[str, AnswerValue]],
    config: ScoringConfig = DEFAULT_CONFIG,
) -> tuple[MaturityProfile, MaturityProfile]:
    """Profiles before and after overlaying hypothetical answers.

    Pure: the real session is never modified. Hypothetical answers pass the
    same checks as record_answer; the overlay keeps the session's timestamps
    so repeated calls are identical.
    """
    before = profile(model, session, config)
    overlay = session
    for question_id, value in hypothetical:
        overlay = record_answer(model, overlay, question_id, value, now=session.updated_at)
    after = profile(model, overlay, config)
    return before, after
