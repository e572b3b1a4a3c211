"""Turn assessment gaps into an ordered, standards-referenced improvement plan."""

from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import date, timedelta
from fractions import Fraction

from .model import MaturityModel, Question, QuestionType, ScaleValue, StandardRef, is_applicable
from .scoring import (
    DEFAULT_CONFIG,
    MaturityProfile,
    ScoringConfig,
    contribution,
    profile as compute_profile,
    what_if,
)
from .session import Session

TARGETS = ("next_level", "full_maturity", "threshold_only")


class StaleProfile(Exception):
    def __init__(self, message: str):
        super().__init__(f"profile is stale: {message}")


class UnknownTask(Exception):
    def __init__(self, task_number: str):
        super().__init__(f"unknown task number: {task_number!r}")
        self.task_number = task_number


@dataclass(frozen=True)
class PlanConfig:
    """How tasks are filled in; the underlying scale fixes none of this.

    target selects the gap set:
      next_level     - only questions in each focus area's lowest unachieved level
      threshold_only - questions in every unachieved level
      full_maturity  - every scale question below FI
    """

    default_deadline_offset: int = 60  # days from plan generation
    default_responsible: str = "unassigned"
    target: str = "next_level"

    def __post_init__(self):
        if self.default_deadline_offset <= 0:
            raise ValueError("default_deadline_offset must be positive")
        if self.target not in TARGETS:
            raise ValueError(f"target must be one of {'|'.join(TARGETS)}")


@dataclass(frozen=True)
class ImprovementTask:
    task_number: str
    description: str
    question_id: str
    focus_area_id: str
    level: str
    refs: tuple[StandardRef, ...]
    deadline: date
    responsible: str
    projected_contribution: Fraction


@dataclass(frozen=True)
class ImprovementPlan:
    organization_name: str
    generated_on: date
    target: str
    profile: MaturityProfile
    tasks: tuple[ImprovementTask, ...]

    def task(self, task_number: str) -> ImprovementTask:
        for task in self.tasks:
            if task.task_number == task_number:
                return task
        raise UnknownTask(task_number)


_LEADING_INTERROGATIVE = re.compile(
    r"^(do|does|did|is|are|was|were|have|has|had|can|could|will|would|should)\s+",
    re.IGNORECASE,
)


def _fallback_description(text: str) -> str:
    """Rephrase a question as an imperative when no improvement action is set."""
    body = _LEADING_INTERROGATIVE.sub("", text.strip())
    body = body.rstrip("?").rstrip()
    if body and not body.endswith("."):
        body += "."
    return f"Ensure that: {body}"


def task_description(question: Question) -> str:
    if question.improvement_action:
        return question.improvement_action
    return _fallback_description(question.text)


def _is_gap(question: Question, session: Session) -> bool:
    """A scale question whose effective answer is below FI and not NA."""
    if question.qtype is not QuestionType.SCALE:
        return False
    if not is_applicable(question, session.profile):
        return False
    record = session.answers.get(question.id)
    value = record.value if record is not None else ScaleValue.NI
    return value not in (ScaleValue.FI, ScaleValue.NA)


def generate_plan(
    model: MaturityModel,
    session: Session,
    profile_result: MaturityProfile,
    config: PlanConfig | None = None,
    *,
    today: date | None = None,
) -> ImprovementPlan:
    """One task per gap question, ordered by focus area, level, question.

    The profile must have been computed from exactly this model and session;
    anything else raises StaleProfile. Task refs are copied verbatim from the
    source questions so standards stay traceable end to end.
    """
    config = config or PlanConfig()
    if (profile_result.model_name, profile_result.model_version) != (
        model.name,
        model.version,
    ):
        raise StaleProfile("computed against a different model")
    if (
        profile_result.session_id != session.session_id
        or profile_result.session_updated_at != session.updated_at
    ):
        raise StaleProfile("session changed since the profile was computed")

    today = today or date.today()
    deadline = today + timedelta(days=config.default_deadline_offset)
    by_fa = {fa.focus_area_id: fa for fa in profile_result.focus_areas}

    tasks: list[ImprovementTask] = []
    for fa in model.focus_areas:
        fa_score = by_fa[fa.id]
        unachieved = [ls.level for ls in fa_score.level_scores if not ls.achieved]
        if config.target == "next_level":
            selected_levels = set(unachieved[:1])
        elif config.target == "threshold_only":
            selected_levels = set(unachieved)
        else:
            selected_levels = {cap.level for cap in fa.capabilities}
        level_score = {ls.level: ls for ls in fa_score.level_scores}

        for capability in fa.capabilities:
            if capability.level not in selected_levels:
                continue
            for question in capability.questions:
                if not _is_gap(question, session):
                    continue
                tasks.append(
                    ImprovementTask(
                        task_number=f"T{len(tasks) + 1}",
                        description=task_description(question),
                        question_id=question.id,
                        focus_area_id=fa.id,
                        level=capability.level,
                        refs=question.refs,
                        deadline=deadline,
                        responsible=config.default_responsible,
                        projected_contribution=_projected_gain(
                            question, session, level_score[capability.level].contributing_question_count
                        ),
                    )
                )

    return ImprovementPlan(
        organization_name=session.profile.organization_name,
        generated_on=today,
        target=config.target,
        profile=profile_result,
        tasks=tuple(tasks),
    )


def _projected_gain(question: Question, session: Session, scored_count: int) -> Fraction:
    """Level-score gain if this single question were completed to FI."""
    record = session.answers.get(question.id)
    value = record.value if record is not None else ScaleValue.NI
    # Gap questions always contribute to the denominator (they are never NA).
    return Fraction(100 - contribution(value), scored_count)


def plan_what_if(
    model: MaturityModel,
    session: Session,
    plan: ImprovementPlan,
    completed_task_numbers: list[str] | tuple[str, ...] | set[str],
) -> MaturityProfile:
    """Profile with every completed task's question overlaid as FI."""
    overlay = [
        (plan.task(number).question_id, ScaleValue.FI)
        for number in sorted(completed_task_numbers, key=_task_ordinal)
    ]
    _before, after = what_if(model, session, overlay, plan.profile.config)
    return after


def _task_ordinal(task_number: str) -> tuple[int, str]:
    match = re.fullmatch(r"T([0-9]+)", task_number)
    return (int(match.group(1)), task_number) if match else (0, task_number)


def plan_for(
    model: MaturityModel,
    session: Session,
    scoring_config: ScoringConfig = DEFAULT_CONFIG,
    plan_config: PlanConfig | None = None,
    *,
    today: date | None = None,
) -> ImprovementPlan:
    """Convenience: score the session, then generate the plan from the result."""
    result = compute_profile(model, session, scoring_config)
    return generate_plan(model, session, result, plan_config, today=today)
