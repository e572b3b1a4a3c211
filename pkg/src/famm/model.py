"""Domain types for focus-area maturity models and semantic model validation.

A model is a tree: focus areas contain lettered capability levels (A, B, C,
...), each capability holds control questions, and every question may cite
clauses of the standards registered on the model. All types are immutable
after construction; the operations in this module are pure functions.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Mapping


class QuestionType(Enum):
    """How a control question is answered."""

    SCALE = "scale"
    MULTIPLE_CHOICE = "multiple_choice"
    DATE_TIME = "date_time"


class ScaleValue(Enum):
    """Answer tokens for scale questions.

    FI/LI/PI/NI carry score contributions (see famm.scoring); NA is an
    explicit opt-out that removes the question from scoring entirely.
    """

    FI = "FI"
    LI = "LI"
    PI = "PI"
    NI = "NI"
    NA = "NA"


class UnknownQuestionId(Exception):
    def __init__(self, question_id: str):
        super().__init__(f"unknown question id: {question_id!r}")
        self.question_id = question_id


class UnknownStandardId(Exception):
    def __init__(self, standard_id: str):
        super().__init__(f"unknown standard id: {standard_id!r}")
        self.standard_id = standard_id


class UnknownFocusArea(Exception):
    def __init__(self, focus_area_id: str):
        super().__init__(f"unknown focus area: {focus_area_id!r}")
        self.focus_area_id = focus_area_id


class UnknownLevel(Exception):
    def __init__(self, focus_area_id: str, level: str):
        super().__init__(f"focus area {focus_area_id!r} has no level {level!r}")
        self.focus_area_id = focus_area_id
        self.level = level


@dataclass(frozen=True)
class Standard:
    """An entry in the model's standards registry."""

    id: str
    title: str
    publisher: str
    edition: str | None = None


@dataclass(frozen=True)
class StandardRef:
    """A citation of one clause of a registered standard."""

    standard_id: str
    clause: str
    note: str | None = None


@dataclass(frozen=True)
class ApplicabilityCondition:
    """Restricts a question to organizations whose profile matches.

    A question with a condition applies when the profile key is absent
    (inclusive default: a blank profile never hides controls) or when its
    value is one of ``allowed_values``.
    """

    profile_key: str
    allowed_values: tuple[str, ...]


@dataclass(frozen=True)
class Question:
    id: str
    text: str
    qtype: QuestionType
    refs: tuple[StandardRef, ...] = ()
    improvement_action: str | None = None
    choices: tuple[str, ...] | None = None
    applicability: ApplicabilityCondition | None = None


@dataclass(frozen=True)
class Capability:
    """A lettered maturity level of a focus area and its control questions."""

    level: str
    objective: str
    questions: tuple[Question, ...] = ()


@dataclass(frozen=True)
class FocusArea:
    id: str
    name: str
    capabilities: tuple[Capability, ...] = ()


@dataclass(frozen=True)
class MaturityModel:
    name: str
    version: str
    standards: tuple[Standard, ...] = ()
    focus_areas: tuple[FocusArea, ...] = ()

    def standard(self, standard_id: str) -> Standard:
        for std in self.standards:
            if std.id == standard_id:
                return std
        raise UnknownStandardId(standard_id)

    def focus_area(self, focus_area_id: str) -> FocusArea:
        for fa in self.focus_areas:
            if fa.id == focus_area_id:
                return fa
        raise UnknownFocusArea(focus_area_id)

    def question(self, question_id: str) -> Question:
        for _fa, _cap, question in iter_questions(self):
            if question.id == question_id:
                return question
        raise UnknownQuestionId(question_id)


@dataclass(frozen=True)
class OrganizationProfile:
    """Free-form organization characteristics used to filter applicability."""

    organization_name: str = ""
    profile: Mapping[str, str] = field(default_factory=dict)


EMPTY_PROFILE = OrganizationProfile()


@dataclass(frozen=True)
class Diagnostic:
    """One validation finding, located by a path into the model tree."""

    severity: str  # "error" | "warning"
    path: str
    message: str

    def __str__(self) -> str:
        return f"{self.severity}: {self.path}: {self.message}"


def iter_questions(model: MaturityModel) -> Iterator[tuple[FocusArea, Capability, Question]]:
    """Yield (focus_area, capability, question) in model order."""
    for fa in model.focus_areas:
        for cap in fa.capabilities:
            for question in cap.questions:
                yield fa, cap, question


_QUESTION_ID_SUFFIX = re.compile(r"Q[1-9][0-9]*$")


def validate_model(model: MaturityModel) -> list[Diagnostic]:
    """Check every semantic invariant of a structurally parsed model.

    Returns an empty list iff the model is valid. Each violation yields one
    diagnostic with a path like ``focus_areas[0].capabilities[1].questions[2]``.
    Deterministic: the same model always yields the same diagnostic list.
    """
    diags: list[Diagnostic] = []

    def error(path: str, message: str) -> None:
        diags.append(Diagnostic("error", path, message))

    standard_ids: set[str] = set()
    for i, std in enumerate(model.standards):
        path = f"standards[{i}].id"
        if not std.id:
            error(path, "standard id must be non-empty")
        elif std.id in standard_ids:
            error(path, f"duplicate standard id {std.id!r}")
        standard_ids.add(std.id)

    if not model.focus_areas:
        error("focus_areas", "model must contain at least one focus area")

    fa_ids: set[str] = set()
    question_ids: set[str] = set()
    for i, fa in enumerate(model.focus_areas):
        fa_path = f"focus_areas[{i}]"
        if not fa.id:
            error(f"{fa_path}.id", "focus area id must be non-empty")
        elif fa.id in fa_ids:
            error(f"{fa_path}.id", f"duplicate focus area id {fa.id!r}")
        fa_ids.add(fa.id)

        if not fa.capabilities:
            error(f"{fa_path}.capabilities", "focus area must contain at least one capability")

        for j, cap in enumerate(fa.capabilities):
            cap_path = f"{fa_path}.capabilities[{j}]"
            expected_level = chr(ord("A") + j)
            if cap.level != expected_level:
                error(
                    f"{cap_path}.level",
                    "capability levels must be consecutive letters starting at 'A' "
                    f"(expected {expected_level!r}, found {cap.level!r})",
                )
            if not cap.objective:
                error(f"{cap_path}.objective", "capability objective must be non-empty")

            for k, question in enumerate(cap.questions):
                q_path = f"{cap_path}.questions[{k}]"
                _validate_question(question, fa, q_path, question_ids, standard_ids, error)

    return diags


def _validate_question(
    question: Question,
    fa: FocusArea,
    path: str,
    seen_ids: set[str],
    standard_ids: set[str],
    error,
) -> None:
    pattern = re.compile(rf"^{re.escape(fa.id)}Q[1-9][0-9]*$") if fa.id else _QUESTION_ID_SUFFIX
    if not pattern.match(question.id):
        error(
            f"{path}.id",
            f"question id {question.id!r} must be the focus area id {fa.id!r} "
            "followed by 'Q' and a positive integer",
        )
    if question.id in seen_ids:
        error(f"{path}.id", f"duplicate question id {question.id!r}")
    seen_ids.add(question.id)

    if question.qtype is QuestionType.MULTIPLE_CHOICE:
        if not question.choices:
            error(f"{path}.choices", "multiple_choice questions must declare choices")
    elif question.choices is not None:
        error(f"{path}.choices", "choices are only allowed on multiple_choice questions")

    for r, ref in enumerate(question.refs):
        if ref.standard_id not in standard_ids:
            error(
                f"{path}.refs[{r}].standard_id",
                f"reference to unregistered standard {ref.standard_id!r}",
            )
        if not ref.clause:
            error(f"{path}.refs[{r}].clause", "clause must be non-empty")

    cond = question.applicability
    if cond is not None:
        if not cond.profile_key:
            error(f"{path}.applicability.profile_key", "profile_key must be non-empty")
        if not cond.allowed_values:
            error(f"{path}.applicability.allowed_values", "allowed_values must be non-empty")


def is_applicable(question: Question, profile: OrganizationProfile) -> bool:
    """Whether a question applies to the given organization.

    Missing profile keys make the question applicable (inclusive default):
    self-assessment must never silently hide controls.
    """
    cond = question.applicability
    if cond is None:
        return True
    value = profile.profile.get(cond.profile_key)
    if value is None:
        return True
    return value in cond.allowed_values


def applicable_questions(
    model: MaturityModel, profile: OrganizationProfile
) -> list[Question]:
    """Questions applicable under the profile, in model order."""
    return [q for _fa, _cap, q in iter_questions(model) if is_applicable(q, profile)]


def lookup_refs(
    model: MaturityModel, question_id: str
) -> list[tuple[Standard, str, str | None]]:
    """Resolve a question's standards citations to (standard, clause, note).

    Entries come back in declaration order; a question with no refs yields an
    empty list. Raises UnknownQuestionId / UnknownStandardId.
    """
    question = model.question(question_id)
    return [(model.standard(ref.standard_id), ref.clause, ref.note) for ref in question.refs]
