"""Assessment sessions: capture answers over time, persist, resume.

A session is an immutable value; ``record_answer`` returns an updated copy,
which keeps scoring and what-if exploration pure. Writers of a shared session
must serialize their updates externally (the HTTP service does this per
session id).
"""

from __future__ import annotations

import uuid
from dataclasses import dataclass, replace
from datetime import date, datetime, timezone
from typing import Any, Mapping, NamedTuple

from .model import (
    Diagnostic,
    MaturityModel,
    OrganizationProfile,
    Question,
    QuestionType,
    ScaleValue,
    applicable_questions,
    is_applicable,
    validate_model,
)
from .modelio import (
    AnswersDocument,
    SchemaError,
    _decode,
    _found,
    _require_array,
    _require_object,
    _require_str,
    canonical_bytes,
    organization_document,
    parse_organization,
)

SESSION_FORMAT = "famm-session/1"

AnswerValue = ScaleValue | int | date
"""Typed answer: scale token, choice index, or calendar date."""


class InvalidModel(Exception):
    def __init__(self, diagnostics: list[Diagnostic]):
        super().__init__(
            "model failed validation: " + "; ".join(str(d) for d in diagnostics[:3])
        )
        self.diagnostics = diagnostics


class NotApplicable(Exception):
    def __init__(self, question_id: str):
        super().__init__(f"question {question_id!r} is not applicable under this profile")
        self.question_id = question_id


class TypeMismatch(Exception):
    def __init__(self, question_id: str, expected: QuestionType, found: str):
        super().__init__(
            f"question {question_id!r} expects a {expected.value} answer, got {found}"
        )
        self.question_id = question_id
        self.expected = expected
        self.found = found


class ChoiceOutOfRange(Exception):
    def __init__(self, question_id: str, index: int, choice_count: int):
        super().__init__(
            f"choice index {index} for question {question_id!r} is out of range "
            f"(0..{choice_count - 1})"
        )
        self.question_id = question_id
        self.index = index


class ModelMismatch(Exception):
    def __init__(self, expected: tuple[str, str], found: tuple[str, str]):
        super().__init__(f"document references model {found}, expected {expected}")
        self.expected = expected
        self.found = found


@dataclass(frozen=True)
class AnswerRecord:
    value: AnswerValue
    answered_at: datetime


@dataclass(frozen=True)
class Session:
    session_id: str
    model_name: str
    model_version: str
    profile: OrganizationProfile
    answers: Mapping[str, AnswerRecord]
    created_at: datetime
    updated_at: datetime


class Progress(NamedTuple):
    """Counts over applicable questions; `scored` covers scale questions only."""

    answered_scored: int
    total_scored: int
    answered_all: int
    total_all: int


def _utcnow() -> datetime:
    return datetime.now(timezone.utc)


def create_session(
    model: MaturityModel,
    profile: OrganizationProfile | None = None,
    *,
    session_id: str | None = None,
    now: datetime | None = None,
) -> Session:
    """Start an empty session against a validated model."""
    diagnostics = validate_model(model)
    errors = [d for d in diagnostics if d.severity == "error"]
    if errors:
        raise InvalidModel(errors)
    now = now or _utcnow()
    return Session(
        session_id=session_id or uuid.uuid4().hex,
        model_name=model.name,
        model_version=model.version,
        profile=profile or OrganizationProfile(),
        answers={},
        created_at=now,
        updated_at=now,
    )


def _check_value(question: Question, value: Any) -> AnswerValue:
    if question.qtype is QuestionType.SCALE:
        if not isinstance(value, ScaleValue):
            raise TypeMismatch(question.id, question.qtype, _kind(value))
        return value
    if question.qtype is QuestionType.MULTIPLE_CHOICE:
        if isinstance(value, bool) or not isinstance(value, int):
            raise TypeMismatch(question.id, question.qtype, _kind(value))
        choices = question.choices or ()
        if not 0 <= value < len(choices):
            raise ChoiceOutOfRange(question.id, value, len(choices))
        return value
    if isinstance(value, datetime) or not isinstance(value, date):
        raise TypeMismatch(question.id, question.qtype, _kind(value))
    return value


def _kind(value: Any) -> str:
    if isinstance(value, ScaleValue):
        return "a scale value"
    if isinstance(value, bool):
        return "a boolean"
    if isinstance(value, int):
        return "a choice index"
    if isinstance(value, datetime):
        return "a datetime"
    if isinstance(value, date):
        return "a date"
    return type(value).__name__


def record_answer(
    model: MaturityModel,
    session: Session,
    question_id: str,
    value: AnswerValue,
    *,
    now: datetime | None = None,
) -> Session:
    """Store (or overwrite, last write wins) one answer.

    The question must exist, be applicable under the session's profile, and
    the value must match its question type.
    """
    question = model.question(question_id)
    if not is_applicable(question, session.profile):
        raise NotApplicable(question_id)
    checked = _check_value(question, value)
    now = now or _utcnow()
    answers = dict(session.answers)
    answers[question_id] = AnswerRecord(value=checked, answered_at=now)
    return replace(session, answers=answers, updated_at=now)


def progress(model: MaturityModel, session: Session) -> Progress:
    answered_scored = total_scored = answered_all = total_all = 0
    for question in applicable_questions(model, session.profile):
        total_all += 1
        answered = question.id in session.answers
        answered_all += int(answered)
        if question.qtype is QuestionType.SCALE:
            total_scored += 1
            answered_scored += int(answered)
    return Progress(answered_scored, total_scored, answered_all, total_all)


# ---------------------------------------------------------------------------
# persistence
# ---------------------------------------------------------------------------


def _format_ts(value: datetime) -> str:
    return (
        value.astimezone(timezone.utc)
        .isoformat(timespec="microseconds")
        .replace("+00:00", "Z")
    )


def _parse_ts(raw: Any, path: str) -> datetime:
    text = _require_str(raw, path)
    if text.endswith("Z"):
        text = text[:-1] + "+00:00"
    try:
        parsed = datetime.fromisoformat(text)
    except ValueError:
        raise SchemaError(path, "an ISO-8601 UTC timestamp", repr(raw)) from None
    if parsed.tzinfo is None:
        raise SchemaError(path, "an ISO-8601 UTC timestamp", repr(raw))
    return parsed.astimezone(timezone.utc)


def raw_answer_value(value: AnswerValue) -> str | int:
    if isinstance(value, ScaleValue):
        return value.value
    if isinstance(value, date):
        return value.isoformat()
    return value


def typed_answer_value(question: Question, raw: Any, path: str = "value") -> AnswerValue:
    """Convert a raw document value to the typed value for this question."""
    if question.qtype is QuestionType.SCALE:
        if isinstance(raw, str):
            try:
                return ScaleValue(raw.upper())
            except ValueError:
                pass
        raise TypeMismatch(question.id, question.qtype, _found_raw(raw))
    if question.qtype is QuestionType.MULTIPLE_CHOICE:
        if isinstance(raw, bool) or not isinstance(raw, int):
            raise TypeMismatch(question.id, question.qtype, _found_raw(raw))
        choices = question.choices or ()
        if not 0 <= raw < len(choices):
            raise ChoiceOutOfRange(question.id, raw, len(choices))
        return raw
    if isinstance(raw, str):
        try:
            return date.fromisoformat(raw)
        except ValueError:
            pass
    raise TypeMismatch(question.id, question.qtype, _found_raw(raw))


def _found_raw(raw: Any) -> str:
    return _found(raw)


def session_document(session: Session) -> dict[str, Any]:
    return {
        "format": SESSION_FORMAT,
        "session_id": session.session_id,
        "model": {"name": session.model_name, "version": session.model_version},
        "organization": organization_document(session.profile),
        "answers": [
            {
                "question_id": question_id,
                "value": raw_answer_value(record.value),
                "answered_at": _format_ts(record.answered_at),
            }
            for question_id, record in sorted(session.answers.items())
        ],
        "created_at": _format_ts(session.created_at),
        "updated_at": _format_ts(session.updated_at),
    }


def save_session(session: Session) -> bytes:
    return canonical_bytes(session_document(session))


def load_session(
    raw: bytes | str,
    model: MaturityModel,
    warnings: list[Diagnostic] | None = None,
) -> Session:
    """Load a persisted session and re-check it against the model.

    Every stored answer must reference a known, applicable question and carry
    a type-compatible value; the document must reference the same model name
    and version.
    """
    doc = _decode(raw)
    doc = _require_object(
        doc,
        "",
        ("format", "session_id", "model", "organization", "answers", "created_at", "updated_at"),
        warnings=warnings,
    )
    if doc.get("format") != SESSION_FORMAT:
        raise SchemaError("format", repr(SESSION_FORMAT), _found(doc.get("format")))

    header = _require_object(doc["model"], "model", ("name", "version"), warnings=warnings)
    name = _require_str(header["name"], "model.name")
    version = _require_str(header["version"], "model.version")
    if (name, version) != (model.name, model.version):
        raise ModelMismatch(expected=(model.name, model.version), found=(name, version))

    profile = parse_organization(doc["organization"], "organization", warnings)

    answers: dict[str, AnswerRecord] = {}
    for i, item in enumerate(_require_array(doc["answers"], "answers")):
        path = f"answers[{i}]"
        obj = _require_object(
            item, path, ("question_id", "value", "answered_at"), warnings=warnings
        )
        question_id = _require_str(obj["question_id"], f"{path}.question_id")
        if question_id in answers:
            raise SchemaError(
                f"{path}.question_id", "a unique question id", f"duplicate {question_id!r}"
            )
        question = model.question(question_id)
        if not is_applicable(question, profile):
            raise NotApplicable(question_id)
        value = typed_answer_value(question, obj["value"], f"{path}.value")
        answers[question_id] = AnswerRecord(
            value=value, answered_at=_parse_ts(obj["answered_at"], f"{path}.answered_at")
        )

    return Session(
        session_id=_require_str(doc["session_id"], "session_id"),
        model_name=name,
        model_version=version,
        profile=profile,
        answers=answers,
        created_at=_parse_ts(doc["created_at"], "created_at"),
        updated_at=_parse_ts(doc["updated_at"], "updated_at"),
    )


def session_from_answers(
    model: MaturityModel,
    doc: AnswersDocument,
    *,
    session_id: str | None = None,
    now: datetime | None = None,
) -> Session:
    """Build a session from a parsed answers document (batch assessment)."""
    if (doc.model_name, doc.model_version) != (model.name, model.version):
        raise ModelMismatch(
            expected=(model.name, model.version),
            found=(doc.model_name, doc.model_version),
        )
    session = create_session(model, doc.organization, session_id=session_id, now=now)
    for question_id, raw in doc.answers:
        question = model.question(question_id)
        value = typed_answer_value(question, raw)
        session = record_answer(model, session, question_id, value, now=session.created_at)
    return session
