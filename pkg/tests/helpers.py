"""Shared test helpers: model surgery and session/answers builders."""

from __future__ import annotations

from dataclasses import replace
from datetime import datetime, timezone

from famm.model import MaturityModel, OrganizationProfile, Question
from famm.modelio import AnswersDocument
from famm.session import Session, create_session, record_answer

FIXED_NOW = datetime(2026, 8, 9, 12, 0, 0, tzinfo=timezone.utc)


def replace_question(model: MaturityModel, question_id: str, **changes) -> MaturityModel:
    """Rebuild a model with one question swapped for a modified copy."""
    new_fas = []
    for fa in model.focus_areas:
        new_caps = []
        for cap in fa.capabilities:
            new_caps.append(
                replace(
                    cap,
                    questions=tuple(
                        replace(q, **changes) if q.id == question_id else q
                        for q in cap.questions
                    ),
                )
            )
        new_fas.append(replace(fa, capabilities=tuple(new_caps)))
    return replace(model, focus_areas=tuple(new_fas))


def remove_question(model: MaturityModel, question_id: str) -> MaturityModel:
    """Rebuild a model with one question dropped entirely."""
    new_fas = []
    for fa in model.focus_areas:
        new_caps = []
        for cap in fa.capabilities:
            new_caps.append(
                replace(
                    cap,
                    questions=tuple(q for q in cap.questions if q.id != question_id),
                )
            )
        new_fas.append(replace(fa, capabilities=tuple(new_caps)))
    return replace(model, focus_areas=tuple(new_fas))


def session_with(
    model: MaturityModel,
    answers: dict,
    profile: OrganizationProfile | None = None,
) -> Session:
    """A session with the given {question_id: typed value} answers recorded."""
    session = create_session(model, profile, session_id="test-session", now=FIXED_NOW)
    for question_id, value in answers.items():
        session = record_answer(model, session, question_id, value, now=FIXED_NOW)
    return session


def answers_doc(
    model: MaturityModel,
    answers: dict,
    organization: OrganizationProfile | None = None,
) -> AnswersDocument:
    """An answers document with raw (already canonical) values."""
    return AnswersDocument(
        model_name=model.name,
        model_version=model.version,
        organization=organization or OrganizationProfile(),
        answers=tuple(answers.items()),
    )


def answers_doc_from_session(model: MaturityModel, session: Session) -> AnswersDocument:
    from famm.session import raw_answer_value

    return AnswersDocument(
        model_name=model.name,
        model_version=model.version,
        organization=session.profile,
        answers=tuple(
            (question_id, raw_answer_value(record.value))
            for question_id, record in sorted(session.answers.items())
        ),
    )


def write_answers_file(path, model: MaturityModel, answers: dict, organization=None):
    from famm.modelio import serialize_answers

    path.write_bytes(serialize_answers(answers_doc(model, answers, organization)))
    return path
