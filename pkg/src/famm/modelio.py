"""Bit-exact parsing and serialization of model and answer documents.

Both document kinds are JSON (UTF-8, no BOM). The canonical form fixes key
order, uses 2-space indentation, LF newlines and a trailing newline, so that
``serialize(parse(x))`` is byte-identical for canonical inputs and
``parse(serialize(v))`` structurally equals ``v`` for every valid value.

Parsing is structural only: shapes, closed enumerations and local uniqueness.
Semantic rules (level ordering, reference resolution, id patterns) belong to
``famm.model.validate_model``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any

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
)

MODEL_FORMAT = "famm/1"
ANSWERS_FORMAT = "famm-answers/1"

_SCALE_TOKENS = {v.value for v in ScaleValue}


class EncodingError(Exception):
    pass


class DocumentSyntaxError(Exception):
    """Malformed JSON, located by line and column inside the input."""

    def __init__(self, line: int, column: int, message: str):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column
        self.message = message


class SchemaError(Exception):
    """A structurally invalid document, located by a path into the tree."""

    def __init__(self, path: str, expected: str, found: str):
        super().__init__(f"{path}: expected {expected}, found {found}")
        self.path = path
        self.expected = expected
        self.found = found


@dataclass(frozen=True)
class AnswersDocument:
    """On-disk answers: raw (question_id, value) pairs plus the model reference.

    Values are kept raw (scale token / choice index / ISO date string); typing
    against the model's questions happens when a session is built from the
    document.
    """

    model_name: str
    model_version: str
    organization: OrganizationProfile
    answers: tuple[tuple[str, str | int], ...] = ()


# ---------------------------------------------------------------------------
# decoding helpers
# ---------------------------------------------------------------------------


def _decode(raw: bytes | str) -> Any:
    if isinstance(raw, bytes):
        try:
            text = raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise EncodingError(f"input is not valid UTF-8: {exc}") from exc
    else:
        text = raw
    if text.startswith("﻿"):
        raise EncodingError("input must not carry a UTF-8 BOM")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentSyntaxError(exc.lineno, exc.colno, exc.msg.lower()) from exc


def _found(value: Any) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, float)):
        return repr(value)
    if isinstance(value, str):
        return repr(value)
    if isinstance(value, list):
        return "an array"
    if isinstance(value, dict):
        return "an object"
    return type(value).__name__


def _require_object(
    value: Any,
    path: str,
    required: tuple[str, ...],
    optional: tuple[str, ...] = (),
    warnings: list[Diagnostic] | None = None,
) -> dict[str, Any]:
    if not isinstance(value, dict):
        raise SchemaError(path, "an object", _found(value))
    for key in required:
        if key not in value:
            raise SchemaError(f"{path}.{key}" if path else key, f"key {key!r}", "nothing")
    allowed = set(required) | set(optional)
    for key in value:
        if key not in allowed and warnings is not None:
            warnings.append(
                Diagnostic(
                    "warning",
                    f"{path}.{key}" if path else key,
                    f"unknown key {key!r} ignored",
                )
            )
    return value


def _require_str(value: Any, path: str) -> str:
    if not isinstance(value, str):
        raise SchemaError(path, "a string", _found(value))
    return value


def _require_array(value: Any, path: str) -> list[Any]:
    if not isinstance(value, list):
        raise SchemaError(path, "an array", _found(value))
    return value


def _require_format(doc: dict[str, Any], expected: str) -> None:
    found = doc.get("format")
    if found != expected:
        raise SchemaError("format", repr(expected), _found(found))


# ---------------------------------------------------------------------------
# model documents
# ---------------------------------------------------------------------------


def parse_model(
    raw: bytes | str, warnings: list[Diagnostic] | None = None
) -> MaturityModel:
    """Parse a famm/1 model document into a MaturityModel.

    Unknown extra keys are tolerated for forward compatibility; pass a list as
    ``warnings`` to collect one diagnostic per ignored key. Semantic
    validation is the caller's job (run ``validate_model`` afterwards).
    """
    doc = _decode(raw)
    doc = _require_object(
        doc, "", ("format", "model", "standards", "focus_areas"), warnings=warnings
    )
    _require_format(doc, MODEL_FORMAT)

    header = _require_object(doc["model"], "model", ("name", "version"), warnings=warnings)
    name = _require_str(header["name"], "model.name")
    version = _require_str(header["version"], "model.version")

    standards = tuple(
        _parse_standard(item, f"standards[{i}]", warnings)
        for i, item in enumerate(_require_array(doc["standards"], "standards"))
    )
    focus_areas = tuple(
        _parse_focus_area(item, f"focus_areas[{i}]", warnings)
        for i, item in enumerate(_require_array(doc["focus_areas"], "focus_areas"))
    )
    return MaturityModel(name=name, version=version, standards=standards, focus_areas=focus_areas)


def _parse_standard(value: Any, path: str, warnings) -> Standard:
    obj = _require_object(value, path, ("id", "title", "publisher"), ("edition",), warnings)
    edition = obj.get("edition")
    if edition is not None:
        edition = _require_str(edition, f"{path}.edition")
    return Standard(
        id=_require_str(obj["id"], f"{path}.id"),
        title=_require_str(obj["title"], f"{path}.title"),
        publisher=_require_str(obj["publisher"], f"{path}.publisher"),
        edition=edition,
    )


def _parse_focus_area(value: Any, path: str, warnings) -> FocusArea:
    obj = _require_object(value, path, ("id", "name", "capabilities"), warnings=warnings)
    capabilities = tuple(
        _parse_capability(item, f"{path}.capabilities[{i}]", warnings)
        for i, item in enumerate(_require_array(obj["capabilities"], f"{path}.capabilities"))
    )
    return FocusArea(
        id=_require_str(obj["id"], f"{path}.id"),
        name=_require_str(obj["name"], f"{path}.name"),
        capabilities=capabilities,
    )


def _parse_capability(value: Any, path: str, warnings) -> Capability:
    obj = _require_object(value, path, ("level", "objective", "questions"), warnings=warnings)
    questions = tuple(
        _parse_question(item, f"{path}.questions[{i}]", warnings)
        for i, item in enumerate(_require_array(obj["questions"], f"{path}.questions"))
    )
    return Capability(
        level=_require_str(obj["level"], f"{path}.level"),
        objective=_require_str(obj["objective"], f"{path}.objective"),
        questions=questions,
    )


def _parse_question(value: Any, path: str, warnings) -> Question:
    obj = _require_object(
        value,
        path,
        ("id", "text", "qtype", "refs"),
        ("improvement_action", "choices", "applicability"),
        warnings,
    )
    qtype_raw = _require_str(obj["qtype"], f"{path}.qtype")
    try:
        qtype = QuestionType(qtype_raw)
    except ValueError:
        raise SchemaError(
            f"{path}.qtype",
            "one of scale|multiple_choice|date_time",
            repr(qtype_raw),
        ) from None

    refs = tuple(
        _parse_ref(item, f"{path}.refs[{i}]", warnings)
        for i, item in enumerate(_require_array(obj["refs"], f"{path}.refs"))
    )

    action = obj.get("improvement_action")
    if action is not None:
        action = _require_str(action, f"{path}.improvement_action")

    choices = obj.get("choices")
    if choices is not None:
        choices = tuple(
            _require_str(item, f"{path}.choices[{i}]")
            for i, item in enumerate(_require_array(choices, f"{path}.choices"))
        )

    applicability = obj.get("applicability")
    if applicability is not None:
        cond = _require_object(
            applicability,
            f"{path}.applicability",
            ("profile_key", "allowed_values"),
            warnings=warnings,
        )
        applicability = ApplicabilityCondition(
            profile_key=_require_str(cond["profile_key"], f"{path}.applicability.profile_key"),
            allowed_values=tuple(
                _require_str(item, f"{path}.applicability.allowed_values[{i}]")
                for i, item in enumerate(
                    _require_array(
                        cond["allowed_values"], f"{path}.applicability.allowed_values"
                    )
                )
            ),
        )

    return Question(
        id=_require_str(obj["id"], f"{path}.id"),
        text=_require_str(obj["text"], f"{path}.text"),
        qtype=qtype,
        refs=refs,
        improvement_action=action,
        choices=choices,
        applicability=applicability,
    )


def _parse_ref(value: Any, path: str, warnings) -> StandardRef:
    obj = _require_object(value, path, ("standard_id", "clause"), ("note",), warnings)
    note = obj.get("note")
    if note is not None:
        note = _require_str(note, f"{path}.note")
    return StandardRef(
        standard_id=_require_str(obj["standard_id"], f"{path}.standard_id"),
        clause=_require_str(obj["clause"], f"{path}.clause"),
        note=note,
    )


def canonical_bytes(doc: Any) -> bytes:
    """Serialize an already-ordered document tree to canonical JSON bytes."""
    return (json.dumps(doc, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def model_document(model: MaturityModel) -> dict[str, Any]:
    """The on-disk dict form of a model, keys in canonical order."""
    return {
        "format": MODEL_FORMAT,
        "model": {"name": model.name, "version": model.version},
        "standards": [_standard_doc(std) for std in model.standards],
        "focus_areas": [_focus_area_doc(fa) for fa in model.focus_areas],
    }


def _standard_doc(std: Standard) -> dict[str, Any]:
    doc: dict[str, Any] = {"id": std.id, "title": std.title, "publisher": std.publisher}
    if std.edition is not None:
        doc["edition"] = std.edition
    return doc


def _focus_area_doc(fa: FocusArea) -> dict[str, Any]:
    return {
        "id": fa.id,
        "name": fa.name,
        "capabilities": [
            {
                "level": cap.level,
                "objective": cap.objective,
                "questions": [_question_doc(q) for q in cap.questions],
            }
            for cap in fa.capabilities
        ],
    }


def _question_doc(question: Question) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "id": question.id,
        "text": question.text,
        "qtype": question.qtype.value,
        "refs": [_ref_doc(ref) for ref in question.refs],
    }
    if question.improvement_action is not None:
        doc["improvement_action"] = question.improvement_action
    if question.choices is not None:
        doc["choices"] = list(question.choices)
    if question.applicability is not None:
        doc["applicability"] = {
            "profile_key": question.applicability.profile_key,
            "allowed_values": list(question.applicability.allowed_values),
        }
    return doc


def _ref_doc(ref: StandardRef) -> dict[str, Any]:
    doc: dict[str, Any] = {"standard_id": ref.standard_id, "clause": ref.clause}
    if ref.note is not None:
        doc["note"] = ref.note
    return doc


def serialize_model(model: MaturityModel) -> bytes:
    """Canonical bytes of a model; a pure function of the model value."""
    return canonical_bytes(model_document(model))


# ---------------------------------------------------------------------------
# answers documents
# ---------------------------------------------------------------------------


def parse_answers(
    raw: bytes | str, warnings: list[Diagnostic] | None = None
) -> AnswersDocument:
    """Parse a famm-answers/1 document.

    Scale tokens are case-folded to canonical uppercase. Duplicate question
    ids are a SchemaError naming the id.
    """
    doc = _decode(raw)
    doc = _require_object(
        doc, "", ("format", "model", "organization", "answers"), warnings=warnings
    )
    _require_format(doc, ANSWERS_FORMAT)

    header = _require_object(doc["model"], "model", ("name", "version"), warnings=warnings)
    organization = parse_organization(doc["organization"], "organization", warnings)

    answers: list[tuple[str, str | int]] = []
    seen: set[str] = set()
    for i, item in enumerate(_require_array(doc["answers"], "answers")):
        path = f"answers[{i}]"
        obj = _require_object(item, path, ("question_id", "value"), warnings=warnings)
        question_id = _require_str(obj["question_id"], f"{path}.question_id")
        if question_id in seen:
            raise SchemaError(
                f"{path}.question_id",
                "a unique question id",
                f"duplicate {question_id!r}",
            )
        seen.add(question_id)
        answers.append((question_id, _parse_answer_value(obj["value"], f"{path}.value")))

    return AnswersDocument(
        model_name=_require_str(header["name"], "model.name"),
        model_version=_require_str(header["version"], "model.version"),
        organization=organization,
        answers=tuple(answers),
    )


def _parse_answer_value(value: Any, path: str) -> str | int:
    if isinstance(value, bool):
        raise SchemaError(path, "a string or a choice index", _found(value))
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        if value.upper() in _SCALE_TOKENS:
            return value.upper()
        return value
    raise SchemaError(path, "a string or a choice index", _found(value))


def parse_organization(
    value: Any, path: str, warnings: list[Diagnostic] | None = None
) -> OrganizationProfile:
    obj = _require_object(value, path, ("organization_name", "profile"), warnings=warnings)
    profile_obj = obj["profile"]
    if not isinstance(profile_obj, dict):
        raise SchemaError(f"{path}.profile", "an object", _found(profile_obj))
    profile: dict[str, str] = {}
    for key, item in profile_obj.items():
        profile[key] = _require_str(item, f"{path}.profile.{key}")
    return OrganizationProfile(
        organization_name=_require_str(obj["organization_name"], f"{path}.organization_name"),
        profile=profile,
    )


def organization_document(org: OrganizationProfile) -> dict[str, Any]:
    return {
        "organization_name": org.organization_name,
        "profile": {key: org.profile[key] for key in sorted(org.profile)},
    }


def serialize_answers(doc: AnswersDocument) -> bytes:
    return canonical_bytes(
        {
            "format": ANSWERS_FORMAT,
            "model": {"name": doc.model_name, "version": doc.model_version},
            "organization": organization_document(doc.organization),
            "answers": [
                {"question_id": question_id, "value": value}
                for question_id, value in doc.answers
            ],
        }
    )
