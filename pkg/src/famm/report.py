"""Render assessment results, improvement plans, and standards coverage.

All internal score values stay exact rationals; rounding (half-up, to the
configured number of decimals) happens only here. Dates are ISO-8601 in the
machine formats (json, csv) and DD/MM/YYYY in the human one (md).
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from datetime import date, datetime, timezone
from enum import Enum
from fractions import Fraction
from typing import Any, Mapping

from .model import MaturityModel, QuestionType, ScaleValue, is_applicable, iter_questions
from .modelio import canonical_bytes, organization_document
from .planner import ImprovementPlan, ImprovementTask
from .scoring import DEFAULT_CONFIG, MaturityProfile, ScoringConfig, contribution
from .scoring import profile as compute_profile
from .session import Session, _format_ts

REPORT_FORMAT = "famm-report/1"
RENDER_FORMATS = ("json", "csv", "md")


class UnsupportedFormat(Exception):
    def __init__(self, fmt: str):
        super().__init__(f"unsupported render format {fmt!r} (expected one of json|csv|md)")
        self.format = fmt


class CoverageStatus(Enum):
    COVERED = "covered"  # every scored reference fully implemented
    PARTIAL = "partial"
    GAP = "gap"  # any NI or unanswered scored reference
    UNASSESSED = "unassessed"  # only informational (or NA) references


@dataclass(frozen=True)
class CoverageRow:
    standard_id: str
    clause: str
    question_ids: tuple[str, ...]
    answers: Mapping[str, str]  # effective answer per referencing scale question
    min_contribution: Fraction | None
    mean_contribution: Fraction | None
    status: CoverageStatus


@dataclass(frozen=True)
class CoverageMatrix:
    rows: tuple[CoverageRow, ...]


@dataclass(frozen=True)
class ReportBundle:
    """Everything derived from one (model, session, config) triple."""

    model_name: str
    model_version: str
    organization_name: str
    generated_at: datetime
    profile: MaturityProfile
    coverage: CoverageMatrix
    plan: ImprovementPlan | None = None


def coverage_matrix(model: MaturityModel, session: Session) -> CoverageMatrix:
    """One row per distinct (standard_id, clause) pair referenced in the model.

    Rows appear in first-reference order; clauses compare case-sensitively as
    written in the model.
    """
    order: list[tuple[str, str]] = []
    referencing: dict[tuple[str, str], list[str]] = {}
    for _fa, _cap, question in iter_questions(model):
        for ref in question.refs:
            key = (ref.standard_id, ref.clause)
            if key not in referencing:
                referencing[key] = []
                order.append(key)
            referencing[key].append(question.id)

    rows = []
    for standard_id, clause in order:
        question_ids = tuple(referencing[(standard_id, clause)])
        answers: dict[str, str] = {}
        contributions: list[int] = []
        gap = False
        for question_id in question_ids:
            question = model.question(question_id)
            if question.qtype is not QuestionType.SCALE:
                continue
            if not is_applicable(question, session.profile):
                continue
            record = session.answers.get(question_id)
            value = record.value if record is not None else ScaleValue.NI
            assert isinstance(value, ScaleValue)
            answers[question_id] = value.value
            if value is ScaleValue.NA:
                continue
            contributions.append(contribution(value))
            if value is ScaleValue.NI:
                gap = True

        if not contributions:
            status = CoverageStatus.UNASSESSED
            min_c = mean_c = None
        else:
            min_c = Fraction(min(contributions))
            mean_c = Fraction(sum(contributions), len(contributions))
            if gap:
                status = CoverageStatus.GAP
            elif all(c == 100 for c in contributions):
                status = CoverageStatus.COVERED
            else:
                status = CoverageStatus.PARTIAL

        rows.append(
            CoverageRow(
                standard_id=standard_id,
                clause=clause,
                question_ids=question_ids,
                answers=answers,
                min_contribution=min_c,
                mean_contribution=mean_c,
                status=status,
            )
        )
    return CoverageMatrix(rows=tuple(rows))


def build_bundle(
    model: MaturityModel,
    session: Session,
    config: ScoringConfig = DEFAULT_CONFIG,
    *,
    plan: ImprovementPlan | None = None,
    now: datetime | None = None,
) -> ReportBundle:
    return ReportBundle(
        model_name=model.name,
        model_version=model.version,
        organization_name=session.profile.organization_name,
        generated_at=now or datetime.now(timezone.utc),
        profile=compute_profile(model, session, config),
        coverage=coverage_matrix(model, session),
        plan=plan,
    )


# ---------------------------------------------------------------------------
# display formatting
# ---------------------------------------------------------------------------


def round_half_up(value: Fraction, decimals: int) -> Fraction:
    scale = Fraction(10) ** decimals
    scaled = value * scale + Fraction(1, 2)
    return Fraction(scaled.numerator // scaled.denominator, 1) / scale


def format_score(value: Fraction, decimals: int = 1) -> str:
    """Half-up rounded display string; trailing zero decimals are dropped."""
    scale = 10**decimals
    scaled = value * scale + Fraction(1, 2)
    units = scaled.numerator // scaled.denominator
    whole, frac = divmod(units, scale)
    if decimals == 0 or frac == 0:
        return str(whole)
    text = f"{whole}.{frac:0{decimals}d}".rstrip("0")
    return text.rstrip(".")


def _exact(value: Fraction) -> str:
    return str(value)


def _md_date(value: date) -> str:
    return value.strftime("%d/%m/%Y")


# ---------------------------------------------------------------------------
# document building (json)
# ---------------------------------------------------------------------------


def profile_document(result: MaturityProfile) -> dict[str, Any]:
    decimals = result.config.rounding
    return {
        "provisional": result.provisional,
        "focus_areas": [
            {
                "id": fa.focus_area_id,
                "name": fa.name,
                "maturity_level": fa.maturity_level,
                "score": format_score(fa.score, decimals),
                "score_exact": _exact(fa.score),
                "levels": [
                    {
                        "level": ls.level,
                        "score": format_score(ls.score, decimals),
                        "score_exact": _exact(ls.score),
                        "achieved": ls.achieved,
                        "vacuous": ls.vacuous,
                        "contributing_question_count": ls.contributing_question_count,
                    }
                    for ls in fa.level_scores
                ],
            }
            for fa in result.focus_areas
        ],
        "overall": {fa.focus_area_id: fa.maturity_level for fa in result.focus_areas},
    }


def plan_document(plan: ImprovementPlan) -> dict[str, Any]:
    decimals = plan.profile.config.rounding
    return {
        "organization_name": plan.organization_name,
        "generated_on": plan.generated_on.isoformat(),
        "target": plan.target,
        "focus_areas": [
            {
                "id": fa.focus_area_id,
                "maturity_level": fa.maturity_level,
                "levels": [
                    {"level": ls.level, "score": format_score(ls.score, decimals)}
                    for ls in fa.level_scores
                ],
            }
            for fa in plan.profile.focus_areas
        ],
        "tasks": [_task_document(task, decimals) for task in plan.tasks],
    }


def _task_document(task: ImprovementTask, decimals: int) -> dict[str, Any]:
    return {
        "task_number": task.task_number,
        "description": task.description,
        "deadline": task.deadline.isoformat(),
        "responsible": task.responsible,
        "question_id": task.question_id,
        "focus_area_id": task.focus_area_id,
        "level": task.level,
        "refs": [
            {"standard_id": ref.standard_id, "clause": ref.clause}
            | ({"note": ref.note} if ref.note is not None else {})
            for ref in task.refs
        ],
        "projected_contribution": format_score(task.projected_contribution, decimals),
    }


def coverage_document(matrix: CoverageMatrix) -> dict[str, Any]:
    return {
        "rows": [
            {
                "standard_id": row.standard_id,
                "clause": row.clause,
                "question_ids": list(row.question_ids),
                "answers": dict(row.answers),
                "min_contribution": None
                if row.min_contribution is None
                else _exact(row.min_contribution),
                "mean_contribution": None
                if row.mean_contribution is None
                else _exact(row.mean_contribution),
                "status": row.status.value,
            }
            for row in matrix.rows
        ]
    }


def bundle_document(bundle: ReportBundle) -> dict[str, Any]:
    return {
        "format": REPORT_FORMAT,
        "model": {"name": bundle.model_name, "version": bundle.model_version},
        "organization": bundle.organization_name,
        "generated_at": _format_ts(bundle.generated_at),
        "config": {
            "achievement_threshold": _exact(bundle.profile.config.achievement_threshold),
            "rounding": bundle.profile.config.rounding,
        },
        "profile": profile_document(bundle.profile),
        "plan": None if bundle.plan is None else plan_document(bundle.plan),
        "coverage": coverage_document(bundle.coverage),
    }


# ---------------------------------------------------------------------------
# renderers
# ---------------------------------------------------------------------------


def render(bundle: ReportBundle, fmt: str) -> bytes:
    """Render a bundle to json, csv, or md bytes. Deterministic per bundle."""
    if fmt == "json":
        return canonical_bytes(bundle_document(bundle))
    if fmt == "csv":
        return _render_csv(bundle)
    if fmt == "md":
        return _render_md(bundle)
    raise UnsupportedFormat(fmt)


def render_plan(plan: ImprovementPlan, fmt: str) -> bytes:
    """Render just an improvement plan (the plan-focused CLI output)."""
    if fmt == "json":
        return canonical_bytes(plan_document(plan))
    if fmt == "csv":
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["#plan"])
        writer.writerow(
            [
                "task_number",
                "description",
                "deadline",
                "responsible",
                "question_id",
                "focus_area",
                "level",
                "refs",
            ]
        )
        for task in plan.tasks:
            writer.writerow(
                [
                    task.task_number,
                    task.description,
                    task.deadline.isoformat(),
                    task.responsible,
                    task.question_id,
                    task.focus_area_id,
                    task.level,
                    "; ".join(_ref_label_plain(ref) for ref in task.refs),
                ]
            )
        return out.getvalue().encode("utf-8")
    if fmt == "md":
        lines = [_plan_md_title(plan), ""]
        lines.extend(_plan_md_lines(plan))
        lines.append("")
        return "\n".join(lines).encode("utf-8")
    raise UnsupportedFormat(fmt)


def _plan_md_title(plan: ImprovementPlan) -> str:
    if plan.organization_name:
        return f"# Capability Improvement Plan for {plan.organization_name}"
    return "# Capability Improvement Plan"


def _plan_md_lines(plan: ImprovementPlan) -> list[str]:
    if not plan.tasks:
        return ["No gaps: all scored questions are fully implemented."]
    lines = [
        "| Task Number | Description | Deadline | Responsible |",
        "| --- | --- | --- | --- |",
    ]
    for task in plan.tasks:
        lines.append(
            f"| {task.task_number} | {task.description} "
            f"| {_md_date(task.deadline)} | {task.responsible} |"
        )
    lines.append("")
    lines.append("References per task:")
    for task in plan.tasks:
        refs = (
            ", ".join(_ref_label_plain(ref) for ref in task.refs)
            if task.refs
            else "unreferenced"
        )
        lines.append(f"- {task.task_number} ({task.question_id}): {refs}")
    return lines


def _render_csv(bundle: ReportBundle) -> bytes:
    """One section per report part, each introduced by a #section marker row."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    decimals = bundle.profile.config.rounding

    writer.writerow(["#metadata"])
    writer.writerow(["model_name", "model_version", "organization", "generated_at", "threshold"])
    writer.writerow(
        [
            bundle.model_name,
            bundle.model_version,
            bundle.organization_name,
            _format_ts(bundle.generated_at),
            _exact(bundle.profile.config.achievement_threshold),
        ]
    )
    writer.writerow([])

    writer.writerow(["#levels"])
    writer.writerow(
        ["focus_area", "level", "score", "achieved", "vacuous", "contributing_questions"]
    )
    for fa in bundle.profile.focus_areas:
        for ls in fa.level_scores:
            writer.writerow(
                [
                    fa.focus_area_id,
                    ls.level,
                    format_score(ls.score, decimals),
                    str(ls.achieved).lower(),
                    str(ls.vacuous).lower(),
                    ls.contributing_question_count,
                ]
            )
    writer.writerow([])

    writer.writerow(["#focus_areas"])
    writer.writerow(["focus_area", "name", "maturity_level", "score", "provisional"])
    for fa in bundle.profile.focus_areas:
        writer.writerow(
            [
                fa.focus_area_id,
                fa.name,
                fa.maturity_level,
                format_score(fa.score, decimals),
                str(bundle.profile.provisional).lower(),
            ]
        )
    writer.writerow([])

    if bundle.plan is not None:
        writer.writerow(["#plan"])
        writer.writerow(
            [
                "task_number",
                "description",
                "deadline",
                "responsible",
                "question_id",
                "focus_area",
                "level",
                "refs",
            ]
        )
        for task in bundle.plan.tasks:
            writer.writerow(
                [
                    task.task_number,
                    task.description,
                    task.deadline.isoformat(),
                    task.responsible,
                    task.question_id,
                    task.focus_area_id,
                    task.level,
                    "; ".join(_ref_label_plain(ref) for ref in task.refs),
                ]
            )
        writer.writerow([])

    writer.writerow(["#coverage"])
    writer.writerow(
        ["standard_id", "clause", "status", "questions", "answers", "min", "mean"]
    )
    for row in bundle.coverage.rows:
        writer.writerow(
            [
                row.standard_id,
                row.clause,
                row.status.value,
                "; ".join(row.question_ids),
                "; ".join(f"{qid}={val}" for qid, val in row.answers.items()),
                "" if row.min_contribution is None else _exact(row.min_contribution),
                "" if row.mean_contribution is None else _exact(row.mean_contribution),
            ]
        )

    return out.getvalue().encode("utf-8")


def _ref_label_plain(ref) -> str:
    label = f"{ref.standard_id} {ref.clause}"
    return f"{label} ({ref.note})" if ref.note else label


def _render_md(bundle: ReportBundle) -> bytes:
    decimals = bundle.profile.config.rounding
    lines: list[str] = []
    title_org = f" for {bundle.organization_name}" if bundle.organization_name else ""
    lines.append(f"# Maturity Assessment Report{title_org}")
    lines.append("")
    lines.append(f"Model: {bundle.model_name} {bundle.model_version}")
    lines.append(f"Generated: {_md_date(bundle.generated_at.date())}")
    lines.append(
        "Achievement threshold: "
        f"{format_score(bundle.profile.config.achievement_threshold, decimals)}%"
    )
    if bundle.profile.provisional:
        lines.append("")
        lines.append(
            "Provisional: some applicable questions are unanswered and count as NI."
        )
    lines.append("")

    lines.append("## Maturity Profile")
    lines.append("")
    lines.append("| Focus Area | Level | Score | Achieved |")
    lines.append("| --- | --- | --- | --- |")
    for fa in bundle.profile.focus_areas:
        for ls in fa.level_scores:
            score = f"{format_score(ls.score, decimals)}%"
            achieved = "yes" if ls.achieved else "no"
            if ls.vacuous:
                achieved = "yes (no scored questions)"
            lines.append(f"| {fa.focus_area_id} | {ls.level} | {score} | {achieved} |")
    lines.append("")
    for fa in bundle.profile.focus_areas:
        lines.append(
            f"- {fa.focus_area_id} ({fa.name}) maturity: {fa.maturity_level}, "
            f"score {format_score(fa.score, decimals)}%"
        )
    lines.append("")
    lines.append(
        "Level scores are unweighted means of question contributions "
        "(FI=100, LI=85, PI=50, NI=0; NA answers are excluded)."
    )
    lines.append("")

    if bundle.plan is not None:
        lines.append("## Improvement Plan")
        lines.append("")
        lines.extend(_plan_md_lines(bundle.plan))
        lines.append("")

    lines.append("## Standards Coverage")
    lines.append("")
    if not bundle.coverage.rows:
        lines.append("The model cites no standards clauses.")
    else:
        lines.append("| Standard | Clause | Status | Questions |")
        lines.append("| --- | --- | --- | --- |")
        for row in bundle.coverage.rows:
            lines.append(
                f"| {row.standard_id} | {row.clause} | {row.status.value} "
                f"| {', '.join(row.question_ids)} |"
            )
    lines.append("")

    return "\n".join(lines).encode("utf-8")
