"""The famm command line: validate, assess, plan, interactive, serve.

Exit codes: 0 success, 1 validation or data findings, 2 usage error,
3 I/O error.
"""

from __future__ import annotations

import argparse
import os
import sys
from datetime import date
from fractions import Fraction
from pathlib import Path

from .model import MaturityModel, UnknownQuestionId, lookup_refs, validate_model
from .modelio import (
    DocumentSyntaxError,
    EncodingError,
    SchemaError,
    parse_answers,
    parse_model,
)
from .planner import PlanConfig, TARGETS, generate_plan
from .report import (
    RENDER_FORMATS,
    build_bundle,
    format_score,
    render,
    render_plan,
)
from .scoring import ScoringConfig, profile as compute_profile
from .session import (
    ChoiceOutOfRange,
    ModelMismatch,
    NotApplicable,
    Session,
    TypeMismatch,
    load_session,
    progress,
    record_answer,
    save_session,
    session_from_answers,
)

EXIT_OK = 0
EXIT_FINDINGS = 1
EXIT_USAGE = 2
EXIT_IO = 3

_DATA_ERRORS = (
    SchemaError,
    DocumentSyntaxError,
    EncodingError,
    ModelMismatch,
    NotApplicable,
    TypeMismatch,
    ChoiceOutOfRange,
    UnknownQuestionId,
)


def _fail(message: str, code: int) -> int:
    print(f"famm: {message}", file=sys.stderr)
    return code


def _read(path: str) -> bytes:
    return Path(path).read_bytes()


def _load_model(path: str) -> MaturityModel:
    model = parse_model(_read(path))
    diagnostics = [d for d in validate_model(model) if d.severity == "error"]
    if diagnostics:
        raise SchemaError("model", "a valid model", f"{len(diagnostics)} validation errors")
    return model


def _write_output(data: bytes, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(data.decode("utf-8"))
    else:
        Path(out).write_bytes(data)


def _threshold(raw: str) -> Fraction:
    try:
        value = Fraction(raw)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"invalid threshold {raw!r}")
    if not 0 < value <= 100:
        raise argparse.ArgumentTypeError("threshold must be in (0, 100]")
    return value


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_validate(args: argparse.Namespace) -> int:
    try:
        raw = _read(args.model)
    except OSError as exc:
        return _fail(str(exc), EXIT_IO)

    warnings = []
    try:
        model = parse_model(raw, warnings)
    except (SchemaError, DocumentSyntaxError, EncodingError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FINDINGS

    diagnostics = warnings + validate_model(model)
    for diagnostic in diagnostics:
        print(diagnostic, file=sys.stderr)
    if any(d.severity == "error" for d in diagnostics):
        return EXIT_FINDINGS
    print(
        f"{args.model}: ok ({len(model.focus_areas)} focus areas, "
        f"{sum(len(c.questions) for fa in model.focus_areas for c in fa.capabilities)} questions)"
    )
    return EXIT_OK


def _print_summary(result) -> None:
    for fa in result.focus_areas:
        print(f"{fa.focus_area_id} ({fa.name}) maturity: {fa.maturity_level}")
        levels = "  ".join(
            f"{ls.level}: {format_score(ls.score, result.config.rounding)}%"
            for ls in fa.level_scores
        )
        print(f"  {levels}")
    if result.provisional:
        print("provisional: unanswered questions counted as NI")


def cmd_assess(args: argparse.Namespace) -> int:
    try:
        model = _load_model(args.model)
        answers = parse_answers(_read(args.answers))
        session = session_from_answers(model, answers)
    except OSError as exc:
        return _fail(str(exc), EXIT_IO)
    except _DATA_ERRORS as exc:
        return _fail(str(exc), EXIT_FINDINGS)

    config = ScoringConfig(achievement_threshold=args.threshold, rounding=args.rounding)
    result = compute_profile(model, session, config)
    _print_summary(result)

    bundle = build_bundle(model, session, config)
    data = render(bundle, args.format)
    try:
        if args.out is not None:
            _write_output(data, args.out)
        elif args.format != "md":
            print()
            sys.stdout.write(data.decode("utf-8"))
    except OSError as exc:
        return _fail(str(exc), EXIT_IO)
    return EXIT_OK


def cmd_plan(args: argparse.Namespace) -> int:
    try:
        model = _load_model(args.model)
        answers = parse_answers(_read(args.answers))
        session = session_from_answers(model, answers)
    except OSError as exc:
        return _fail(str(exc), EXIT_IO)
    except _DATA_ERRORS as exc:
        return _fail(str(exc), EXIT_FINDINGS)

    scoring_config = ScoringConfig(achievement_threshold=args.threshold)
    plan_config = PlanConfig(
        default_deadline_offset=args.deadline_days,
        default_responsible=args.responsible,
        target=args.target,
    )
    result = compute_profile(model, session, scoring_config)
    plan = generate_plan(model, session, result, plan_config, today=date.today())

    if not plan.tasks:
        print("no gaps: all scored questions are fully implemented")
    else:
        print(f"{len(plan.tasks)} improvement tasks (target: {plan.target})")
    try:
        _write_output(render_plan(plan, args.format), args.out)
    except OSError as exc:
        return _fail(str(exc), EXIT_IO)
    return EXIT_OK


def cmd_interactive(args: argparse.Namespace) -> int:
    try:
        model = _load_model(args.model)
    except OSError as exc:
        return _fail(str(exc), EXIT_IO)
    except _DATA_ERRORS as exc:
        return _fail(str(exc), EXIT_FINDINGS)

    session_path = args.session or args.resume or "famm-session.json"
    try:
        if args.resume:
            session = load_session(_read(args.resume), model)
        else:
            from .model import OrganizationProfile
            from .session import create_session

            name = _prompt("Organization name (blank to skip): ")
            session = create_session(model, OrganizationProfile(organization_name=name or ""))
    except OSError as exc:
        return _fail(str(exc), EXIT_IO)
    except _DATA_ERRORS as exc:
        return _fail(str(exc), EXIT_FINDINGS)

    session = _run_wizard(model, session)

    try:
        Path(session_path).write_bytes(save_session(session))
    except OSError as exc:
        return _fail(str(exc), EXIT_IO)
    counts = progress(model, session)
    print(f"saved {session_path} ({counts.answered_all}/{counts.total_all} answered)")
    return EXIT_OK


def _prompt(text: str) -> str | None:
    """Read one line; None signals an interrupt (persist and stop)."""
    try:
        return input(text)
    except (KeyboardInterrupt, EOFError):
        print()
        return None


def _run_wizard(model: MaturityModel, session: Session) -> Session:
    from .model import applicable_questions
    from .scoring import ScoringConfig

    config = ScoringConfig()
    applicable = {q.id for q in applicable_questions(model, session.profile)}
    stop = False
    for fa in model.focus_areas:
        if stop:
            break
        touched = False
        for cap in fa.capabilities:
            if stop:
                break
            for question in cap.questions:
                if question.id not in applicable or question.id in session.answers:
                    continue
                value = _ask(model, question, cap.level)
                if value is _INTERRUPT:
                    stop = True
                    break
                if value is None:
                    continue
                session = record_answer(model, session, question.id, value)
                touched = True
        if touched and not stop:
            result = compute_profile(model, session, config)
            for fa_score in result.focus_areas:
                if fa_score.focus_area_id == fa.id:
                    levels = "  ".join(
                        f"{ls.level}: {format_score(ls.score, config.rounding)}%"
                        for ls in fa_score.level_scores
                    )
                    print(f"-- {fa.id} scores  {levels}  maturity: {fa_score.maturity_level}")
    return session


_INTERRUPT = object()


def _ask(model: MaturityModel, question, level: str):
    from datetime import date as _date

    from .model import QuestionType, ScaleValue

    print()
    print(f"[{question.id}] (level {level}) {question.text}")
    for standard, clause, note in lookup_refs(model, question.id):
        label = f"    ref: {standard.title}, clause {clause}"
        if note:
            label += f" ({note})"
        print(label)

    if question.qtype is QuestionType.SCALE:
        while True:
            raw = _prompt("  answer FI/LI/PI/NI/NA (blank to skip): ")
            if raw is None:
                return _INTERRUPT
            raw = raw.strip().upper()
            if not raw:
                return None
            try:
                return ScaleValue(raw)
            except ValueError:
                print("  please answer FI, LI, PI, NI or NA")
    elif question.qtype is QuestionType.MULTIPLE_CHOICE:
        choices = question.choices or ()
        for i, choice in enumerate(choices, start=1):
            print(f"    {i}. {choice}")
        while True:
            raw = _prompt(f"  choice 1-{len(choices)} (blank to skip): ")
            if raw is None:
                return _INTERRUPT
            raw = raw.strip()
            if not raw:
                return None
            if raw.isdigit() and 1 <= int(raw) <= len(choices):
                return int(raw) - 1
            print(f"  please enter a number between 1 and {len(choices)}")
    else:
        while True:
            raw = _prompt("  date YYYY-MM-DD (blank to skip): ")
            if raw is None:
                return _INTERRUPT
            raw = raw.strip()
            if not raw:
                return None
            try:
                return _date.fromisoformat(raw)
            except ValueError:
                print("  please enter an ISO date, e.g. 2018-08-01")


_LOOPBACK_HOSTS = ("127.0.0.1", "localhost", "::1")


def cmd_serve(args: argparse.Namespace) -> int:
    from .service import make_server

    if args.host not in _LOOPBACK_HOSTS and not args.allow_remote:
        return _fail(
            f"refusing to bind non-local host {args.host!r} without --allow-remote",
            EXIT_USAGE,
        )
    try:
        model = _load_model(args.model)
    except OSError as exc:
        return _fail(str(exc), EXIT_IO)
    except _DATA_ERRORS as exc:
        return _fail(str(exc), EXIT_FINDINGS)

    session_dir = args.session_dir or os.environ.get("FAMM_SESSION_DIR")
    try:
        server = make_server(
            model,
            host=args.host,
            port=args.port,
            session_dir=session_dir,
            ui_dir=args.ui_dir,
            verbose=args.verbose,
        )
    except OSError as exc:
        return _fail(f"cannot bind {args.host}:{args.port}: {exc}", EXIT_IO)

    host, port = server.server_address[:2]
    print(f"serving on http://{host}:{port}/ (Ctrl-C to stop)")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="famm",
        description="Standards-transparent maturity self-assessment",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a model file")
    p.add_argument("model")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("assess", help="score an answers file against a model")
    p.add_argument("model")
    p.add_argument("answers")
    p.add_argument("--threshold", type=_threshold, default=Fraction(85))
    p.add_argument("--rounding", type=int, default=1)
    p.add_argument("--format", choices=RENDER_FORMATS, default="md")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_assess)

    p = sub.add_parser("plan", help="generate an improvement plan")
    p.add_argument("model")
    p.add_argument("answers")
    p.add_argument("--target", choices=TARGETS, default="next_level")
    p.add_argument("--threshold", type=_threshold, default=Fraction(85))
    p.add_argument("--deadline-days", type=int, default=60)
    p.add_argument("--responsible", default="unassigned")
    p.add_argument("--format", choices=RENDER_FORMATS, default="md")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("interactive", help="answer the questionnaire in the terminal")
    p.add_argument("model")
    p.add_argument("--resume", default=None, help="existing session file to continue")
    p.add_argument("--session", default=None, help="where to write the session file")
    p.set_defaults(func=cmd_interactive)

    p = sub.add_parser("serve", help="run the local HTTP API and web UI")
    p.add_argument("model")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8417)
    p.add_argument("--session-dir", default=None, help="defaults to $FAMM_SESSION_DIR")
    p.add_argument("--ui-dir", default=None, help="static UI bundle to serve at /")
    p.add_argument("--allow-remote", action="store_true")
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
