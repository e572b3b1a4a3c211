"""CLI behavior: exit codes, output contracts, wizard flow."""

from __future__ import annotations

import io
import json

import pytest

from famm.cli import main
from famm.model import ScaleValue
from famm.modelio import serialize_model
from famm.seed import seed_model_bytes
from famm.session import load_session, save_session
from helpers import session_with, write_answers_file


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestValidate:
    def test_seed_model_passes(self, capsys, seed_model_file):
        code, out, err = run(capsys, "validate", str(seed_model_file))
        assert code == 0
        assert "ok" in out

    def test_missing_file_is_io_error(self, capsys, tmp_path):
        code, _out, err = run(capsys, "validate", str(tmp_path / "nope.json"))
        assert code == 3
        assert "famm:" in err

    def test_dangling_standard_is_a_finding(self, capsys, tmp_path, seed_model):
        doc = json.loads(seed_model_bytes())
        doc["focus_areas"][0]["capabilities"][0]["questions"][0]["refs"][0][
            "standard_id"
        ] = "ghost"
        path = tmp_path / "broken.json"
        path.write_text(json.dumps(doc))
        code, _out, err = run(capsys, "validate", str(path))
        assert code == 1
        assert "refs[0].standard_id" in err

    def test_unparseable_model_is_a_finding(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{")
        code, _out, err = run(capsys, "validate", str(path))
        assert code == 1

    def test_unknown_extra_key_is_warning_only(self, capsys, tmp_path):
        doc = json.loads(seed_model_bytes())
        doc["future_field"] = 1
        path = tmp_path / "model.json"
        path.write_text(json.dumps(doc))
        code, _out, err = run(capsys, "validate", str(path))
        assert code == 0
        assert "warning" in err and "future_field" in err


class TestAssess:
    def test_summary_names_maturity(self, capsys, tmp_path, seed_model_file, seed_model):
        answers = write_answers_file(
            tmp_path / "a.json", seed_model, {"F1Q1": "FI", "F1Q2": "LI", "F1Q5": "PI"}
        )
        code, out, _err = run(capsys, "assess", str(seed_model_file), str(answers))
        assert code == 0
        assert "F1 (Identity Management and Access Control) maturity: B" in out

    def test_threshold_50_reaches_c(self, capsys, tmp_path, seed_model_file, seed_model):
        answers = write_answers_file(
            tmp_path / "a.json", seed_model, {"F1Q1": "FI", "F1Q2": "LI", "F1Q5": "PI"}
        )
        code, out, _err = run(
            capsys, "assess", str(seed_model_file), str(answers), "--threshold", "50"
        )
        assert code == 0
        assert "maturity: C" in out

    def test_empty_answers_is_provisional_none(self, capsys, tmp_path, seed_model_file, seed_model):
        answers = write_answers_file(tmp_path / "a.json", seed_model, {})
        code, out, _err = run(capsys, "assess", str(seed_model_file), str(answers))
        assert code == 0
        assert "maturity: none" in out
        assert "provisional" in out

    def test_json_report_written(self, capsys, tmp_path, seed_model_file, seed_model):
        answers = write_answers_file(tmp_path / "a.json", seed_model, {"F1Q1": "FI"})
        out_path = tmp_path / "report.json"
        code, _out, _err = run(
            capsys,
            "assess",
            str(seed_model_file),
            str(answers),
            "--format",
            "json",
            "--out",
            str(out_path),
        )
        assert code == 0
        doc = json.loads(out_path.read_bytes())
        assert doc["format"] == "famm-report/1"
        assert doc["profile"]["focus_areas"][0]["levels"][0]["score"] == "100"

    def test_schema_error_exits_1(self, capsys, tmp_path, seed_model_file):
        answers = tmp_path / "a.json"
        answers.write_text('{"format": "famm-answers/1"}')
        code, _out, err = run(capsys, "assess", str(seed_model_file), str(answers))
        assert code == 1
        assert "famm:" in err

    def test_missing_answers_file_exits_3(self, capsys, tmp_path, seed_model_file):
        code, _out, _err = run(
            capsys, "assess", str(seed_model_file), str(tmp_path / "missing.json")
        )
        assert code == 3


class TestPlan:
    def test_golden_markdown_plan(self, capsys, tmp_path, seed_model_file, seed_model):
        answers = write_answers_file(
            tmp_path / "a.json", seed_model, {"F1Q1": "NI", "F1Q2": "NI"}
        )
        out_path = tmp_path / "plan.md"
        code, out, _err = run(
            capsys,
            "plan",
            str(seed_model_file),
            str(answers),
            "--target",
            "full_maturity",
            "--responsible",
            "B.Y. Ozkan",
            "--out",
            str(out_path),
        )
        assert code == 0
        text = out_path.read_text()
        assert "| Task Number | Description | Deadline | Responsible |" in text
        assert "| T1 | Ensure that users login to the systems by unique user-ids. |" in text
        assert "B.Y. Ozkan" in text

    def test_no_gaps_message(self, capsys, tmp_path, seed_model_file, seed_model):
        answers = write_answers_file(
            tmp_path / "a.json", seed_model, {"F1Q1": "FI", "F1Q2": "FI", "F1Q5": "FI"}
        )
        code, out, _err = run(capsys, "plan", str(seed_model_file), str(answers))
        assert code == 0
        assert "no gaps" in out

    def test_next_level_is_subset_of_full(self, capsys, tmp_path, seed_model_file, seed_model):
        answers = write_answers_file(
            tmp_path / "a.json", seed_model, {"F1Q1": "NI", "F1Q2": "FI", "F1Q5": "NI"}
        )

        def task_ids(target):
            out_path = tmp_path / f"{target}.json"
            code, _out, _err = run(
                capsys,
                "plan",
                str(seed_model_file),
                str(answers),
                "--target",
                target,
                "--format",
                "json",
                "--out",
                str(out_path),
            )
            assert code == 0
            return {t["question_id"] for t in json.loads(out_path.read_bytes())["tasks"]}

        assert task_ids("next_level") <= task_ids("threshold_only") <= task_ids("full_maturity")


class TestUsageErrors:
    def test_unknown_subcommand_exits_2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 2

    def test_bad_threshold_exits_2(self, capsys, tmp_path, seed_model_file):
        with pytest.raises(SystemExit) as exc:
            main(["assess", str(seed_model_file), "x", "--threshold", "200"])
        assert exc.value.code == 2


class TestInteractive:
    def _feed(self, monkeypatch, lines):
        monkeypatch.setattr("sys.stdin", io.StringIO("\n".join(lines) + "\n"))

    def test_full_wizard_run(self, capsys, tmp_path, monkeypatch, seed_model_file, seed_model):
        session_path = tmp_path / "session.json"
        self._feed(monkeypatch, ["UU", "fi", "li", "2", "2018-08-01", "pi"])
        code = main(
            ["interactive", str(seed_model_file), "--session", str(session_path)]
        )
        out = capsys.readouterr().out
        assert code == 0
        session = load_session(session_path.read_bytes(), seed_model)
        assert len(session.answers) == 5
        assert session.answers["F1Q1"].value is ScaleValue.FI
        assert session.answers["F1Q3"].value == 1  # 1-based prompt, 0-based storage
        assert session.profile.organization_name == "UU"
        assert "maturity" in out  # live scores printed per focus area

    def test_resume_prompts_only_remaining(
        self, capsys, tmp_path, monkeypatch, seed_model_file, seed_model
    ):
        existing = session_with(seed_model, {"F1Q1": ScaleValue.FI, "F1Q2": ScaleValue.LI})
        session_path = tmp_path / "session.json"
        session_path.write_bytes(save_session(existing))
        # Only F1Q3, F1Q4, F1Q5 remain.
        self._feed(monkeypatch, ["1", "2018-08-01", "ni"])
        code = main(["interactive", str(seed_model_file), "--resume", str(session_path)])
        assert code == 0
        session = load_session(session_path.read_bytes(), seed_model)
        assert len(session.answers) == 5
        assert session.answers["F1Q1"].value is ScaleValue.FI  # untouched
        assert session.answers["F1Q5"].value is ScaleValue.NI

    def test_interrupt_persists_partial_session(
        self, capsys, tmp_path, monkeypatch, seed_model_file, seed_model
    ):
        session_path = tmp_path / "session.json"
        # EOF after the first answer behaves like an interrupt.
        monkeypatch.setattr("sys.stdin", io.StringIO("UU\nfi\n"))
        code = main(
            ["interactive", str(seed_model_file), "--session", str(session_path)]
        )
        assert code == 0
        session = load_session(session_path.read_bytes(), seed_model)
        assert len(session.answers) == 1
        assert session.answers["F1Q1"].value is ScaleValue.FI

    def test_invalid_then_valid_input(self, capsys, tmp_path, monkeypatch, seed_model_file, seed_model):
        session_path = tmp_path / "session.json"
        self._feed(monkeypatch, ["UU", "banana", "fi"])  # retry after bad token
        code = main(
            ["interactive", str(seed_model_file), "--session", str(session_path)]
        )
        assert code == 0
        session = load_session(session_path.read_bytes(), seed_model)
        assert session.answers["F1Q1"].value is ScaleValue.FI

    def test_refs_displayed_for_transparency(
        self, capsys, tmp_path, monkeypatch, seed_model_file
    ):
        self._feed(monkeypatch, ["UU"])
        main(["interactive", str(seed_model_file), "--session", str(tmp_path / "s.json")])
        out = capsys.readouterr().out
        assert "clause 9.2.1.a" in out

    def test_unwritable_session_exits_3(self, capsys, tmp_path, monkeypatch, seed_model_file):
        monkeypatch.setattr("sys.stdin", io.StringIO("UU\n"))
        code = main(
            ["interactive", str(seed_model_file), "--session", str(tmp_path / "no" / "s.json")]
        )
        assert code == 3


class TestServe:
    def test_non_local_bind_requires_flag(self, capsys, seed_model_file):
        code = main(["serve", str(seed_model_file), "--host", "0.0.0.0"])
        assert code == 2

    def test_session_dir_env_default(self, capsys, tmp_path, monkeypatch, seed_model_file):
        captured = {}

        def fake_make_server(model, host, port, session_dir, ui_dir, verbose):
            captured["session_dir"] = session_dir

            class _Stub:
                server_address = (host, 0)

                def serve_forever(self):
                    raise KeyboardInterrupt

                def server_close(self):
                    pass

            return _Stub()

        import famm.service

        monkeypatch.setattr(famm.service, "make_server", fake_make_server)
        monkeypatch.setenv("FAMM_SESSION_DIR", str(tmp_path / "envdir"))
        code = main(["serve", str(seed_model_file)])
        assert code == 0
        assert captured["session_dir"] == str(tmp_path / "envdir")

    def test_bind_failure_exits_3(self, capsys, seed_model_file):
        import socket

        blocker = socket.socket()
        blocker.bind(("127.0.0.1", 0))
        port = blocker.getsockname()[1]
        try:
            code = main(["serve", str(seed_model_file), "--port", str(port)])
        finally:
            blocker.close()
        assert code == 3
