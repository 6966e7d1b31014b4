"""Workbench wiring: persistence sync, restore, archive round trips."""

import pytest

from twai.config import load_config
from twai.errors import SessionNotFound
from twai.workbench import Workbench

from conftest import PROMPT_REDESIGN, make_bench


def drive_full_loop(bench):
    session = bench.create_session("loop")
    turn = bench.submit_prompt(session.id, PROMPT_REDESIGN)
    bench.ingest_document("The home screen is cluttered.", "ux notes", doc_id="notes")
    bench.switch_mode(session.id, "verification")
    response_id = turn.responses[0].id
    bench.verify_source(session.id, response_id)
    bench.run_double_check(session.id, response_id)
    bench.run_compare(session.id, "What should we fix first?")
    bench.switch_mode(session.id, "decision")
    table = bench.decision_table(session.id)
    bench.record_decision(session.id, table.rows[0].response_id, "grounded")
    bench.switch_mode(session.id, "generation")
    return session.id


def test_restore_from_workspace(tmp_path):
    bench = make_bench(tmp_path)
    session_id = drive_full_loop(bench)
    # a fresh workbench over the same workspace sees identical state
    reopened = Workbench(bench.config)
    restored = reopened.get_session(session_id)
    original = bench.get_session(session_id)
    assert restored.to_dict() == original.to_dict()
    assert len(reopened.corpus.documents) == 1
    # and the restored session is fully operable
    reopened.submit_prompt(session_id, "Follow-up prompt about navigation.")


def test_archive_round_trip_through_workbench(tmp_path):
    bench = make_bench(tmp_path, name="src")
    session_id = drive_full_loop(bench)
    archive_path = tmp_path / "session.zip"
    bench.export_session(session_id, archive_path)

    other = make_bench(tmp_path, name="dst")
    imported = other.import_session(archive_path)
    assert imported.id == session_id
    assert imported.to_dict() == bench.get_session(session_id).to_dict()


def test_export_unknown_session(tmp_path):
    bench = make_bench(tmp_path)
    with pytest.raises(SessionNotFound):
        bench.export_session("ghost", tmp_path / "out.zip")


def test_scorecard_persisted(tmp_path):
    bench = make_bench(tmp_path)
    from twai.scorecard import ALL_ITEMS, ScorecardEntry

    bench.record_scorecard_entry(
        ScorecardEntry("r1", "workbench", {item: "good" for item in ALL_ITEMS})
    )
    reopened = Workbench(bench.config)
    assert reopened.scorecard_report("workbench").n_raters == 1


def test_metrics_panel_from_config(tmp_path):
    metrics_file = tmp_path / "metrics.json"
    metrics_file.write_text(
        '{"wau": {"value": 10, "unit": "users", "as_of": "2026-01-01"}}'
    )
    bench = make_bench(tmp_path, metrics_file=str(metrics_file))
    assert bench.metrics_panel()["wau"]["value"] == 10


def test_env_workspace_precedence(tmp_path):
    cfg = load_config(env={"TWAI_WORKSPACE": str(tmp_path / "from-env")}, overrides={})
    assert cfg.workspace == str(tmp_path / "from-env")
    # explicit override beats the environment
    cfg = load_config(
        env={"TWAI_WORKSPACE": str(tmp_path / "from-env")},
        overrides={"workspace": str(tmp_path / "from-flag")},
    )
    assert cfg.workspace == str(tmp_path / "from-flag")


def test_config_file_unknown_key(tmp_path):
    config_file = tmp_path / "config.json"
    config_file.write_text('{"worskpace": "typo"}')
    with pytest.raises(ValueError):
        load_config(config_file=config_file, env={})


def test_ingest_file_json_and_text(tmp_path):
    bench = make_bench(tmp_path)
    text_file = tmp_path / "notes.txt"
    text_file.write_text("Plain text corpus body with several tokens.")
    doc, chunks = bench.ingest_file(text_file)
    assert doc.title == "notes.txt"
    assert chunks == 1

    json_file = tmp_path / "study.json"
    json_file.write_text(
        '{"title": "study", "body": "JSON corpus body goes here.", "metadata": {"team": "ux"}}'
    )
    doc, _ = bench.ingest_file(json_file)
    assert doc.title == "study"
    assert doc.metadata == {"team": "ux"}
