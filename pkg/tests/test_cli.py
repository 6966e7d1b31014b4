import json

import pytest
from click.testing import CliRunner

from twai.cli import main

from conftest import DEFAULT_PROVIDERS, SEARCH_FIXTURE


@pytest.fixture
def env(tmp_path):
    """A workspace plus provider/search fixture files on disk."""
    providers = tmp_path / "providers.json"
    providers.write_text(json.dumps(DEFAULT_PROVIDERS))
    search = tmp_path / "search.json"
    search.write_text(json.dumps(SEARCH_FIXTURE))
    return {
        "workspace": str(tmp_path / "ws"),
        "providers": str(providers),
        "search": str(search),
    }


def run(env, *args, expect_exit=0, json_mode=True):
    runner = CliRunner()
    base = ["--workspace", env["workspace"], "--providers", env["providers"],
            "--search-fixture", env["search"]]
    if json_mode:
        base.append("--json")
    result = runner.invoke(main, base + list(args))
    if result.exit_code != expect_exit:  # pragma: no cover - debugging aid
        raise AssertionError(
            f"exit {result.exit_code} != {expect_exit}\n"
            f"stdout: {result.output}\nstderr: {result.stderr}"
        )
    return result


def run_json(env, *args):
    return json.loads(run(env, *args).output)


class TestIngest:
    def test_ingest_prints_chunk_count(self, env, tmp_path):
        corpus = tmp_path / "notes.txt"
        corpus.write_text("The home screen is cluttered. Users cannot find titles.")
        result = run(env, "ingest", str(corpus), json_mode=False)
        assert "1 chunks" in result.output

    def test_ingest_missing_file_usage_error(self, env):
        result = CliRunner().invoke(
            main, ["--workspace", env["workspace"], "ingest", "no-such-file.txt"]
        )
        assert result.exit_code == 2

    def test_duplicate_doc_operational_error(self, env, tmp_path):
        corpus = tmp_path / "notes.txt"
        corpus.write_text("Some corpus words for testing.")
        run(env, "ingest", str(corpus), "--doc-id", "d1")
        result = run(env, "ingest", str(corpus), "--doc-id", "d1", expect_exit=1)
        assert "DuplicateDocument" in result.stderr


class TestGenerateVerifyDecide:
    def full_loop(self, env, tmp_path):
        corpus = tmp_path / "notes.txt"
        corpus.write_text("The home screen is cluttered.")
        run(env, "ingest", str(corpus))
        generated = run_json(
            env, "generate", "--new", "cli-session",
            "--prompt", "Tell me about the most critical problem of Netflix's UI.",
        )
        session_id = generated["session_id"]
        response_id = generated["turn"]["responses"][0]["id"]
        return session_id, response_id

    def test_generate_creates_session_and_responses(self, env, tmp_path):
        session_id, response_id = self.full_loop(env, tmp_path)
        assert session_id
        assert response_id

    def test_verify_source_and_double_check(self, env, tmp_path):
        session_id, response_id = self.full_loop(env, tmp_path)
        source = run_json(env, "verify", "--session", session_id,
                          "--response", response_id, "--method", "source")
        assert "coverage" in source
        dc = run_json(env, "verify", "--session", session_id,
                      "--response", response_id, "--method", "double-check")
        assert "highlights" in dc

    def test_decide_without_verifications_exits_1(self, env, tmp_path):
        generated = run_json(
            env, "generate", "--new", "s", "--prompt", "Anything at all?"
        )
        result = run(env, "decide", "--session", generated["session_id"], expect_exit=1)
        assert "NoVerifications" in result.stderr

    def test_decide_table_and_choice(self, env, tmp_path):
        session_id, response_id = self.full_loop(env, tmp_path)
        run_json(env, "verify", "--session", session_id,
                 "--response", response_id, "--method", "source")
        table = run_json(env, "decide", "--session", session_id)
        assert table["rows"]
        chosen = table["rows"][0]["response_id"]
        decided = run_json(env, "decide", "--session", session_id,
                           "--choose", chosen, "--rationale", "cited")
        assert decided["chosen_response_id"] == chosen

    def test_compare_command(self, env, tmp_path):
        session_id, _ = self.full_loop(env, tmp_path)
        report = run_json(env, "compare", "--session", session_id,
                          "--prompt", "What should we fix first?")
        assert "clusters" in report

    def test_generate_human_output(self, env, tmp_path):
        result = run(
            env, "generate", "--new", "s",
            "--prompt", "Tell me about the most critical problem of Netflix's UI.",
            json_mode=False,
        )
        assert "mock-a" in result.output

    def test_missing_required_flag_usage_error(self, env):
        result = CliRunner().invoke(main, ["generate"])
        assert result.exit_code == 2


class TestScorecard:
    def seed_csv(self, tmp_path):
        """20 raters totaling 73 for the workbench, -2 for the old tool."""
        rows = ["rater_id,tool_id,efficiency,usage_understanding,control,confidence,trust,satisfaction"]
        def row(rater, tool, total):
            goods = max(total, 0)
            needs = max(-total, 0)
            levels = ["good"] * goods + ["needs_improvement"] * needs
            levels += ["okay"] * (5 - len(levels))
            return ",".join([rater, tool] + levels + ["okay"])
        sums_new = [4] * 13 + [3] * 7
        sums_old = [0] * 18 + [-1] * 2
        for i, total in enumerate(sums_new):
            rows.append(row(f"r{i}", "workbench", total))
        for i, total in enumerate(sums_old):
            rows.append(row(f"r{i}", "legacy", total))
        path = tmp_path / "ratings.csv"
        path.write_text("\n".join(rows) + "\n")
        return path

    def test_import_and_aggregate_365(self, env, tmp_path):
        path = self.seed_csv(tmp_path)
        imported = run_json(env, "scorecard", "import", str(path))
        assert imported["imported"] == 40
        result = run(env, "scorecard", "aggregate", "--tool", "workbench", json_mode=False)
        assert "3.65" in result.output
        report = run_json(env, "scorecard", "aggregate", "--tool", "workbench")
        assert abs(report["overall_mean_of_sums"] - 3.65) < 1e-9

    def test_compare_delta(self, env, tmp_path):
        run_json(env, "scorecard", "import", str(self.seed_csv(tmp_path)))
        deltas = run_json(env, "scorecard", "compare",
                          "--tool-a", "legacy", "--tool-b", "workbench")
        assert abs(deltas["overall_delta"] - 3.75) < 1e-9

    def test_record_and_export(self, env, tmp_path):
        ratings = [
            "--rating", "efficiency=good",
            "--rating", "usage_understanding=good",
            "--rating", "control=okay",
            "--rating", "confidence=good",
            "--rating", "trust=good",
            "--rating", "satisfaction=good",
        ]
        run_json(env, "scorecard", "record", "--rater", "r1", "--tool", "workbench", *ratings)
        out = tmp_path / "export.csv"
        run(env, "scorecard", "export", "--out", str(out))
        assert "r1,workbench" in out.read_text()

    def test_aggregate_missing_tool_exits_1(self, env):
        result = run(env, "scorecard", "aggregate", "--tool", "ghost", expect_exit=1)
        assert "NoEntries" in result.stderr


class TestArchiveCommands:
    def test_export_import_round_trip(self, env, tmp_path):
        generated = run_json(
            env, "generate", "--new", "to-export",
            "--prompt", "Tell me about the most critical problem of Netflix's UI.",
        )
        session_id = generated["session_id"]
        archive = tmp_path / "session.zip"
        exported = run_json(env, "export", "--session", session_id, "--out", str(archive))
        assert exported["manifest"]["record_count"] >= 2

        other_env = dict(env, workspace=str(tmp_path / "other-ws"))
        imported = run_json(other_env, "import", str(archive))
        assert imported["session_id"] == session_id
        assert imported["turn_count"] == 1

    def test_import_corrupt_archive_exits_1(self, env, tmp_path):
        junk = tmp_path / "junk.zip"
        junk.write_text("not a zip")
        result = run(env, "import", str(junk), expect_exit=1)
        assert "CorruptArchive" in result.stderr
