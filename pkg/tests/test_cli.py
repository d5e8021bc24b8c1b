import subprocess

import pytest

from offpitch.cli import build_parser, main
from offpitch.pipeline import LOCK_NAME

SMALL_TOML = """
[projection]
permutations = 30

[matrix]
min_hashtag_uses = 3
min_user_tweets = 1

[cooccurrence]
min_edge_weight = 2.0
kcore_k = 2

[communities]
min_community_size = 2
themes_k = 2

[synth]
seed = 7
n_tweets = 1200
n_users = 350
scale = 0.15
campaigns = []
"""


@pytest.fixture()
def config_file(tmp_path):
    path = tmp_path / "run.toml"
    path.write_text(SMALL_TOML)
    return path


def run_cli(*argv):
    return main([str(a) for a in argv])


class TestExitCodes:
    def test_all_succeeds(self, config_file, tmp_path):
        out = tmp_path / "out"
        assert run_cli("all", "--config", config_file, "--out", out) == 0
        assert (out / "report" / "report.json").exists()

    def test_single_stage_succeeds(self, config_file, tmp_path):
        out = tmp_path / "out"
        assert run_cli("synth", "--config", config_file, "--out", out) == 0
        assert (out / "synth" / "corpus.ndjson").exists()

    def test_bad_config_is_1(self, tmp_path):
        bad = tmp_path / "run.toml"
        bad.write_text("[plotting]\ndpi = 300\n")
        assert run_cli("synth", "--config", bad, "--out", tmp_path / "out") == 1

    def test_held_lock_is_1(self, config_file, tmp_path):
        out = tmp_path / "out"
        out.mkdir()
        (out / LOCK_NAME).write_text("999")
        assert run_cli("synth", "--config", config_file, "--out", out) == 1

    def test_missing_prerequisite_is_3(self, config_file, tmp_path):
        assert run_cli("extract", "--config", config_file,
                       "--out", tmp_path / "empty") == 3

    def test_runtime_failure_is_2(self, tmp_path):
        corpus = tmp_path / "corpus.ndjson"
        corpus.write_text("not json\nalso not json\n")
        cfg = tmp_path / "run.toml"
        cfg.write_text('[paths]\ncorpus = "corpus.ndjson"\n')
        assert run_cli("extract", "--config", cfg, "--out", tmp_path / "out") == 2


class TestArguments:
    def test_stage_only_subset(self, config_file, tmp_path):
        out = tmp_path / "out"
        code = run_cli("all", "--config", config_file, "--out", out,
                       "--stage-only", "synth,extract")
        assert code == 0
        assert (out / "extract" / "political.ndjson").exists()
        assert not (out / "networks").exists()

    def test_stage_only_unknown_is_1(self, config_file, tmp_path):
        code = run_cli("all", "--config", config_file, "--out", tmp_path / "out",
                       "--stage-only", "polish")
        assert code == 1

    def test_env_out_honored(self, config_file, tmp_path, monkeypatch):
        monkeypatch.setenv("OFFPITCH_OUT", str(tmp_path / "env_out"))
        assert run_cli("synth", "--config", config_file) == 0
        assert (tmp_path / "env_out" / "synth" / "corpus.ndjson").exists()

    def test_out_flag_beats_env(self, config_file, tmp_path, monkeypatch):
        monkeypatch.setenv("OFFPITCH_OUT", str(tmp_path / "env_out"))
        out = tmp_path / "flag_out"
        assert run_cli("synth", "--config", config_file, "--out", out) == 0
        assert (out / "synth" / "corpus.ndjson").exists()
        assert not (tmp_path / "env_out").exists()

    def test_seed_flag_changes_corpus(self, config_file, tmp_path):
        out_a = tmp_path / "a"
        out_b = tmp_path / "b"
        assert run_cli("synth", "--config", config_file, "--out", out_a,
                       "--seed", "1") == 0
        assert run_cli("synth", "--config", config_file, "--out", out_b,
                       "--seed", "2") == 0
        a = (out_a / "synth" / "corpus.ndjson").read_bytes()
        b = (out_b / "synth" / "corpus.ndjson").read_bytes()
        assert a != b

    def test_missing_subcommand_errors(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args([])

    def test_every_stage_has_subcommand(self):
        parser = build_parser()
        for stage in ("synth", "extract", "networks", "metrics", "communities",
                      "themes", "influence", "report", "all"):
            args = parser.parse_args([stage, "--out", "x"])
            assert args.stage == stage


class TestConsoleScript:
    def test_help_runs(self):
        proc = subprocess.run(["offpitch", "--help"], capture_output=True, text=True)
        assert proc.returncode == 0
        assert "STAGE" in proc.stdout
