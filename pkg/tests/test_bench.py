import csv
import json
from pathlib import Path

import pytest

from src.agent.drift import DriftMethod
from src.bench.harness import run_bench, summarize
from src.cli import main
from src.config.experiment import ExperimentConfig, load_experiment_config
from src.config.settings import Settings
from src.core.errors import ConfigError, ContradictionError
from src.core.seeding import derive_seed
from src.model.domain import model_diff
from src.pddl.domain import parse_domain
from src.records.models import ResultRow

from tests.conftest import CORPUS, corpus_path, load_domain


def _write_config(tmp_path, **overrides):
    config = {
        "domains": [
            {"name": "gripper", "domain": "gripper/domain.pddl", "problems": ["gripper/p01.pddl", "gripper/p02.pddl"]}
        ],
        "drift_levels": [0.5],
        "drift_methods": ["drop"],
        "trials": 1,
        "s_size": 6,
    }
    config.update(overrides)
    path = tmp_path / "bench.json"
    path.write_text(json.dumps(config), encoding="utf-8")
    return path


class TestConfig:
    def test_paths_resolve_against_corpus(self, tmp_path):
        config = load_experiment_config(_write_config(tmp_path), CORPUS)
        entry = config.domains[0]
        assert entry.domain == CORPUS / "gripper" / "domain.pddl"
        assert entry.problems[1].exists()
        assert config.drift_methods == [DriftMethod.DROP]
        assert config.triplets == 10

    @pytest.mark.parametrize(
        "overrides",
        [{"drift_levels": [1.5]}, {"drift_levels": [0.0]}, {"trials": 0}, {"domains": []}],
    )
    def test_invalid_config(self, tmp_path, overrides):
        with pytest.raises(ConfigError):
            load_experiment_config(_write_config(tmp_path, **overrides), CORPUS)

    def test_malformed_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{", encoding="utf-8")
        with pytest.raises(ConfigError):
            load_experiment_config(path)

    def test_default_levels(self):
        config = ExperimentConfig.model_validate(
            {"domains": [{"name": "g", "domain": "d.pddl", "problems": ["p.pddl"]}]}
        )
        assert config.drift_levels == [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0]


class TestSettings:
    def test_env_overrides(self, monkeypatch):
        monkeypatch.setenv("DRIFT_S_SIZE", "7")
        monkeypatch.setenv("DRIFT_RECORD_TIMING", "yes")
        settings = Settings.from_env()
        assert settings.s_size == 7
        assert settings.record_timing
        assert settings.with_overrides(s_size=None, exploration_limit=3).exploration_limit == 3
        assert settings.with_overrides(s_size=None).s_size == 7
        with pytest.raises(AttributeError):
            settings.with_overrides(colour="red")

    def test_corpus_relative_paths(self):
        settings = Settings.from_env().with_overrides(corpus_dir=CORPUS)
        assert settings.resolve_corpus_path(Path("gripper/domain.pddl")) == CORPUS / "gripper" / "domain.pddl"


def test_derived_seeds_are_stable():
    assert derive_seed(0, "gripper", 0.5, "drop", 1) == derive_seed(0, "gripper", 0.5, "drop", 1)
    assert derive_seed(0, "gripper", 0.5, "drop", 1) != derive_seed(0, "gripper", 0.5, "drop", 2)
    assert 0 <= derive_seed("x") < 2 ** 60


def test_error_record():
    record = ContradictionError("모순").to_record()
    assert record == {"error": "contradiction", "message": "모순"}


class TestHarness:
    def test_single_trial_gives_two_rows(self, tmp_path):
        config = load_experiment_config(_write_config(tmp_path), CORPUS)
        rows = run_bench(config, tmp_path / "out")
        assert [r.strategy for r in rows] == ["aia", "daaisy"]
        assert all(r.error is None for r in rows)
        assert all(r.duration is None for r in rows)
        with (tmp_path / "out" / "results.csv").open(encoding="utf-8") as f:
            table = list(csv.DictReader(f))
        assert len(table) == 2
        assert table[0]["strategy"] == "aia"
        summary = json.loads((tmp_path / "out" / "summary.json").read_text(encoding="utf-8"))
        assert summary["rows"] == 2
        assert summary["spearman"]["gripper"]["drop"] is None
        assert (tmp_path / "out" / "curves.csv").exists()

    def test_rerun_is_byte_identical(self, tmp_path):
        config = load_experiment_config(_write_config(tmp_path, run_aia=False, trials=2), CORPUS)
        run_bench(config, tmp_path / "a")
        run_bench(config, tmp_path / "b")
        for name in ("results.csv", "summary.json", "curves.csv"):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()

    def test_infeasible_trials_become_error_rows(self, tmp_path):
        path = _write_config(tmp_path, drift_levels=[0.9], drift_methods=["add"], run_aia=False)
        rows = run_bench(load_experiment_config(path, CORPUS), tmp_path / "out")
        assert len(rows) == 1
        assert rows[0].error == "infeasible-drift"

    def test_summary_statistics(self):
        rows = []
        for level, counts in ((0.1, (2, 4)), (0.2, (5, 5)), (0.3, (9, 7))):
            for trial, count in enumerate(counts):
                rows.append(
                    ResultRow("g", level, "drop", trial, 0, "daaisy", 20, count, None, 0.9, 0.5, 3, 1)
                )
        rows.append(ResultRow("g", 0.3, "drop", 2, 0, "daaisy", error="contradiction"))
        summary, curves = summarize(rows)
        assert summary["error_rows"] == 1
        assert summary["spearman"] == {"g": {"drop": 1.0}}
        first = summary["groups"][0]
        assert first["query_count"] == {"mean": 3.0, "std": 1.0}
        assert [c["daaisy_queries_mean"] for c in curves] == [3.0, 5.0, 8.0]


class TestCli:
    def test_diff_rover_pair(self, capsys):
        code = main(["diff", str(corpus_path("rover", "rover_init.pddl")), str(corpus_path("rover", "domain.pddl"))])
        out = capsys.readouterr().out.splitlines()
        assert code == 0
        assert len(out) == 6
        assert out[-1] == "delta: 5"
        assert "(pal (sample_rock ?r ?s ?w) (battery_half ?r) pre) + 0" in out

    def test_diff_identical(self, capsys):
        path = str(corpus_path("gripper", "domain.pddl"))
        assert main(["diff", path, path]) == 0
        assert capsys.readouterr().out.splitlines() == ["delta: 0"]

    def test_diff_incomparable(self, capsys):
        code = main(["diff", str(corpus_path("gripper", "domain.pddl")), str(corpus_path("rover", "domain.pddl"))])
        assert code == 1
        assert json.loads(capsys.readouterr().err.strip())["error"] == "incomparable-models"

    def test_missing_file_is_io_error(self, tmp_path, capsys):
        code = main(["diff", str(tmp_path / "nope.pddl"), str(corpus_path("gripper", "domain.pddl"))])
        assert code == 3
        assert json.loads(capsys.readouterr().err.strip())["error"] == "io-error"

    def test_usage_error(self):
        with pytest.raises(SystemExit) as info:
            main(["assess"])
        assert info.value.code == 2

    def test_zero_drift_assessment(self, tmp_path):
        out_dir = tmp_path / "run"
        code = main([
            "assess",
            "--domain", str(corpus_path("gripper", "domain.pddl")),
            "--problem", str(corpus_path("gripper", "p01.pddl")),
            "--generate-trace", "--triplets", "3", "--s-size", "5",
            "--out-dir", str(out_dir),
        ])
        assert code == 0
        report = (out_dir / "report.txt").read_text(encoding="utf-8")
        assert "query_count: 0" in report
        assert "accuracy: 1.000000" in report
        learned = parse_domain((out_dir / "learned_model.pddl").read_text(encoding="utf-8"))
        assert model_diff(learned, load_domain("gripper")) == 0

    def test_assessment_with_trace_and_init(self, tmp_path):
        trace_path = tmp_path / "trace.txt"
        rover = corpus_path("rover", "domain.pddl")
        problem = corpus_path("rover", "p01.pddl")
        assert main(["trace", "--domain", str(rover), "--problem", str(problem), "--out", str(trace_path)]) == 0
        out_dir = tmp_path / "run"
        code = main([
            "assess", "--domain", str(rover), "--problem", str(problem),
            "--trace", str(trace_path), "--init", str(corpus_path("rover", "rover_init.pddl")),
            "--s-size", "5", "--out-dir", str(out_dir),
        ])
        assert code == 0
        assert "query_count: " in (out_dir / "report.txt").read_text(encoding="utf-8")
        assert (out_dir / "learned_model.pddl").exists()

    def test_drift_command(self, tmp_path):
        out = tmp_path / "m_init.pddl"
        code = main([
            "drift", "--domain", str(corpus_path("gripper", "domain.pddl")),
            "--drift-amount", "0.5", "--seed", "3", "--out", str(out),
        ])
        assert code == 0
        drifted = parse_domain(out.read_text(encoding="utf-8"))
        assert model_diff(drifted, load_domain("gripper")) == 10

    def test_bench_command(self, tmp_path):
        code = main(["bench", "--config", str(_write_config(tmp_path, run_aia=False)), "--out-dir", str(tmp_path / "out")])
        assert code == 0
        assert (tmp_path / "out" / "results.csv").exists()
