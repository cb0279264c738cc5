"""End-to-end tests for the command line interface."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from reasonscale.cli import main
from reasonscale.jsonl import read_jsonl

PERIODIC_CATALOG = {
    "seeds": [
        {
            "seed_id": "two-cycle",
            "domain": "math",
            "subject": "modular-arithmetic",
            "params": {
                "modulus": 10,
                "coeff_a": 2,
                "coeff_b": 3,
                "coeff_c": 1,
                "x0": 1,
                "x1": 2,
            },
        }
    ]
}

EXACT_SYNTH_CONFIG = {
    "synthetic": {
        "noise_rel": 0.0,
        "overhead": 0.0,
        "accuracy_mode": "deterministic",
        "decay_rate": 0.1,
    }
}


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return tmp_path


def run(*argv):
    return main(list(argv))


def gen_questions(workdir, max_variant=5):
    assert run("gen-mono", "--max-variant", str(max_variant)) == 0
    return workdir / "questions.jsonl"


def sample_questions(workdir, k=2, config=None):
    argv = [
        "sample",
        "--questions",
        "questions.jsonl",
        "--backend",
        "synthetic",
        "--samples-per-question",
        str(k),
    ]
    if config:
        argv += ["--config", config]
    assert run(*argv) == 0
    return workdir / "samples.jsonl"


def write_config(workdir, payload, name="config.json"):
    path = workdir / name
    path.write_text(json.dumps(payload), encoding="utf-8")
    return str(path)


class TestGenMono:
    def test_writes_questions_and_run_config(self, workdir, capsys):
        path = gen_questions(workdir)
        rows = read_jsonl(path)
        assert len(rows) == 20
        assert {r["domain"] for r in rows} == {"math", "science", "language", "code"}
        run_config = json.loads((workdir / "run_config.json").read_text())
        assert run_config["command"] == "gen-mono"
        assert run_config["config"]["max_variant"] == 5
        out = capsys.readouterr().out
        assert "20 questions" in out

    def test_rerun_is_byte_identical(self, workdir):
        path = gen_questions(workdir)
        first = path.read_bytes()
        first_cfg = (workdir / "run_config.json").read_bytes()
        gen_questions(workdir)
        assert path.read_bytes() == first
        assert (workdir / "run_config.json").read_bytes() == first_cfg

    def test_periodic_catalog_is_rejected(self, workdir, capsys):
        catalog = write_config(workdir, PERIODIC_CATALOG, "catalog.json")
        code = run("gen-mono", "--catalog", catalog)
        assert code == 2
        err = capsys.readouterr().err
        assert "period 2" in err
        assert "two-cycle" in err
        assert not (workdir / "questions.jsonl").exists()

    def test_skip_shortcut_check_lets_periodic_catalog_through(self, workdir):
        catalog = write_config(workdir, PERIODIC_CATALOG, "catalog.json")
        code = run("gen-mono", "--catalog", catalog, "--skip-shortcut-check")
        assert code == 0
        assert len(read_jsonl(workdir / "questions.jsonl")) == 30

    def test_missing_catalog_is_config_error(self, workdir):
        assert run("gen-mono", "--catalog", "no-such-catalog.json") == 2

    def test_bad_config_file_is_config_error(self, workdir):
        bad = workdir / "config.json"
        bad.write_text("{not json", encoding="utf-8")
        assert run("gen-mono", "--config", str(bad)) == 2

    def test_unknown_config_key_is_config_error(self, workdir):
        cfg = write_config(workdir, {"surprise": 1})
        assert run("gen-mono", "--config", cfg) == 2


class TestSample:
    def test_synthetic_samples_cover_questions(self, workdir):
        gen_questions(workdir)
        path = sample_questions(workdir, k=2)
        rows = read_jsonl(path)
        assert len(rows) == 40
        assert {r["sample_index"] for r in rows} == {0, 1}
        assert all(r["finish"] == "complete" for r in rows)

    def test_synthetic_sampling_is_deterministic(self, workdir):
        gen_questions(workdir)
        first = sample_questions(workdir).read_bytes()
        second = sample_questions(workdir).read_bytes()
        assert first == second

    def test_seed_changes_samples(self, workdir):
        gen_questions(workdir)
        sample_questions(workdir)
        first = (workdir / "samples.jsonl").read_bytes()
        assert (
            run(
                "sample",
                "--questions",
                "questions.jsonl",
                "--backend",
                "synthetic",
                "--samples-per-question",
                "2",
                "--seed",
                "9",
            )
            == 0
        )
        assert (workdir / "samples.jsonl").read_bytes() != first

    def test_remote_backend_without_endpoint_is_upstream_error(self, workdir):
        gen_questions(workdir)
        code = run("sample", "--questions", "questions.jsonl", "--backend", "remote")
        assert code == 4

    def test_missing_questions_file_is_upstream_error(self, workdir):
        assert run("sample", "--questions", "absent.jsonl", "--backend", "synthetic") == 4


class TestEvalMono:
    def test_writes_metrics_report_and_plotdata(self, workdir):
        gen_questions(workdir)
        config = write_config(workdir, EXACT_SYNTH_CONFIG)
        # K large enough that the deterministic correct counts differ at
        # every variant index; small K would tie neighboring accuracies.
        sample_questions(workdir, k=16, config=config)
        assert (
            run(
                "eval",
                "--questions",
                "questions.jsonl",
                "--samples",
                "samples.jsonl",
                "--outdir",
                "evalout",
            )
            == 0
        )
        metrics = json.loads((workdir / "evalout" / "metrics.json").read_text())
        assert metrics["mono"]["overall"]["compute_rho"] == 1.0
        assert metrics["mono"]["overall"]["log_accuracy_rho"] == -1.0
        assert metrics["law_fit"]["compute_slope"] == pytest.approx(50.0, abs=1e-9)
        assert metrics["law_fit"]["decay_rate"] == pytest.approx(0.1, abs=0.02)
        report = (workdir / "evalout" / "report.md").read_text()
        assert "Monotonicity" in report
        csv_text = (workdir / "evalout" / "plotdata" / "mono_curves.csv").read_text()
        header = csv_text.splitlines()[0]
        assert header == "scope,index,mean_norm_compute,mean_log_accuracy,n_series,n_zero_accuracy"
        run_config = json.loads((workdir / "evalout" / "run_config.json").read_text())
        assert run_config["command"] == "eval"

    def test_log_aggregation_flag_is_recorded(self, workdir):
        gen_questions(workdir)
        sample_questions(workdir, k=2)
        assert (
            run(
                "eval",
                "--questions",
                "questions.jsonl",
                "--samples",
                "samples.jsonl",
                "--log-aggregation",
                "log_of_mean",
                "--outdir",
                "evalout",
            )
            == 0
        )
        metrics = json.loads((workdir / "evalout" / "metrics.json").read_text())
        assert metrics["mono"]["log_aggregation"] == "log_of_mean"

    def test_eval_without_inputs_is_config_error(self, workdir):
        assert run("eval") == 2

    def test_missing_samples_file_is_upstream_error(self, workdir):
        gen_questions(workdir)
        code = run(
            "eval", "--questions", "questions.jsonl", "--samples", "absent.jsonl"
        )
        assert code == 4

    def test_reference_values_are_attached(self, workdir):
        gen_questions(workdir)
        sample_questions(workdir, k=2)
        ref = write_config(
            workdir,
            {"rows": [{"label": "published-7b", "compute_rho": 0.97}]},
            "reference.json",
        )
        assert (
            run(
                "eval",
                "--questions",
                "questions.jsonl",
                "--samples",
                "samples.jsonl",
                "--reference-values",
                ref,
                "--outdir",
                "evalout",
            )
            == 0
        )
        metrics = json.loads((workdir / "evalout" / "metrics.json").read_text())
        assert metrics["reference_rows"][0]["label"] == "published-7b"
        report = (workdir / "evalout" / "report.md").read_text()
        assert "Reference rows" in report
        assert "not computed by this run" in report


class TestCompoPipeline:
    def build_pool_and_triplets(self, workdir, count=6):
        gen_questions(workdir)
        assert (
            run(
                "gen-compo",
                "--from-questions",
                "questions.jsonl",
                "--pool-out",
                "pool.jsonl",
                "--count",
                str(count),
            )
            == 0
        )

    def test_gen_compo_from_questions(self, workdir):
        self.build_pool_and_triplets(workdir)
        pool_rows = read_jsonl(workdir / "pool.jsonl")
        assert len(pool_rows) == 20
        assert all("steps" in r for r in pool_rows)
        triplet_rows = read_jsonl(workdir / "triplets.jsonl")
        assert len(triplet_rows) == 6
        assert all(len(r["gold"]) == 2 for r in triplet_rows)

    def test_gen_compo_over_capacity_reports_maximum(self, workdir, capsys):
        gen_questions(workdir)
        code = run(
            "gen-compo",
            "--from-questions",
            "questions.jsonl",
            "--pool-out",
            "pool.jsonl",
            "--count",
            "11",
        )
        assert code == 3
        assert "achievable maximum: 10" in capsys.readouterr().err

    def test_triplet_sampling_and_eval(self, workdir):
        self.build_pool_and_triplets(workdir)
        config = write_config(workdir, EXACT_SYNTH_CONFIG)
        assert (
            run(
                "sample",
                "--pool",
                "pool.jsonl",
                "--triplets",
                "triplets.jsonl",
                "--backend",
                "synthetic",
                "--samples-per-question",
                "4",
                "--config",
                config,
                "--out",
                "compo_samples.jsonl",
            )
            == 0
        )
        assert (
            run(
                "eval",
                "--pool",
                "pool.jsonl",
                "--triplets",
                "triplets.jsonl",
                "--compo-samples",
                "compo_samples.jsonl",
                "--outdir",
                "compo_eval",
            )
            == 0
        )
        metrics = json.loads((workdir / "compo_eval" / "metrics.json").read_text())
        assert metrics["compo"]["compute"]["nmad"] == pytest.approx(0.0, abs=1e-9)
        scatter = (workdir / "compo_eval" / "plotdata" / "compo_scatter.csv").read_text()
        assert scatter.splitlines()[0] == "triplet_id,sum_parts,composite"
        assert len(scatter.splitlines()) == 7

    def test_select_sft(self, workdir, capsys):
        self.build_pool_and_triplets(workdir)
        config = write_config(workdir, EXACT_SYNTH_CONFIG)
        assert (
            run(
                "sample",
                "--pool",
                "pool.jsonl",
                "--triplets",
                "triplets.jsonl",
                "--backend",
                "synthetic",
                "--samples-per-question",
                "8",
                "--config",
                config,
                "--out",
                "compo_samples.jsonl",
            )
            == 0
        )
        assert (
            run(
                "select-sft",
                "--pool",
                "pool.jsonl",
                "--triplets",
                "triplets.jsonl",
                "--samples",
                "compo_samples.jsonl",
                "--mode",
                "min-gap",
            )
            == 0
        )
        dataset = read_jsonl(workdir / "sft_dataset.jsonl")
        log_rows = read_jsonl(workdir / "selection_log.jsonl")
        assert len(log_rows) == 6
        selected = [r for r in log_rows if r["status"] == "selected"]
        assert len(dataset) == 3 * len(selected)
        if dataset:
            assert {r["origin"] for r in dataset} == {"sub1", "sub2", "composite"}
            assert all(r["output"].startswith("<think>") for r in dataset)
        out = capsys.readouterr().out
        assert "triplets" in out

    def test_select_sft_uniform_mode(self, workdir):
        self.build_pool_and_triplets(workdir)
        config = write_config(workdir, EXACT_SYNTH_CONFIG)
        assert (
            run(
                "sample",
                "--pool",
                "pool.jsonl",
                "--triplets",
                "triplets.jsonl",
                "--backend",
                "synthetic",
                "--samples-per-question",
                "8",
                "--config",
                config,
                "--out",
                "compo_samples.jsonl",
            )
            == 0
        )
        assert (
            run(
                "select-sft",
                "--pool",
                "pool.jsonl",
                "--triplets",
                "triplets.jsonl",
                "--samples",
                "compo_samples.jsonl",
                "--mode",
                "uniform",
            )
            == 0
        )
        assert (workdir / "sft_dataset.jsonl").exists()
