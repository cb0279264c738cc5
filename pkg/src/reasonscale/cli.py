"""Command-line pipeline: generate, compose, sample, evaluate, select.

Every command resolves its configuration from defaults, then an
optional --config JSON file, then explicit flags, and freezes the
resolved result beside its outputs so a run can be reproduced from its
artifacts alone. All outputs are written atomically and contain no
timestamps; rerunning a command with the same inputs yields
byte-identical files.

Exit codes: 0 success, 2 configuration error, 3 capacity or
feasibility error, 4 upstream I/O or endpoint failure.
"""

from __future__ import annotations

import argparse
import copy
import csv
import io
import json
import sys
from pathlib import Path

from .client import sample_remote
from .compo import (
    ConnectorTemplate,
    TaggedQuestion,
    Triplet,
    build_triplets,
    read_pool,
    read_triplets,
    write_triplets,
)
from .errors import (
    CapacityError,
    ConfigError,
    FitError,
    IngestError,
    ParameterError,
    ReasonscaleError,
    RemoteBatchError,
    TemplateError,
)
from .families import (
    check_no_shortcut,
    gen_family,
    group_families,
    read_questions,
    write_questions,
)
from .jsonl import dumps_canonical, read_jsonl, write_text_atomic
from .metrics import (
    CompoReport,
    LawFit,
    MonoReport,
    compo_eval,
    estimate_question,
    fit_laws,
    group_records,
    mono_eval,
    triplet_estimates,
)
from .parsing import extract_answers, grade
from .records import SampleRecord, SamplingConfig, read_records, write_records
from .seeds import default_catalog, load_catalog
from .sft import Candidate, TripletSamples, emit_dataset
from .synthetic import (
    SynthModelSpec,
    respond_to_questions,
    respond_to_triplets,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CAPACITY = 3
EXIT_UPSTREAM = 4

DEFAULT_CONFIG = {
    "seed": 0,
    "catalog": None,
    "max_variant": 30,
    "max_period": 6,
    "skip_shortcut_check": False,
    "count": None,
    "connector": None,
    "mode": "min_gap",
    "log_aggregation": "per_question",
    "backend": "synthetic",
    "reference_values": None,
    "sampling": {
        "endpoint": "",
        "model": "",
        "temperature": None,
        "samples_per_question": 8,
        "max_tokens": 20480,
        "think_open": "<think>",
        "think_close": "</think>",
        "max_in_flight": 4,
        "max_attempts": 3,
        "backoff_base": 1.0,
        "timeout": 600.0,
        "api_key_env": "OPENAI_API_KEY",
        "token_mode": "whitespace",
    },
    "synthetic": {
        "tokens_per_step": 50.0,
        "overhead": 10.0,
        "noise_rel": 0.05,
        "decay_rate": 0.05,
        "accuracy_mode": "bernoulli",
        "violation": "none",
        "superadditive_scale": 1.5,
        "max_steps": 30,
    },
}


def _merge(base: dict, override: dict) -> dict:
    out = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], value)
        else:
            out[key] = copy.deepcopy(value)
    return out


def resolve_config(args: argparse.Namespace) -> dict:
    """defaults <- config file <- explicit CLI flags."""
    cfg = copy.deepcopy(DEFAULT_CONFIG)
    if getattr(args, "config", None):
        path = Path(args.config)
        try:
            loaded = json.loads(path.read_text(encoding="utf-8"))
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
        if not isinstance(loaded, dict):
            raise ConfigError(f"config {path} must contain a JSON object")
        unknown = set(loaded) - set(DEFAULT_CONFIG)
        if unknown:
            raise ConfigError(
                f"config {path} has unknown keys: {', '.join(sorted(unknown))}"
            )
        cfg = _merge(cfg, loaded)
    flat_flags = (
        "seed",
        "catalog",
        "max_variant",
        "max_period",
        "count",
        "connector",
        "mode",
        "log_aggregation",
        "backend",
        "reference_values",
    )
    for name in flat_flags:
        value = getattr(args, name, None)
        if value is not None:
            cfg[name] = value
    if getattr(args, "skip_shortcut_check", False):
        cfg["skip_shortcut_check"] = True
    sampling_flags = {
        "endpoint": "endpoint",
        "model": "model",
        "temperature": "temperature",
        "samples_per_question": "samples_per_question",
        "max_tokens": "max_tokens",
        "max_in_flight": "max_in_flight",
        "api_key_env": "api_key_env",
    }
    for flag, key in sampling_flags.items():
        value = getattr(args, flag, None)
        if value is not None:
            cfg["sampling"][key] = value
    return cfg


def freeze_config(cfg: dict, command: str, out_dir: Path) -> None:
    frozen = {"command": command, "config": cfg}
    write_text_atomic(out_dir / "run_config.json", dumps_canonical(frozen) + "\n")


def sampling_config(cfg: dict) -> SamplingConfig:
    s = cfg["sampling"]
    return SamplingConfig(
        endpoint=s["endpoint"],
        model=s["model"],
        temperature=s["temperature"],
        samples_per_question=int(s["samples_per_question"]),
        max_tokens=int(s["max_tokens"]),
        think_open=s["think_open"],
        think_close=s["think_close"],
        max_in_flight=int(s["max_in_flight"]),
        max_attempts=int(s["max_attempts"]),
        backoff_base=float(s["backoff_base"]),
        timeout=float(s["timeout"]),
        api_key_env=s["api_key_env"],
        token_mode=s["token_mode"],
    )


def synth_spec(cfg: dict) -> SynthModelSpec:
    s = cfg["synthetic"]
    return SynthModelSpec(
        tokens_per_step=float(s["tokens_per_step"]),
        overhead=float(s["overhead"]),
        noise_rel=float(s["noise_rel"]),
        decay_rate=float(s["decay_rate"]),
        accuracy_mode=s["accuracy_mode"],
        violation=s["violation"],
        superadditive_scale=float(s["superadditive_scale"]),
        max_steps=int(s["max_steps"]),
        rng_seed=int(cfg["seed"]),
    )


# ---------------------------------------------------------------------------
# commands


def cmd_gen_mono(args: argparse.Namespace) -> int:
    cfg = resolve_config(args)
    seeds = load_catalog(cfg["catalog"]) if cfg["catalog"] else default_catalog()
    families = [gen_family(seed, cfg["max_variant"]) for seed in seeds]
    if not cfg["skip_shortcut_check"]:
        failures = []
        for fam in families:
            verdict = check_no_shortcut(fam, max_period=cfg["max_period"])
            if not verdict.passed:
                failures.append(f"{fam.seed_id} (period {verdict.period})")
        if failures:
            raise ConfigError(
                "families with periodic answer tails would be exploitable "
                "without simulation; rejected: " + ", ".join(failures)
            )
    out = Path(args.out)
    n = write_questions(out, families)
    freeze_config(cfg, "gen-mono", out.parent)
    print(f"wrote {n} questions across {len(families)} families to {out}")
    return EXIT_OK


def _pool_from_questions(path: str) -> tuple[list[TaggedQuestion], dict[str, int]]:
    questions = read_questions(path)
    pool = [
        TaggedQuestion(
            id=q.id, subject=q.subjects[0], text=q.text, gold_answer=q.gold_answer
        )
        for q in questions
    ]
    return pool, {q.id: q.steps for q in questions}


def _read_pool_with_steps(path: str) -> tuple[list[TaggedQuestion], dict[str, int]]:
    pool = read_pool(path)
    steps: dict[str, int] = {}
    for row in read_jsonl(path):
        value = row.get("steps")
        if value is None and isinstance(row.get("meta"), dict):
            value = row["meta"].get("steps")
        if isinstance(value, int):
            steps[row["id"]] = value
    return pool, steps


def cmd_gen_compo(args: argparse.Namespace) -> int:
    cfg = resolve_config(args)
    if args.from_questions:
        pool, steps = _pool_from_questions(args.from_questions)
        if args.pool_out:
            # steps ride along so synthetic sampling can price each item
            rows = [
                {
                    "id": q.id,
                    "subject": q.subject,
                    "text": q.text,
                    "answer": q.gold_answer,
                    "steps": steps[q.id],
                }
                for q in pool
            ]
            write_text_atomic(
                args.pool_out, "\n".join(dumps_canonical(r) for r in rows) + "\n"
            )
            print(f"wrote pool of {len(rows)} questions to {args.pool_out}")
    else:
        if not args.pool:
            raise ConfigError("gen-compo needs --pool or --from-questions")
        pool = read_pool(args.pool)
    if cfg["count"] is None:
        raise ConfigError("gen-compo needs --count")
    connector = (
        ConnectorTemplate(cfg["connector"]) if cfg["connector"] else ConnectorTemplate()
    )
    triplets = build_triplets(
        pool, int(cfg["count"]), rng_seed=int(cfg["seed"]), connector=connector
    )
    out = Path(args.out)
    write_triplets(out, triplets)
    freeze_config(cfg, "gen-compo", out.parent)
    print(f"wrote {len(triplets)} triplets to {out}")
    return EXIT_OK


def cmd_sample(args: argparse.Namespace) -> int:
    cfg = resolve_config(args)
    out = Path(args.out)
    if args.questions:
        questions = read_questions(args.questions)
        if cfg["backend"] == "synthetic":
            records = respond_to_questions(
                questions, synth_spec(cfg), int(cfg["sampling"]["samples_per_question"])
            )
            write_records(out, records)
        else:
            sample_remote(questions, sampling_config(cfg), out_path=out)
        freeze_config(cfg, "sample", out.parent)
        print(f"wrote samples for {len(questions)} questions to {out}")
        return EXIT_OK
    if not (args.pool and args.triplets):
        raise ConfigError("sample needs --questions, or --pool with --triplets")
    pool, steps = _read_pool_with_steps(args.pool)
    pool_by_id = {q.id: q for q in pool}
    triplets = read_triplets(args.triplets, pool_by_id)
    if cfg["backend"] == "synthetic":
        missing = [
            q.id
            for t in triplets
            for q in (t.q1, t.q2)
            if q.id not in steps
        ]
        if missing:
            raise ConfigError(
                "synthetic sampling needs a 'steps' field on pool rows; missing "
                f"for: {', '.join(sorted(set(missing))[:5])}"
            )
        records = respond_to_triplets(
            triplets, steps, synth_spec(cfg), int(cfg["sampling"]["samples_per_question"])
        )
        write_records(out, records)
    else:
        items = _triplet_prompt_items(triplets)
        sample_remote(items, sampling_config(cfg), out_path=out)
    freeze_config(cfg, "sample", out.parent)
    print(f"wrote samples for {len(triplets)} triplets to {out}")
    return EXIT_OK


class _PromptItem:
    __slots__ = ("id", "text")

    def __init__(self, id: str, text: str):
        self.id = id
        self.text = text


def _triplet_prompt_items(triplets: list[Triplet]) -> list[_PromptItem]:
    items = []
    seen = set()
    for t in triplets:
        for q in (t.q1, t.q2):
            if q.id not in seen:
                seen.add(q.id)
                items.append(_PromptItem(q.id, q.text))
        items.append(_PromptItem(t.triplet_id, t.composite_text))
    return items


def _mono_csv(report: MonoReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(
        ["scope", "index", "mean_norm_compute", "mean_log_accuracy", "n_series", "n_zero_accuracy"]
    )
    scopes = [report.overall] + [report.per_domain[d] for d in sorted(report.per_domain)]
    for scope in scopes:
        for point in scope.curve:
            writer.writerow(
                [
                    scope.scope,
                    point.index,
                    point.mean_norm_compute,
                    "" if point.mean_log_accuracy is None else point.mean_log_accuracy,
                    point.n_series,
                    point.n_zero_accuracy,
                ]
            )
    return buf.getvalue()


def _compo_csv(report: CompoReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["triplet_id", "sum_parts", "composite"])
    for row in report.deviations:
        writer.writerow([row.triplet_id, row.sum_parts_compute, row.composite_compute])
    return buf.getvalue()


def _fmt(value, digits: int = 4) -> str:
    if value is None:
        return "n/a"
    if isinstance(value, float):
        return f"{value:.{digits}f}"
    return str(value)


def _report_md(
    mono: MonoReport | None,
    law: LawFit | None,
    compo: CompoReport | None,
    reference_rows: list[dict] | None,
) -> str:
    lines = ["# Evaluation report", ""]
    if mono is not None:
        lines += [
            "## Monotonicity",
            "",
            "| scope | compute rho | log-accuracy rho | series | indices | excluded (log) |",
            "|---|---|---|---|---|---|",
        ]
        scopes = [mono.overall] + [mono.per_domain[d] for d in sorted(mono.per_domain)]
        for s in scopes:
            lines.append(
                f"| {s.scope} | {_fmt(s.compute_rho)} | {_fmt(s.log_accuracy_rho)} "
                f"| {s.n_series} | {s.n_indices} | {s.n_indices_excluded_log} |"
            )
        if mono.overall.degenerate_compute_series:
            flagged = ", ".join(mono.overall.degenerate_compute_series)
            lines.append("")
            lines.append(f"Degenerate compute series (constant, pinned at 0.5): {flagged}")
        lines.append("")
    if law is not None:
        lines += [
            "## Law fit",
            "",
            "| quantity | value |",
            "|---|---|",
            f"| compute slope (tokens per step) | {_fmt(law.compute_slope)} |",
            f"| compute intercept | {_fmt(law.compute_intercept)} |",
            f"| compute R^2 | {_fmt(law.compute_r2, 6)} |",
            f"| accuracy decay rate | {_fmt(law.decay_rate, 6)} |",
            f"| log-accuracy intercept | {_fmt(law.log_accuracy_intercept, 6)} |",
            f"| accuracy R^2 | {_fmt(law.accuracy_r2, 6)} |",
            f"| points | {law.n_points} |",
            f"| zero-accuracy excluded | {law.n_zero_accuracy_excluded} |",
            "",
        ]
    if compo is not None:
        lines += [
            "## Compositionality",
            "",
            "| quantity | MAD | sum of |parts| | nMAD | included | excluded |",
            "|---|---|---|---|---|---|",
            f"| compute | {_fmt(compo.compute.mad, 2)} | {_fmt(compo.compute.sum_abs_parts, 2)} "
            f"| {_fmt(compo.compute.nmad)} | {compo.compute.n_included} | 0 |",
            f"| log accuracy | {_fmt(compo.log_accuracy.mad, 4)} "
            f"| {_fmt(compo.log_accuracy.sum_abs_parts, 4)} | {_fmt(compo.log_accuracy.nmad)} "
            f"| {compo.log_accuracy.n_included} | {compo.log_accuracy.n_excluded_zero_accuracy} |",
            "",
        ]
    if reference_rows:
        lines += [
            "## Reference rows (externally reported, not computed by this run)",
            "",
        ]
        for row in reference_rows:
            label = row.get("label", "reference")
            rest = ", ".join(f"{k}={v}" for k, v in sorted(row.items()) if k != "label")
            lines.append(f"- {label}: {rest}")
        lines.append("")
    return "\n".join(lines)


def cmd_eval(args: argparse.Namespace) -> int:
    cfg = resolve_config(args)
    out_dir = Path(args.outdir)
    out_dir.mkdir(parents=True, exist_ok=True)
    metrics: dict = {}
    mono_report = None
    law = None
    compo_report = None
    if args.questions and args.samples:
        questions = read_questions(args.questions)
        families = group_families(questions)
        records = read_records(args.samples, token_mode=cfg["sampling"]["token_mode"])
        try:
            mono_report = mono_eval(
                families, records, log_aggregation=cfg["log_aggregation"]
            )
        except ValueError as exc:
            raise IngestError(f"samples do not cover the questions: {exc}") from exc
        metrics["mono"] = mono_report.to_dict()
        grouped = group_records(records)
        kappas, computes, accuracies = [], [], []
        for q in questions:
            recs = grouped.get(q.id)
            if not recs:
                raise IngestError(f"no samples for question {q.id!r}")
            est = estimate_question(q.id, [q.gold_answer], recs)
            kappas.append(q.steps)
            computes.append(est.compute)
            accuracies.append(est.accuracy)
        try:
            law = fit_laws(kappas, computes, accuracies)
            metrics["law_fit"] = law.to_dict()
        except FitError as exc:
            metrics["law_fit"] = {"error": str(exc)}
        write_text_atomic(out_dir / "plotdata" / "mono_curves.csv", _mono_csv(mono_report))
    if args.triplets and args.compo_samples:
        if not args.pool:
            raise ConfigError("compositional eval needs --pool alongside --triplets")
        pool = read_pool(args.pool)
        pool_by_id = {q.id: q for q in pool}
        triplets = read_triplets(args.triplets, pool_by_id)
        records = read_records(args.compo_samples, token_mode=cfg["sampling"]["token_mode"])
        grouped = group_records(records)
        estimates = {}
        for t in triplets:
            for q in (t.q1, t.q2):
                if q.id not in estimates:
                    if q.id not in grouped:
                        raise IngestError(f"no samples for sub-question {q.id!r}")
                    estimates[q.id] = estimate_question(
                        q.id, [q.gold_answer], grouped[q.id]
                    )
            if t.triplet_id not in grouped:
                raise IngestError(f"no samples for composite {t.triplet_id!r}")
            estimates[t.triplet_id] = estimate_question(
                t.triplet_id, list(t.composite_gold), grouped[t.triplet_id]
            )
        compo_report = compo_eval(triplet_estimates(triplets, estimates))
        metrics["compo"] = compo_report.to_dict()
        write_text_atomic(out_dir / "plotdata" / "compo_scatter.csv", _compo_csv(compo_report))
    if not metrics:
        raise ConfigError(
            "eval needs --questions with --samples, or --triplets with "
            "--pool and --compo-samples"
        )
    reference_rows = None
    if cfg["reference_values"]:
        try:
            ref = json.loads(Path(cfg["reference_values"]).read_text(encoding="utf-8"))
        except OSError as exc:
            raise ConfigError(f"cannot read reference values: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"reference values file is not valid JSON: {exc}") from exc
        reference_rows = ref.get("rows") if isinstance(ref, dict) else None
        if reference_rows is not None:
            metrics["reference_rows"] = reference_rows
    write_text_atomic(out_dir / "metrics.json", dumps_canonical(metrics) + "\n")
    write_text_atomic(
        out_dir / "report.md", _report_md(mono_report, law, compo_report, reference_rows)
    )
    freeze_config(cfg, "eval", out_dir)
    print(f"wrote metrics to {out_dir / 'metrics.json'}")
    return EXIT_OK


def _full_output(record: SampleRecord, think_open: str, think_close: str) -> str:
    return f"{think_open}{record.reasoning_text}{think_close}{record.answer_text}"


def cmd_select_sft(args: argparse.Namespace) -> int:
    cfg = resolve_config(args)
    pool = read_pool(args.pool)
    pool_by_id = {q.id: q for q in pool}
    triplets = read_triplets(args.triplets, pool_by_id)
    records = read_records(args.samples, token_mode=cfg["sampling"]["token_mode"])
    grouped = group_records(records)
    think_open = cfg["sampling"]["think_open"]
    think_close = cfg["sampling"]["think_close"]

    def candidates(question_id: str, gold: list[str]) -> tuple[Candidate, ...]:
        recs = grouped.get(question_id)
        if not recs:
            raise IngestError(f"no samples for {question_id!r}")
        out = []
        for rec in recs:
            correct = (
                rec.finish == "complete"
                and grade(extract_answers(rec.answer_text, len(gold)), gold)
            )
            out.append(
                Candidate(
                    length=float(rec.reasoning_tokens),
                    correct=correct,
                    output_text=_full_output(rec, think_open, think_close),
                )
            )
        return tuple(out)

    samples = []
    for t in triplets:
        samples.append(
            TripletSamples(
                triplet_id=t.triplet_id,
                sub1=candidates(t.q1.id, [t.q1.gold_answer]),
                sub2=candidates(t.q2.id, [t.q2.gold_answer]),
                composite=candidates(t.triplet_id, list(t.composite_gold)),
                sub1_text=t.q1.text,
                sub2_text=t.q2.text,
                composite_text=t.composite_text,
            )
        )
    mode = {"min-gap": "min_gap", "min_gap": "min_gap", "uniform": "uniform"}.get(
        cfg["mode"]
    )
    if mode is None:
        raise ConfigError(f"unknown selection mode: {cfg['mode']!r}")
    summary = emit_dataset(
        samples,
        dataset_path=args.dataset,
        log_path=args.selection_log,
        mode=mode,
        rng_seed=int(cfg["seed"]),
    )
    freeze_config(cfg, "select-sft", Path(args.dataset).parent)
    print(
        f"selected {summary.n_selected}/{summary.n_triplets} triplets "
        f"({summary.n_examples} examples, {summary.n_skipped} skipped) "
        f"-> {args.dataset}"
    )
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON config file; flags override it")
    parser.add_argument("--seed", type=int, help="run seed")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="reasonscale",
        description="Complexity-controlled reasoning benchmarks and scaling metrics",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-mono", help="generate question families from a seed catalog")
    _add_common(p)
    p.add_argument("--catalog", help="seed catalog JSON; defaults to the built-in seeds")
    p.add_argument("--max-variant", dest="max_variant", type=int)
    p.add_argument("--max-period", dest="max_period", type=int)
    p.add_argument(
        "--skip-shortcut-check",
        dest="skip_shortcut_check",
        action="store_true",
        help="skip the answer-periodicity gate",
    )
    p.add_argument("--out", default="questions.jsonl")
    p.set_defaults(func=cmd_gen_mono)

    p = sub.add_parser("gen-compo", help="build cross-subject composite triplets")
    _add_common(p)
    p.add_argument("--pool", help="pool.jsonl of tagged questions")
    p.add_argument(
        "--from-questions",
        dest="from_questions",
        help="build the pool from a questions.jsonl file instead of --pool",
    )
    p.add_argument(
        "--pool-out",
        dest="pool_out",
        help="with --from-questions, also write the derived pool here",
    )
    p.add_argument("--count", type=int, help="number of triplets to build")
    p.add_argument("--connector", help="connector template with {q1} and {q2} slots")
    p.add_argument("--out", default="triplets.jsonl")
    p.set_defaults(func=cmd_gen_compo)

    p = sub.add_parser("sample", help="collect model samples for questions or triplets")
    _add_common(p)
    p.add_argument("--questions", help="questions.jsonl to sample")
    p.add_argument("--pool", help="pool.jsonl (triplet sampling)")
    p.add_argument("--triplets", help="triplets.jsonl (triplet sampling)")
    p.add_argument("--backend", choices=["remote", "synthetic"])
    p.add_argument("--endpoint", help="chat-completions URL (remote backend)")
    p.add_argument("--model", help="model name (remote backend)")
    p.add_argument("--temperature", type=float)
    p.add_argument(
        "--samples-per-question", dest="samples_per_question", type=int
    )
    p.add_argument("--max-tokens", dest="max_tokens", type=int)
    p.add_argument("--max-in-flight", dest="max_in_flight", type=int)
    p.add_argument("--api-key-env", dest="api_key_env")
    p.add_argument("--out", default="samples.jsonl")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("eval", help="compute scaling metrics and reports")
    _add_common(p)
    p.add_argument("--questions", help="questions.jsonl (monotonicity eval)")
    p.add_argument("--samples", help="samples.jsonl for --questions")
    p.add_argument("--pool", help="pool.jsonl (compositional eval)")
    p.add_argument("--triplets", help="triplets.jsonl (compositional eval)")
    p.add_argument(
        "--compo-samples",
        dest="compo_samples",
        help="samples.jsonl covering sub-questions and composites",
    )
    p.add_argument("--log-aggregation", dest="log_aggregation",
                   choices=["per_question", "log_of_mean"])
    p.add_argument("--reference-values", dest="reference_values",
                   help="JSON file of externally reported rows to display")
    p.add_argument("--outdir", default="evalout")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("select-sft", help="select supervision examples from triplet samples")
    _add_common(p)
    p.add_argument("--pool", required=True)
    p.add_argument("--triplets", required=True)
    p.add_argument("--samples", required=True)
    p.add_argument("--mode", choices=["min-gap", "uniform"])
    p.add_argument("--dataset", default="sft_dataset.jsonl")
    p.add_argument("--selection-log", dest="selection_log", default="selection_log.jsonl")
    p.set_defaults(func=cmd_select_sft)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ParameterError, TemplateError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CapacityError as exc:
        print(
            f"capacity error: {exc} (achievable maximum: {exc.max_feasible})",
            file=sys.stderr,
        )
        return EXIT_CAPACITY
    except (IngestError, RemoteBatchError, OSError) as exc:
        print(f"input/output error: {exc}", file=sys.stderr)
        return EXIT_UPSTREAM
    except ReasonscaleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
