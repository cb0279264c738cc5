"""Question families: oracle-backed generation and the anti-shortcut gate."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Sequence

from . import oracles
from .errors import IngestError, ParameterError
from .jsonl import iter_jsonl, write_jsonl_atomic
from .seeds import SeedSpec, render_template

MAX_VARIANT = 30


@dataclass(frozen=True)
class Question:
    id: str
    domain: str
    seed_id: str
    variant_index: int
    text: str
    gold_answer: str
    subjects: tuple[str, ...]
    steps: int
    meta: dict = field(default_factory=dict, compare=False)


@dataclass
class Family:
    """One seed rendered at consecutive variant indices."""

    seed_id: str
    domain: str
    questions: list[Question]
    seed: SeedSpec | None = None

    def answers(self) -> list[str]:
        return [q.gold_answer for q in self.questions]


@dataclass(frozen=True)
class ShortcutVerdict:
    """Outcome of the answer-periodicity gate.

    period is the smallest detected period on failure, None on a pass.
    short_family marks families too short to check meaningfully; they
    pass vacuously.
    """

    passed: bool
    period: int | None = None
    short_family: bool = False


def _answer_series(seed: SeedSpec, step_counts: Sequence[int]) -> list[str]:
    """Evaluate the seed's oracle at each step count in one simulation pass."""
    p = seed.params
    max_steps = step_counts[-1]
    try:
        if seed.domain == "math":
            series = oracles.modular_recurrence_series(
                int(p["modulus"]), int(p["coeff_a"]), int(p["coeff_b"]),
                int(p["coeff_c"]), int(p["x0"]), int(p["x1"]), max_steps,
            )
            return [str(series[s - 1]) for s in step_counts]
        if seed.domain == "science":
            series = oracles.bioreactor_series(
                int(p["substrate"]), int(p["product"]), int(p["cofactor"]),
                int(p["regen_every"]), max_steps,
            )
            return [str(series[s - 1]) for s in step_counts]
        if seed.domain == "language":
            series = oracles.maze_walk_series(
                list(p["grid"]), int(p["start_row"]), int(p["start_col"]),
                max_steps, int(p["suffix_len"]),
            )
            return [series[s - 1] for s in step_counts]
        series = oracles.string_rewrite_series(str(p["init_state"]), max_steps)
        return [series[s - 1] for s in step_counts]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParameterError(f"seed {seed.seed_id!r}: invalid params: {exc}") from exc


def _render_values(seed: SeedSpec, variant_index: int, steps: int) -> dict[str, Any]:
    p = dict(seed.params)
    if seed.domain == "math":
        return {
            **p,
            "modulus_minus_1": int(p["modulus"]) - 1,
            "updates": steps,
            "target": steps + 1,
        }
    if seed.domain == "science":
        return {**p, "steps": steps}
    if seed.domain == "language":
        grid = list(p.pop("grid"))
        return {
            **p,
            "grid_block": "\n".join("    " + row for row in grid),
            "height": len(grid),
            "width": len(grid[0]) if grid else 0,
            "moves": steps,
        }
    return {
        **p,
        "iterations": steps,
        "last_iteration": steps - 1,
    }


def gen_family(seed: SeedSpec, max_variant: int = MAX_VARIANT) -> Family:
    """Render a seed at variant indices 1..max_variant.

    The oracle runs once; per-variant answers are read off the step
    series, so generation cost grows with max_variant, not its square.
    """
    if not 1 <= max_variant <= MAX_VARIANT:
        raise ParameterError(
            f"max_variant must be in [1, {MAX_VARIANT}], got {max_variant}"
        )
    step_counts = [seed.steps(n) for n in range(1, max_variant + 1)]
    if any(b <= a for a, b in zip(step_counts, step_counts[1:])) or step_counts[0] < 1:
        raise ParameterError(
            f"seed {seed.seed_id!r}: step rule must be strictly increasing and >= 1"
        )
    answers = _answer_series(seed, step_counts)
    template = seed.template_text()
    questions = []
    for n, steps, answer in zip(range(1, max_variant + 1), step_counts, answers):
        text = render_template(template, _render_values(seed, n, steps))
        questions.append(
            Question(
                id=f"{seed.seed_id}-v{n:02d}",
                domain=seed.domain,
                seed_id=seed.seed_id,
                variant_index=n,
                text=text,
                gold_answer=answer,
                subjects=(seed.subject,),
                steps=steps,
                meta={"params": dict(seed.params)},
            )
        )
    return Family(seed_id=seed.seed_id, domain=seed.domain, questions=questions, seed=seed)


def detect_period(answers: Sequence[str], max_period: int = 6) -> int | None:
    """Smallest p <= max_period such that the final 2p answers repeat with
    period p at every alignment inside that window; None if no p qualifies."""
    n = len(answers)
    for p in range(1, min(max_period, n // 2) + 1):
        window = answers[-2 * p:]
        if all(window[i] == window[i + p] for i in range(p)):
            return p
    return None


def check_no_shortcut(family: Family, max_period: int = 6) -> ShortcutVerdict:
    """Reject families whose answer tail is periodic with a short period.

    A periodic tail lets a model guess late variants from early ones
    without doing the longer simulation, which would decouple the
    variant index from real work.
    """
    answers = family.answers()
    if len(answers) < 4:
        return ShortcutVerdict(passed=True, period=None, short_family=True)
    period = detect_period(answers, max_period=max_period)
    if period is not None:
        return ShortcutVerdict(passed=False, period=period)
    return ShortcutVerdict(passed=True)


# ---------------------------------------------------------------------------
# questions.jsonl


def question_to_row(q: Question) -> dict:
    meta = dict(q.meta)
    meta["steps"] = q.steps
    if len(q.subjects) > 1:
        meta["subjects"] = list(q.subjects)
    return {
        "id": q.id,
        "domain": q.domain,
        "seed_id": q.seed_id,
        "variant_index": q.variant_index,
        "subject": q.subjects[0],
        "text": q.text,
        "answer": q.gold_answer,
        "meta": meta,
    }


def write_questions(path: str | Path, families: Iterable[Family]) -> int:
    rows = [question_to_row(q) for fam in families for q in fam.questions]
    return write_jsonl_atomic(path, rows)


_REQUIRED_QUESTION_FIELDS = {
    "id": str,
    "domain": str,
    "seed_id": str,
    "variant_index": int,
    "subject": str,
    "text": str,
    "answer": str,
}


def read_questions(path: str | Path) -> list[Question]:
    questions = []
    for line_number, row in iter_jsonl(path):
        for name, typ in _REQUIRED_QUESTION_FIELDS.items():
            if name not in row:
                raise IngestError(
                    f"{path}: line {line_number}: missing field {name!r}",
                    line_number=line_number,
                )
            if not isinstance(row[name], typ) or isinstance(row[name], bool):
                raise IngestError(
                    f"{path}: line {line_number}: field {name!r} must be "
                    f"{typ.__name__}",
                    line_number=line_number,
                )
        meta = row.get("meta") or {}
        if not isinstance(meta, dict):
            raise IngestError(
                f"{path}: line {line_number}: field 'meta' must be an object",
                line_number=line_number,
            )
        subjects = tuple(meta.get("subjects") or (row["subject"],))
        steps = meta.get("steps", row["variant_index"])
        questions.append(
            Question(
                id=row["id"],
                domain=row["domain"],
                seed_id=row["seed_id"],
                variant_index=row["variant_index"],
                text=row["text"],
                gold_answer=row["answer"],
                subjects=subjects,
                steps=int(steps),
                meta={k: v for k, v in meta.items() if k not in ("steps", "subjects")},
            )
        )
    return questions


def group_families(questions: Iterable[Question]) -> list[Family]:
    """Group a flat question list into families ordered by first appearance."""
    by_seed: dict[str, list[Question]] = {}
    domains: dict[str, str] = {}
    for q in questions:
        by_seed.setdefault(q.seed_id, []).append(q)
        domains.setdefault(q.seed_id, q.domain)
    families = []
    for seed_id, qs in by_seed.items():
        qs_sorted = sorted(qs, key=lambda q: q.variant_index)
        families.append(Family(seed_id=seed_id, domain=domains[seed_id], questions=qs_sorted))
    return families
