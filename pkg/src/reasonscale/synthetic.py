"""Synthetic responder with a known compute/accuracy law.

The responder emits ordinary sample records, so the whole downstream
pipeline (ingestion, grading, metrics, selection) runs unchanged
against a model whose ground truth is chosen, not estimated. Mean
reasoning length grows linearly in complexity with a logarithmic
overhead; accuracy decays exponentially. Violation modes deliberately
break those laws so detector tests have true negatives to catch.
"""

from __future__ import annotations

import hashlib
import math
import random
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .compo import Triplet
from .errors import ParameterError
from .families import Family, Question
from .records import SampleRecord

VIOLATION_NONE = "none"
VIOLATION_INVERTED = "inverted_compute"
VIOLATION_FLAT = "flat_compute"
VIOLATION_SUPERADDITIVE = "superadditive"

ACCURACY_DETERMINISTIC = "deterministic"
ACCURACY_BERNOULLI = "bernoulli"

_VIOLATIONS = (
    VIOLATION_NONE,
    VIOLATION_INVERTED,
    VIOLATION_FLAT,
    VIOLATION_SUPERADDITIVE,
)


@dataclass(frozen=True)
class SynthModelSpec:
    """Ground-truth law of the simulated model.

    tokens_per_step is the linear compute coefficient, overhead the
    log-term coefficient, noise_rel the relative sd of multiplicative
    length noise, decay_rate the exponential accuracy decay per
    complexity unit. deterministic accuracy allocates exactly
    round(p * k) correct samples per question, which keeps estimator
    noise at zero so additivity certificates can be exact; bernoulli
    flips a coin per sample. max_steps anchors the two compute
    violation modes.
    """

    tokens_per_step: float = 50.0
    overhead: float = 10.0
    noise_rel: float = 0.05
    decay_rate: float = 0.05
    accuracy_mode: str = ACCURACY_BERNOULLI
    violation: str = VIOLATION_NONE
    superadditive_scale: float = 1.5
    max_steps: int = 30
    rng_seed: int = 0

    def __post_init__(self):
        if self.tokens_per_step <= 0:
            raise ParameterError("tokens_per_step must be > 0")
        if self.decay_rate < 0:
            raise ParameterError("decay_rate must be >= 0")
        if self.noise_rel < 0:
            raise ParameterError("noise_rel must be >= 0")
        if self.accuracy_mode not in (ACCURACY_DETERMINISTIC, ACCURACY_BERNOULLI):
            raise ParameterError(f"unknown accuracy_mode: {self.accuracy_mode!r}")
        if self.violation not in _VIOLATIONS:
            raise ParameterError(f"unknown violation mode: {self.violation!r}")
        if self.violation == VIOLATION_SUPERADDITIVE and self.superadditive_scale == 1.0:
            raise ParameterError("superadditive violation needs a scale != 1")


@dataclass(frozen=True)
class SynthQuestion:
    id: str
    complexity: int
    subject: str = "synthetic"
    gold_answer: str | None = None

    def gold(self) -> str:
        return self.gold_answer if self.gold_answer is not None else str(self.complexity)


def _sub_rng(seed: int, *tags: str) -> random.Random:
    """Independent per-question stream; stable across runs and platforms."""
    digest = hashlib.sha256("|".join([str(seed), *tags]).encode("utf-8")).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


def mean_length(spec: SynthModelSpec, complexity: int) -> float:
    if complexity < 1:
        raise ParameterError(f"complexity must be >= 1, got {complexity}")
    if spec.violation == VIOLATION_INVERTED:
        return spec.tokens_per_step * (spec.max_steps + 1 - complexity)
    if spec.violation == VIOLATION_FLAT:
        return spec.tokens_per_step * spec.max_steps / 2.0
    return spec.tokens_per_step * complexity + spec.overhead * math.log(complexity + 1)


def success_probability(spec: SynthModelSpec, complexity: int) -> float:
    return math.exp(-spec.decay_rate * complexity)


def _sample_lengths(rng: random.Random, mean: float, spec: SynthModelSpec, k: int) -> list[int]:
    lengths = []
    for _ in range(k):
        eps = rng.gauss(0.0, spec.noise_rel) if spec.noise_rel > 0 else 0.0
        lengths.append(max(0, round(mean * (1.0 + eps))))
    return lengths


def _correct_flags(rng: random.Random, p: float, spec: SynthModelSpec, k: int) -> list[bool]:
    if spec.accuracy_mode == ACCURACY_DETERMINISTIC:
        n_correct = math.floor(p * k + 0.5)
        return [i < n_correct for i in range(k)]
    return [rng.random() < p for _ in range(k)]


def _placeholder(tokens: int) -> str:
    return ("x " * tokens).rstrip()


def _build_records(
    question_id: str,
    lengths: Sequence[int],
    flags: Sequence[bool],
    answer_correct: str,
    answer_wrong: str,
) -> list[SampleRecord]:
    return [
        SampleRecord(
            question_id=question_id,
            sample_index=i,
            reasoning_text=_placeholder(length),
            answer_text=answer_correct if ok else answer_wrong,
            reasoning_tokens=length,
            token_source="server_reported",
            finish="complete",
        )
        for i, (length, ok) in enumerate(zip(lengths, flags))
    ]


def synth_respond(q: SynthQuestion, spec: SynthModelSpec, k: int) -> list[SampleRecord]:
    """k rollouts for one question; deterministic in (spec.rng_seed, q.id)."""
    rng = _sub_rng(spec.rng_seed, q.id)
    mean = mean_length(spec, q.complexity)
    lengths = _sample_lengths(rng, mean, spec, k)
    flags = _correct_flags(rng, success_probability(spec, q.complexity), spec, k)
    gold = q.gold()
    return _build_records(
        q.id, lengths, flags,
        answer_correct=f"\\boxed{{{gold}}}",
        answer_wrong=f"\\boxed{{wrong-{gold}}}",
    )


def synth_composite_respond(
    q1: SynthQuestion,
    q2: SynthQuestion,
    spec: SynthModelSpec,
    k: int,
    composite_id: str | None = None,
) -> list[SampleRecord]:
    """k rollouts for the composite of two questions.

    Mean length is the sum of the parts' mean lengths (scaled by the
    superadditive factor when that violation is active); success
    probability is the product of the parts', i.e. exponential decay at
    the summed complexity.
    """
    cid = composite_id if composite_id is not None else f"{q1.id}+{q2.id}"
    rng = _sub_rng(spec.rng_seed, cid, "composite")
    scale = spec.superadditive_scale if spec.violation == VIOLATION_SUPERADDITIVE else 1.0
    mean = scale * (mean_length(spec, q1.complexity) + mean_length(spec, q2.complexity))
    p = success_probability(spec, q1.complexity + q2.complexity)
    lengths = _sample_lengths(rng, mean, spec, k)
    flags = _correct_flags(rng, p, spec, k)
    g1, g2 = q1.gold(), q2.gold()
    return _build_records(
        cid, lengths, flags,
        answer_correct=f"Q1: \\boxed{{{g1}}}\nQ2: \\boxed{{{g2}}}",
        answer_wrong=f"Q1: \\boxed{{{g1}}}\nQ2: \\boxed{{wrong-{g2}}}",
    )


# ---------------------------------------------------------------------------
# adapters for the benchmark pipeline


def synth_families(
    n_families: int,
    n_variants: int,
    domains: Sequence[str] = ("math", "science", "language", "code"),
    prefix: str = "synth",
) -> list[Family]:
    """Placeholder families for calibration runs: gold answers are the
    step counts, texts are inert."""
    families = []
    for i in range(n_families):
        domain = domains[i % len(domains)]
        seed_id = f"{prefix}-{domain}-{i:03d}"
        questions = [
            Question(
                id=f"{seed_id}-v{n:02d}",
                domain=domain,
                seed_id=seed_id,
                variant_index=n,
                text=f"calibration item {seed_id} variant {n}",
                gold_answer=str(n),
                subjects=(seed_id,),
                steps=n,
            )
            for n in range(1, n_variants + 1)
        ]
        families.append(Family(seed_id=seed_id, domain=domain, questions=questions))
    return families


def respond_to_questions(
    questions: Iterable[Question],
    spec: SynthModelSpec,
    k: int,
) -> list[SampleRecord]:
    """Synthetic rollouts for real questions: complexity is the step count."""
    records = []
    for q in questions:
        sq = SynthQuestion(
            id=q.id,
            complexity=q.steps,
            subject=q.subjects[0],
            gold_answer=q.gold_answer,
        )
        records.extend(synth_respond(sq, spec, k))
    return records


def respond_to_triplets(
    triplets: Sequence[Triplet],
    complexity_by_id: Mapping[str, int],
    spec: SynthModelSpec,
    k: int,
) -> list[SampleRecord]:
    """Synthetic rollouts for triplets: each distinct sub-question once,
    plus one composite stream per triplet, keyed by the triplet id."""
    records = []
    seen = set()
    def as_synth(tq) -> SynthQuestion:
        if tq.id not in complexity_by_id:
            raise ParameterError(
                f"no complexity known for question {tq.id!r}; "
                "synthetic composite sampling needs per-question step counts"
            )
        return SynthQuestion(
            id=tq.id,
            complexity=int(complexity_by_id[tq.id]),
            subject=tq.subject,
            gold_answer=tq.gold_answer,
        )
    for t in triplets:
        for tq in (t.q1, t.q2):
            if tq.id not in seen:
                seen.add(tq.id)
                records.extend(synth_respond(as_synth(tq), spec, k))
        records.extend(
            synth_composite_respond(
                as_synth(t.q1), as_synth(t.q2), spec, k, composite_id=t.triplet_id
            )
        )
    return records
