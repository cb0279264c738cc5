"""Supervision example selection from triplet rollouts.

For each triplet the selector looks at all (i, j, k) combinations of
the two sub-question candidate lists and the composite candidate list.
Min-gap selection keeps the all-correct combination whose composite
reasoning length is closest to the sum of its parts' lengths, pinning
supervision to the additive regime; uniform selection is the control
that ignores lengths. Selected triplets emit three supervision
examples each, one per slot.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .jsonl import write_jsonl_atomic

ORIGIN_SUB1 = "sub1"
ORIGIN_SUB2 = "sub2"
ORIGIN_COMPOSITE = "composite"


@dataclass(frozen=True)
class Candidate:
    """One rollout: reasoning length, graded correctness, and the full
    output text that would be used as a supervision target."""

    length: float
    correct: bool
    output_text: str = ""


@dataclass(frozen=True)
class TripletSamples:
    triplet_id: str
    sub1: tuple[Candidate, ...]
    sub2: tuple[Candidate, ...]
    composite: tuple[Candidate, ...]
    sub1_text: str = ""
    sub2_text: str = ""
    composite_text: str = ""

    def slot(self, origin: str) -> tuple[Candidate, ...]:
        return {
            ORIGIN_SUB1: self.sub1,
            ORIGIN_SUB2: self.sub2,
            ORIGIN_COMPOSITE: self.composite,
        }[origin]


@dataclass(frozen=True)
class Selection:
    triplet_id: str
    indices: tuple[int, int, int]
    gap: float


@dataclass(frozen=True)
class SupervisionExample:
    question_text: str
    output_text: str
    origin: str
    triplet_id: str


def select_min_gap(ts: TripletSamples) -> Selection | None:
    """All-correct combination minimizing |len1 + len2 - len12|.

    Candidate lists are small (at most the per-question sample count),
    so the full cube is enumerated literally. Ties go to the
    lexicographically smallest (i, j, k). None when no combination is
    all-correct.
    """
    best: Selection | None = None
    for i, c1 in enumerate(ts.sub1):
        if not c1.correct:
            continue
        for j, c2 in enumerate(ts.sub2):
            if not c2.correct:
                continue
            parts = c1.length + c2.length
            for k, c12 in enumerate(ts.composite):
                if not c12.correct:
                    continue
                gap = abs(parts - c12.length)
                if best is None or gap < best.gap:
                    best = Selection(ts.triplet_id, (i, j, k), gap)
    return best


def select_uniform(ts: TripletSamples, rng_seed: int) -> Selection | None:
    """Independent uniform draw over the correct candidates of each slot.

    None when any slot has no correct candidate. Deterministic in
    rng_seed.
    """
    pools = []
    for candidates in (ts.sub1, ts.sub2, ts.composite):
        correct = [i for i, c in enumerate(candidates) if c.correct]
        if not correct:
            return None
        pools.append(correct)
    rng = random.Random(rng_seed)
    chosen = tuple(pool[rng.randrange(len(pool))] for pool in pools)
    gap = abs(
        ts.sub1[chosen[0]].length
        + ts.sub2[chosen[1]].length
        - ts.composite[chosen[2]].length
    )
    return Selection(ts.triplet_id, chosen, gap)


@dataclass(frozen=True)
class EmitSummary:
    n_triplets: int
    n_selected: int
    n_skipped: int
    n_examples: int

    def to_dict(self) -> dict:
        return {
            "n_triplets": self.n_triplets,
            "n_selected": self.n_selected,
            "n_skipped": self.n_skipped,
            "n_examples": self.n_examples,
        }


def examples_for(ts: TripletSamples, selection: Selection) -> list[SupervisionExample]:
    i, j, k = selection.indices
    return [
        SupervisionExample(ts.sub1_text, ts.sub1[i].output_text, ORIGIN_SUB1, ts.triplet_id),
        SupervisionExample(ts.sub2_text, ts.sub2[j].output_text, ORIGIN_SUB2, ts.triplet_id),
        SupervisionExample(
            ts.composite_text, ts.composite[k].output_text, ORIGIN_COMPOSITE, ts.triplet_id
        ),
    ]


def emit_dataset(
    samples: Sequence[TripletSamples],
    dataset_path: str | Path,
    log_path: str | Path,
    mode: str = "min_gap",
    rng_seed: int = 0,
) -> EmitSummary:
    """Select per triplet and write sft_dataset.jsonl plus a selection log.

    Infeasible triplets are skipped, never invented; each skip is logged
    with its reason. Uniform mode derives one sub-seed per triplet so
    adding or removing triplets does not shift the others' draws.
    """
    if mode not in ("min_gap", "uniform"):
        raise ValueError(f"unknown selection mode: {mode!r}")
    examples: list[SupervisionExample] = []
    log_rows: list[dict] = []
    n_selected = 0
    for pos, ts in enumerate(samples):
        if mode == "min_gap":
            selection = select_min_gap(ts)
        else:
            selection = select_uniform(ts, rng_seed=hash_seed(rng_seed, ts.triplet_id))
        if selection is None:
            log_rows.append(
                {
                    "triplet_id": ts.triplet_id,
                    "status": "skipped",
                    "reason": "no all-correct combination"
                    if mode == "min_gap"
                    else "a slot has no correct candidate",
                }
            )
            continue
        n_selected += 1
        examples.extend(examples_for(ts, selection))
        log_rows.append(
            {
                "triplet_id": ts.triplet_id,
                "status": "selected",
                "indices": list(selection.indices),
                "gap": selection.gap,
            }
        )
    write_jsonl_atomic(
        dataset_path,
        [
            {
                "question": ex.question_text,
                "output": ex.output_text,
                "origin": ex.origin,
                "triplet_id": ex.triplet_id,
            }
            for ex in examples
        ],
    )
    write_jsonl_atomic(log_path, log_rows)
    return EmitSummary(
        n_triplets=len(samples),
        n_selected=n_selected,
        n_skipped=len(samples) - n_selected,
        n_examples=len(examples),
    )


def hash_seed(base_seed: int, tag: str) -> int:
    """Stable per-item sub-seed; avoids Python's randomized str hash."""
    digest = hashlib.sha256(f"{base_seed}|{tag}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")
