"""Composite question construction.

Two questions about different subjects are joined by a connector
template into one composite prompt whose gold answer is the ordered
pair of the parts' answers. Distinct subjects keep the parts
independent: solving one gives no discount on the other, so composite
complexity is the sum of the parts'.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .errors import CapacityError, IngestError, TemplateError
from .jsonl import iter_jsonl, write_jsonl_atomic

DEFAULT_CONNECTOR = "Answer the following questions in order:\nQ1. {q1}\nQ2. {q2}"


@dataclass(frozen=True)
class TaggedQuestion:
    id: str
    subject: str
    text: str
    gold_answer: str


@dataclass(frozen=True)
class Triplet:
    triplet_id: str
    q1: TaggedQuestion
    q2: TaggedQuestion
    composite_text: str
    composite_gold: tuple[str, str]


@dataclass(frozen=True)
class ConnectorTemplate:
    """Joiner for two sub-questions; {q1} must appear before {q2}."""

    text: str = DEFAULT_CONNECTOR

    def __post_init__(self):
        for slot in ("{q1}", "{q2}"):
            if self.text.count(slot) != 1:
                raise TemplateError(
                    f"connector must contain {slot} exactly once"
                )
        if self.text.index("{q1}") > self.text.index("{q2}"):
            raise TemplateError("connector must place {q1} before {q2}")

    def render(self, q1_text: str, q2_text: str) -> str:
        return self.text.replace("{q1}", q1_text).replace("{q2}", q2_text)


def compose(
    q1: TaggedQuestion,
    q2: TaggedQuestion,
    connector: ConnectorTemplate | None = None,
) -> str:
    connector = connector or ConnectorTemplate()
    return connector.render(q1.text, q2.text)


def check_independence(q1: TaggedQuestion, q2: TaggedQuestion) -> bool:
    """Independent questions draw on different subjects."""
    return q1.subject != q2.subject


def max_cross_subject_pairs(pool: Sequence[TaggedQuestion]) -> int:
    """Largest number of disjoint cross-subject pairs the pool supports.

    Bounded by both the pool size and the share outside the largest
    subject: every pair must take one question from outside it.
    """
    if not pool:
        return 0
    counts: dict[str, int] = {}
    for q in pool:
        counts[q.subject] = counts.get(q.subject, 0) + 1
    largest = max(counts.values())
    return min(len(pool) // 2, len(pool) - largest)


def build_triplets(
    pool: Sequence[TaggedQuestion],
    count: int,
    rng_seed: int,
    connector: ConnectorTemplate | None = None,
) -> list[Triplet]:
    """Draw exactly count disjoint cross-subject pairs from the pool.

    The pool is shuffled with the seeded generator, then pairing always
    takes the next question from each of the two subjects with the most
    remaining questions. That greedy rule attains the theoretical
    maximum, so feasibility is exactly count <= max_cross_subject_pairs.
    No question id is used twice.
    """
    if count < 1:
        raise CapacityError(
            f"count must be >= 1, got {count}", max_feasible=max_cross_subject_pairs(pool)
        )
    seen_ids = set()
    for q in pool:
        if q.id in seen_ids:
            raise CapacityError(
                f"pool contains duplicate question id {q.id!r}",
                max_feasible=0,
            )
        seen_ids.add(q.id)
    feasible = max_cross_subject_pairs(pool)
    if count > feasible:
        raise CapacityError(
            f"requested {count} triplets but the pool supports at most "
            f"{feasible} disjoint cross-subject pairs",
            max_feasible=feasible,
        )
    connector = connector or ConnectorTemplate()
    rng = random.Random(rng_seed)
    shuffled = list(pool)
    rng.shuffle(shuffled)
    queues: dict[str, list[TaggedQuestion]] = {}
    for q in shuffled:
        queues.setdefault(q.subject, []).append(q)
    # Reversed so .pop() consumes in shuffled order.
    for qs in queues.values():
        qs.reverse()
    triplets = []
    for i in range(count):
        # Two most loaded subjects; name breaks ties deterministically.
        ranked = sorted(
            (s for s in queues if queues[s]),
            key=lambda s: (-len(queues[s]), s),
        )
        first, second = ranked[0], ranked[1]
        q1 = queues[first].pop()
        q2 = queues[second].pop()
        triplets.append(
            Triplet(
                triplet_id=f"t{i + 1:04d}",
                q1=q1,
                q2=q2,
                composite_text=connector.render(q1.text, q2.text),
                composite_gold=(q1.gold_answer, q2.gold_answer),
            )
        )
    return triplets


# ---------------------------------------------------------------------------
# pool.jsonl / triplets.jsonl


def read_pool(path: str | Path) -> list[TaggedQuestion]:
    pool = []
    for line_number, row in iter_jsonl(path):
        for name in ("id", "subject", "text", "answer"):
            if name not in row or not isinstance(row[name], str):
                raise IngestError(
                    f"{path}: line {line_number}: field {name!r} must be a string",
                    line_number=line_number,
                )
        pool.append(
            TaggedQuestion(
                id=row["id"],
                subject=row["subject"],
                text=row["text"],
                gold_answer=row["answer"],
            )
        )
    return pool


def write_pool(path: str | Path, pool: Iterable[TaggedQuestion]) -> int:
    rows = [
        {"id": q.id, "subject": q.subject, "text": q.text, "answer": q.gold_answer}
        for q in pool
    ]
    return write_jsonl_atomic(path, rows)


def write_triplets(path: str | Path, triplets: Iterable[Triplet]) -> int:
    rows = [
        {
            "triplet_id": t.triplet_id,
            "q1_id": t.q1.id,
            "q2_id": t.q2.id,
            "composite_text": t.composite_text,
            "gold": list(t.composite_gold),
        }
        for t in triplets
    ]
    return write_jsonl_atomic(path, rows)


def read_triplets(
    path: str | Path, pool_by_id: dict[str, TaggedQuestion] | None = None
) -> list[Triplet]:
    """Load triplets.jsonl; sub-questions are resolved from the pool when
    given, otherwise reduced to id-only stubs."""
    triplets = []
    for line_number, row in iter_jsonl(path):
        for name in ("triplet_id", "q1_id", "q2_id", "composite_text"):
            if name not in row or not isinstance(row[name], str):
                raise IngestError(
                    f"{path}: line {line_number}: field {name!r} must be a string",
                    line_number=line_number,
                )
        gold = row.get("gold")
        if (
            not isinstance(gold, list)
            or len(gold) != 2
            or not all(isinstance(g, str) for g in gold)
        ):
            raise IngestError(
                f"{path}: line {line_number}: field 'gold' must be a list of two strings",
                line_number=line_number,
            )

        def resolve(qid: str) -> TaggedQuestion:
            if pool_by_id is not None:
                if qid not in pool_by_id:
                    raise IngestError(
                        f"{path}: line {line_number}: question {qid!r} not in pool",
                        line_number=line_number,
                    )
                return pool_by_id[qid]
            return TaggedQuestion(id=qid, subject="", text="", gold_answer="")

        triplets.append(
            Triplet(
                triplet_id=row["triplet_id"],
                q1=resolve(row["q1_id"]),
                q2=resolve(row["q2_id"]),
                composite_text=row["composite_text"],
                composite_gold=(gold[0], gold[1]),
            )
        )
    return triplets
