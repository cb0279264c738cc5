"""Tests for composite question construction and triplet drawing."""

from __future__ import annotations

import pytest

from reasonscale.compo import (
    DEFAULT_CONNECTOR,
    ConnectorTemplate,
    TaggedQuestion,
    Triplet,
    build_triplets,
    check_independence,
    compose,
    max_cross_subject_pairs,
    read_pool,
    read_triplets,
    write_pool,
    write_triplets,
)
from reasonscale.errors import CapacityError, IngestError, TemplateError


def q(qid, subject, text=None, answer="1"):
    return TaggedQuestion(
        id=qid, subject=subject, text=text or f"text-{qid}", gold_answer=answer
    )


def make_pool(counts):
    """counts: mapping subject -> how many questions of that subject."""
    pool = []
    for subject, n in counts.items():
        for i in range(n):
            pool.append(q(f"{subject}-{i}", subject))
    return pool


class TestConnector:
    def test_default_connector_layout(self):
        text = compose(q("a", "s1", "What is 2+2?"), q("b", "s2", "Name a vowel."))
        assert text == (
            "Answer the following questions in order:\n"
            "Q1. What is 2+2?\n"
            "Q2. Name a vowel."
        )

    def test_custom_connector(self):
        connector = ConnectorTemplate("First: {q1} Second: {q2}")
        assert connector.render("A", "B") == "First: A Second: B"

    def test_missing_slot_rejected(self):
        with pytest.raises(TemplateError):
            ConnectorTemplate("only {q1} here")

    def test_duplicate_slot_rejected(self):
        with pytest.raises(TemplateError):
            ConnectorTemplate("{q1} {q1} {q2}")

    def test_reversed_order_rejected(self):
        with pytest.raises(TemplateError):
            ConnectorTemplate("{q2} then {q1}")


class TestIndependence:
    def test_different_subjects_independent(self):
        assert check_independence(q("a", "math"), q("b", "biology"))

    def test_same_subject_not_independent(self):
        assert not check_independence(q("a", "math"), q("b", "math"))


class TestCapacity:
    def test_empty_pool(self):
        assert max_cross_subject_pairs([]) == 0

    def test_single_subject_pool_supports_nothing(self):
        assert max_cross_subject_pairs(make_pool({"a": 6})) == 0

    def test_balanced_pool_limited_by_size(self):
        assert max_cross_subject_pairs(make_pool({"a": 5, "b": 5})) == 5

    def test_skewed_pool_limited_by_largest_subject(self):
        # 6 + 3: every pair needs one question outside the big subject.
        assert max_cross_subject_pairs(make_pool({"a": 6, "b": 3})) == 3

    def test_five_hundred_questions_five_subjects(self):
        pool = make_pool({f"s{i}": 100 for i in range(5)})
        assert max_cross_subject_pairs(pool) == 250


class TestBuildTriplets:
    def test_exact_count_and_distinct_ids(self):
        pool = make_pool({"a": 4, "b": 4, "c": 2})
        triplets = build_triplets(pool, 5, rng_seed=0)
        assert len(triplets) == 5
        used = [t.q1.id for t in triplets] + [t.q2.id for t in triplets]
        assert len(set(used)) == 10
        assert [t.triplet_id for t in triplets] == [
            "t0001",
            "t0002",
            "t0003",
            "t0004",
            "t0005",
        ]

    def test_all_pairs_cross_subject(self):
        pool = make_pool({"a": 10, "b": 6, "c": 4})
        for t in build_triplets(pool, 10, rng_seed=3):
            assert t.q1.subject != t.q2.subject

    def test_attains_theoretical_maximum_on_skewed_pool(self):
        pool = make_pool({"big": 50, "s1": 10, "s2": 10, "s3": 10})
        assert max_cross_subject_pairs(pool) == 30
        triplets = build_triplets(pool, 30, rng_seed=1)
        assert len(triplets) == 30

    def test_composite_text_and_gold(self):
        pool = [q("a1", "sa", "QA?", "7"), q("b1", "sb", "QB?", "9")]
        (t,) = build_triplets(pool, 1, rng_seed=0)
        assert t.composite_gold in (("7", "9"), ("9", "7"))
        assert "QA?" in t.composite_text and "QB?" in t.composite_text
        assert t.composite_text.startswith("Answer the following questions")

    def test_same_seed_same_pairing(self):
        pool = make_pool({"a": 8, "b": 8, "c": 8})
        first = build_triplets(pool, 12, rng_seed=42)
        second = build_triplets(pool, 12, rng_seed=42)
        assert first == second

    def test_different_seed_changes_pairing(self):
        pool = make_pool({"a": 20, "b": 20})
        one = build_triplets(pool, 20, rng_seed=0)
        two = build_triplets(pool, 20, rng_seed=1)
        assert one != two

    def test_over_capacity_reports_maximum(self):
        pool = make_pool({"a": 6, "b": 3})
        with pytest.raises(CapacityError) as exc_info:
            build_triplets(pool, 4, rng_seed=0)
        assert exc_info.value.max_feasible == 3
        assert "3" in str(exc_info.value)

    def test_count_below_one_rejected(self):
        with pytest.raises(CapacityError):
            build_triplets(make_pool({"a": 2, "b": 2}), 0, rng_seed=0)

    def test_duplicate_pool_id_rejected(self):
        pool = [q("dup", "a"), q("dup", "b")]
        with pytest.raises(CapacityError) as exc_info:
            build_triplets(pool, 1, rng_seed=0)
        assert "dup" in str(exc_info.value)

    def test_full_draw_from_large_pool(self):
        pool = make_pool({f"s{i}": 100 for i in range(5)})
        triplets = build_triplets(pool, 250, rng_seed=7)
        assert len(triplets) == 250
        used = [t.q1.id for t in triplets] + [t.q2.id for t in triplets]
        assert len(set(used)) == 500


class TestPoolAndTripletFiles:
    def test_pool_round_trip(self, tmp_path):
        path = tmp_path / "pool.jsonl"
        pool = [q("a1", "sa", "QA?", "7"), q("b1", "sb", "QB?", "9")]
        assert write_pool(path, pool) == 2
        assert read_pool(path) == pool

    def test_pool_rejects_missing_field(self, tmp_path):
        path = tmp_path / "pool.jsonl"
        path.write_text('{"id": "a", "subject": "s", "text": "t"}\n', encoding="utf-8")
        with pytest.raises(IngestError) as exc_info:
            read_pool(path)
        assert exc_info.value.line_number == 1

    def test_triplets_round_trip_with_pool(self, tmp_path):
        pool = [q("a1", "sa", "QA?", "7"), q("b1", "sb", "QB?", "9")]
        triplets = build_triplets(pool, 1, rng_seed=0)
        path = tmp_path / "triplets.jsonl"
        write_triplets(path, triplets)
        loaded = read_triplets(path, {p.id: p for p in pool})
        assert loaded == triplets

    def test_triplets_without_pool_are_stubs(self, tmp_path):
        pool = [q("a1", "sa"), q("b1", "sb")]
        path = tmp_path / "triplets.jsonl"
        write_triplets(path, build_triplets(pool, 1, rng_seed=0))
        (t,) = read_triplets(path)
        assert {t.q1.id, t.q2.id} == {"a1", "b1"}
        assert t.q1.text == ""

    def test_triplets_unknown_question_rejected(self, tmp_path):
        pool = [q("a1", "sa"), q("b1", "sb")]
        path = tmp_path / "triplets.jsonl"
        write_triplets(path, build_triplets(pool, 1, rng_seed=0))
        with pytest.raises(IngestError):
            read_triplets(path, {"a1": pool[0]})

    def test_triplets_bad_gold_rejected(self, tmp_path):
        path = tmp_path / "triplets.jsonl"
        path.write_text(
            '{"triplet_id": "t1", "q1_id": "a", "q2_id": "b", '
            '"composite_text": "x", "gold": ["only-one"]}\n',
            encoding="utf-8",
        )
        with pytest.raises(IngestError):
            read_triplets(path)
