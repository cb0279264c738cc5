"""Tests for the synthetic responder and its ground-truth laws."""

from __future__ import annotations

import math

import pytest

from reasonscale.errors import ParameterError
from reasonscale.metrics import estimate_question, group_records
from reasonscale.synthetic import (
    SynthModelSpec,
    SynthQuestion,
    mean_length,
    respond_to_questions,
    respond_to_triplets,
    success_probability,
    synth_composite_respond,
    synth_families,
    synth_respond,
)


def exact_spec(**overrides):
    """Noise-free deterministic spec: every record is fully predictable."""
    base = dict(
        tokens_per_step=50.0,
        overhead=0.0,
        noise_rel=0.0,
        decay_rate=math.log(2),
        accuracy_mode="deterministic",
        rng_seed=0,
    )
    base.update(overrides)
    return SynthModelSpec(**base)


class TestSpecValidation:
    def test_rejects_nonpositive_tokens_per_step(self):
        with pytest.raises(ParameterError):
            SynthModelSpec(tokens_per_step=0.0)

    def test_rejects_unknown_accuracy_mode(self):
        with pytest.raises(ParameterError):
            SynthModelSpec(accuracy_mode="oracle")

    def test_rejects_unknown_violation(self):
        with pytest.raises(ParameterError):
            SynthModelSpec(violation="sneaky")

    def test_rejects_unit_superadditive_scale(self):
        with pytest.raises(ParameterError):
            SynthModelSpec(violation="superadditive", superadditive_scale=1.0)


class TestLaws:
    def test_mean_length_formula(self):
        spec = SynthModelSpec(tokens_per_step=50.0, overhead=10.0)
        assert mean_length(spec, 4) == pytest.approx(200.0 + 10.0 * math.log(5))

    def test_mean_length_rejects_zero_complexity(self):
        with pytest.raises(ParameterError):
            mean_length(SynthModelSpec(), 0)

    def test_inverted_violation_decreases(self):
        spec = SynthModelSpec(violation="inverted_compute", max_steps=30)
        lengths = [mean_length(spec, k) for k in range(1, 31)]
        assert lengths == sorted(lengths, reverse=True)
        assert lengths[0] == pytest.approx(spec.tokens_per_step * 30)

    def test_flat_violation_is_constant(self):
        spec = SynthModelSpec(violation="flat_compute", max_steps=30)
        lengths = {mean_length(spec, k) for k in range(1, 31)}
        assert lengths == {spec.tokens_per_step * 15.0}

    def test_success_probability_decays_exponentially(self):
        spec = SynthModelSpec(decay_rate=0.05)
        assert success_probability(spec, 20) == pytest.approx(math.exp(-1.0))


class TestSynthRespond:
    def test_deterministic_per_seed_and_id(self):
        spec = SynthModelSpec(rng_seed=7)
        q = SynthQuestion(id="q1", complexity=5)
        assert synth_respond(q, spec, 8) == synth_respond(q, spec, 8)

    def test_different_ids_draw_different_noise(self):
        spec = SynthModelSpec(rng_seed=7, noise_rel=0.05)
        a = synth_respond(SynthQuestion(id="qa", complexity=5), spec, 8)
        b = synth_respond(SynthQuestion(id="qb", complexity=5), spec, 8)
        assert [r.reasoning_tokens for r in a] != [r.reasoning_tokens for r in b]

    def test_noise_free_lengths_are_exact(self):
        records = synth_respond(SynthQuestion(id="q", complexity=3), exact_spec(), 4)
        assert [r.reasoning_tokens for r in records] == [150, 150, 150, 150]

    def test_deterministic_accuracy_allocates_exact_count(self):
        # p = 2^-1 = 0.5 at complexity 1 under decay_rate = ln 2.
        records = synth_respond(SynthQuestion(id="q", complexity=1), exact_spec(), 16)
        est = estimate_question("q", ["1"], records)
        assert est.accuracy == 0.5

    def test_records_grade_through_real_pipeline(self):
        spec = exact_spec()
        q = SynthQuestion(id="q", complexity=2, gold_answer="my-answer")
        records = synth_respond(q, spec, 16)
        est = estimate_question("q", ["my-answer"], records)
        assert est.accuracy == 0.25
        assert est.compute == 100.0
        assert all(r.finish == "complete" for r in records)
        assert all(r.token_source == "server_reported" for r in records)

    def test_reasoning_text_token_count_matches_reported(self):
        records = synth_respond(SynthQuestion(id="q", complexity=2), exact_spec(), 2)
        for rec in records:
            assert len(rec.reasoning_text.split()) == rec.reasoning_tokens

    def test_bernoulli_accuracy_is_statistically_right(self):
        spec = SynthModelSpec(
            noise_rel=0.0, decay_rate=0.05, accuracy_mode="bernoulli", rng_seed=123
        )
        k = 10_000
        records = synth_respond(SynthQuestion(id="big", complexity=20), spec, k)
        est = estimate_question("big", ["20"], records)
        p = math.exp(-1.0)
        sigma = math.sqrt(p * (1 - p) / k)
        assert abs(est.accuracy - p) <= 3 * sigma


class TestComposite:
    def test_lengths_add_exactly_without_noise(self):
        spec = exact_spec()
        q1 = SynthQuestion(id="a", complexity=1)
        q2 = SynthQuestion(id="b", complexity=2)
        records = synth_composite_respond(q1, q2, spec, 4)
        assert all(r.reasoning_tokens == 150 for r in records)
        assert all(r.question_id == "a+b" for r in records)

    def test_success_probability_multiplies(self):
        spec = exact_spec()
        q1 = SynthQuestion(id="a", complexity=1)
        q2 = SynthQuestion(id="b", complexity=1)
        records = synth_composite_respond(q1, q2, spec, 16)
        est = estimate_question("a+b", ["1", "1"], records)
        assert est.accuracy == 0.25

    def test_composite_answers_grade_slotwise(self):
        spec = exact_spec()
        q1 = SynthQuestion(id="a", complexity=1, gold_answer="alpha")
        q2 = SynthQuestion(id="b", complexity=1, gold_answer="beta")
        records = synth_composite_respond(q1, q2, spec, 4)
        correct = [r for r in records if "wrong" not in r.answer_text]
        wrong = [r for r in records if "wrong" in r.answer_text]
        assert correct and wrong
        assert estimate_question("x", ["alpha", "beta"], correct).accuracy == 1.0
        assert estimate_question("x", ["alpha", "beta"], wrong).accuracy == 0.0

    def test_superadditive_violation_scales_composite_only(self):
        spec = exact_spec(violation="superadditive", superadditive_scale=1.5)
        q1 = SynthQuestion(id="a", complexity=2)
        q2 = SynthQuestion(id="b", complexity=2)
        parts = synth_respond(q1, spec, 2) + synth_respond(q2, spec, 2)
        composite = synth_composite_respond(q1, q2, spec, 2)
        assert all(r.reasoning_tokens == 100 for r in parts)
        assert all(r.reasoning_tokens == 300 for r in composite)

    def test_custom_composite_id(self):
        spec = exact_spec()
        records = synth_composite_respond(
            SynthQuestion(id="a", complexity=1),
            SynthQuestion(id="b", complexity=1),
            spec,
            2,
            composite_id="t0001",
        )
        assert all(r.question_id == "t0001" for r in records)


class TestPipelineAdapters:
    def test_synth_families_shape(self):
        families = synth_families(6, 30)
        assert len(families) == 6
        assert [f.domain for f in families] == [
            "math",
            "science",
            "language",
            "code",
            "math",
            "science",
        ]
        fam = families[0]
        assert len(fam.questions) == 30
        assert fam.questions[0].id == f"{fam.seed_id}-v01"
        assert fam.questions[17].gold_answer == "18"
        assert fam.questions[17].steps == 18

    def test_respond_to_questions_uses_step_counts(self):
        fam = synth_families(1, 3)[0]
        records = respond_to_questions(fam.questions, exact_spec(), 2)
        grouped = group_records(records)
        for q in fam.questions:
            assert all(
                r.reasoning_tokens == 50 * q.steps for r in grouped[q.id]
            )

    def test_respond_to_triplets_samples_shared_subquestion_once(self):
        from reasonscale.compo import TaggedQuestion, Triplet

        qa = TaggedQuestion("a", "sa", "ta", "1")
        qb = TaggedQuestion("b", "sb", "tb", "2")
        qc = TaggedQuestion("c", "sc", "tc", "3")
        triplets = [
            Triplet("t1", qa, qb, "x", ("1", "2")),
            Triplet("t2", qa, qc, "y", ("1", "3")),
        ]
        records = respond_to_triplets(
            triplets, {"a": 1, "b": 2, "c": 3}, exact_spec(), 4
        )
        grouped = group_records(records)
        assert set(grouped) == {"a", "b", "c", "t1", "t2"}
        assert all(len(recs) == 4 for recs in grouped.values())

    def test_respond_to_triplets_requires_complexities(self):
        from reasonscale.compo import TaggedQuestion, Triplet

        qa = TaggedQuestion("a", "sa", "ta", "1")
        qb = TaggedQuestion("b", "sb", "tb", "2")
        with pytest.raises(ParameterError):
            respond_to_triplets(
                [Triplet("t1", qa, qb, "x", ("1", "2"))], {"a": 1}, exact_spec(), 2
            )
