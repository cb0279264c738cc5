"""Scaling metrics: monotonicity, compositional additivity, and law fits.

Monotonicity asks whether per-variant reasoning compute rises and
log-accuracy falls as the variant index grows; both are summarized by
Spearman rank correlation against the index. Compositionality asks
whether a composite question costs the sum of its parts; deviations are
summarized by a normalized mean absolute deviation (nMAD). Law fits
recover the linear-compute slope and the exponential accuracy decay
rate by ordinary least squares.

Undefined statistics (constant series, empty denominators) are reported
as None with an explanatory flag or count, never silently coerced to 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .compo import Triplet
from .errors import FitError
from .families import Family
from .parsing import extract_answers, grade
from .records import SampleRecord

# ---------------------------------------------------------------------------
# rank correlation


def average_ranks(values: Sequence[float]) -> np.ndarray:
    """1-based ranks; tied values share the average of their positions."""
    arr = np.asarray(values, dtype=float)
    order = np.argsort(arr, kind="mergesort")
    ranks = np.empty(len(arr), dtype=float)
    i = 0
    while i < len(arr):
        j = i
        while j + 1 < len(arr) and arr[order[j + 1]] == arr[order[i]]:
            j += 1
        # positions i..j (0-based) share rank mean of (i+1..j+1)
        avg = (i + j) / 2.0 + 1.0
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        i = j + 1
    return ranks


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float | None:
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if len(x) != len(y) or len(x) < 2:
        return None
    dx = x - x.mean()
    dy = y - y.mean()
    denom = math.sqrt(float(np.dot(dx, dx)) * float(np.dot(dy, dy)))
    if denom == 0.0:
        return None
    return float(np.dot(dx, dy)) / denom


def spearman(xs: Sequence[float], ys: Sequence[float]) -> float | None:
    """Spearman rank correlation with average-rank tie handling.

    Needs at least 3 points. A constant series has no rank ordering, so
    the statistic is undefined and None is returned rather than 0.
    """
    if len(xs) != len(ys):
        raise ValueError(f"length mismatch: {len(xs)} vs {len(ys)}")
    if len(xs) < 3:
        raise ValueError(f"spearman needs >= 3 points, got {len(xs)}")
    return pearson(average_ranks(xs), average_ranks(ys))


# ---------------------------------------------------------------------------
# per-question estimates from sample records


@dataclass(frozen=True)
class QuestionEstimate:
    question_id: str
    compute: float
    accuracy: float
    n_samples: int
    n_truncated: int = 0
    n_error: int = 0


def estimate_question(
    question_id: str,
    gold: Sequence[str],
    records: Sequence[SampleRecord],
) -> QuestionEstimate:
    """Mean reasoning compute and empirical accuracy over one question's
    records.

    Every record counts toward compute, truncated and errored ones
    included: their tokens were spent. Truncated and errored records
    are never graded correct.
    """
    if not records:
        raise ValueError(f"question {question_id!r} has no records")
    gold = list(gold)
    n_correct = 0
    n_trunc = 0
    n_err = 0
    total_tokens = 0.0
    for rec in records:
        total_tokens += rec.reasoning_tokens
        if rec.finish == "truncated":
            n_trunc += 1
            continue
        if rec.finish == "error":
            n_err += 1
            continue
        extracted = extract_answers(rec.answer_text, len(gold))
        if grade(extracted, gold):
            n_correct += 1
    return QuestionEstimate(
        question_id=question_id,
        compute=total_tokens / len(records),
        accuracy=n_correct / len(records),
        n_samples=len(records),
        n_truncated=n_trunc,
        n_error=n_err,
    )


def group_records(records: Iterable[SampleRecord]) -> dict[str, list[SampleRecord]]:
    grouped: dict[str, list[SampleRecord]] = {}
    for rec in records:
        grouped.setdefault(rec.question_id, []).append(rec)
    for recs in grouped.values():
        recs.sort(key=lambda r: r.sample_index)
    return grouped


# ---------------------------------------------------------------------------
# monotonicity

LOG_AGG_PER_QUESTION = "per_question"
LOG_AGG_OF_MEAN = "log_of_mean"


@dataclass(frozen=True)
class MonoCurvePoint:
    index: int
    mean_norm_compute: float
    mean_log_accuracy: float | None
    n_series: int
    n_zero_accuracy: int

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "mean_norm_compute": self.mean_norm_compute,
            "mean_log_accuracy": self.mean_log_accuracy,
            "n_series": self.n_series,
            "n_zero_accuracy": self.n_zero_accuracy,
        }


@dataclass(frozen=True)
class MonoScope:
    scope: str
    compute_rho: float | None
    log_accuracy_rho: float | None
    n_series: int
    n_indices: int
    n_indices_excluded_log: int
    degenerate_compute_series: tuple[str, ...]
    curve: tuple[MonoCurvePoint, ...]

    def to_dict(self) -> dict:
        return {
            "scope": self.scope,
            "compute_rho": self.compute_rho,
            "log_accuracy_rho": self.log_accuracy_rho,
            "n_series": self.n_series,
            "n_indices": self.n_indices,
            "n_indices_excluded_log": self.n_indices_excluded_log,
            "degenerate_compute_series": list(self.degenerate_compute_series),
            "curve": [p.to_dict() for p in self.curve],
        }


@dataclass(frozen=True)
class MonoReport:
    overall: MonoScope
    per_domain: Mapping[str, MonoScope]
    samples_per_question: int
    log_aggregation: str

    def to_dict(self) -> dict:
        return {
            "overall": self.overall.to_dict(),
            "per_domain": {d: s.to_dict() for d, s in sorted(self.per_domain.items())},
            "samples_per_question": self.samples_per_question,
            "log_aggregation": self.log_aggregation,
        }


@dataclass(frozen=True)
class _SeriesData:
    seed_id: str
    domain: str
    indices: tuple[int, ...]
    norm_compute: tuple[float, ...]
    accuracy: tuple[float, ...]
    degenerate: bool


def _normalize_series(computes: Sequence[float]) -> tuple[list[float], bool]:
    lo = min(computes)
    hi = max(computes)
    if hi == lo:
        # No range to normalize over: pin to mid-scale and flag the series.
        return [0.5] * len(computes), True
    return [(c - lo) / (hi - lo) for c in computes], False


def _scope_report(
    scope: str,
    series: Sequence[_SeriesData],
    log_aggregation: str,
) -> MonoScope:
    indices = series[0].indices
    curve = []
    included_idx_pos = []
    for pos, index in enumerate(indices):
        computes = [s.norm_compute[pos] for s in series]
        accuracies = [s.accuracy[pos] for s in series]
        nonzero = [a for a in accuracies if a > 0.0]
        n_zero = len(accuracies) - len(nonzero)
        if log_aggregation == LOG_AGG_PER_QUESTION:
            log_acc = (
                sum(math.log(a) for a in nonzero) / len(nonzero) if nonzero else None
            )
        elif log_aggregation == LOG_AGG_OF_MEAN:
            mean_acc = sum(accuracies) / len(accuracies)
            log_acc = math.log(mean_acc) if mean_acc > 0.0 else None
        else:
            raise ValueError(f"unknown log aggregation mode: {log_aggregation!r}")
        if log_acc is not None:
            included_idx_pos.append(pos)
        curve.append(
            MonoCurvePoint(
                index=index,
                mean_norm_compute=sum(computes) / len(computes),
                mean_log_accuracy=log_acc,
                n_series=len(series),
                n_zero_accuracy=n_zero,
            )
        )
    compute_rho = None
    if len(indices) >= 3:
        compute_rho = spearman(indices, [p.mean_norm_compute for p in curve])
    log_rho = None
    if len(included_idx_pos) >= 3:
        log_rho = spearman(
            [indices[pos] for pos in included_idx_pos],
            [curve[pos].mean_log_accuracy for pos in included_idx_pos],
        )
    return MonoScope(
        scope=scope,
        compute_rho=compute_rho,
        log_accuracy_rho=log_rho,
        n_series=len(series),
        n_indices=len(indices),
        n_indices_excluded_log=len(indices) - len(included_idx_pos),
        degenerate_compute_series=tuple(
            s.seed_id for s in series if s.degenerate
        ),
        curve=tuple(curve),
    )


def mono_eval(
    families: Sequence[Family],
    records: Iterable[SampleRecord],
    log_aggregation: str = LOG_AGG_PER_QUESTION,
) -> MonoReport:
    """Monotonicity evaluation over question families.

    Per family, mean reasoning compute is max-min normalized across its
    variants so no single long-winded family dominates; per variant
    index the normalized compute and the log accuracy are averaged
    across families, and each aggregate curve is rank-correlated with
    the index. Indices where every family in scope has zero accuracy
    are excluded from the log-accuracy correlation and counted.
    """
    if not families:
        raise ValueError("mono_eval needs at least one family")
    grouped = group_records(records)
    expected = None
    k_values = set()
    all_series = []
    for fam in families:
        qs = sorted(fam.questions, key=lambda q: q.variant_index)
        indices = tuple(q.variant_index for q in qs)
        if expected is None:
            expected = indices
        elif indices != expected:
            raise ValueError(
                f"family {fam.seed_id!r} has variant range {indices}, "
                f"expected {expected}"
            )
        computes = []
        accuracies = []
        for q in qs:
            recs = grouped.get(q.id)
            if not recs:
                raise ValueError(f"no records for question {q.id!r}")
            k_values.add(len(recs))
            est = estimate_question(q.id, [q.gold_answer], recs)
            computes.append(est.compute)
            accuracies.append(est.accuracy)
        norm, degenerate = _normalize_series(computes)
        all_series.append(
            _SeriesData(
                seed_id=fam.seed_id,
                domain=fam.domain,
                indices=indices,
                norm_compute=tuple(norm),
                accuracy=tuple(accuracies),
                degenerate=degenerate,
            )
        )
    if len(k_values) > 1:
        raise ValueError(
            f"questions have unequal sample counts: {sorted(k_values)}"
        )
    per_domain = {}
    for domain in sorted({s.domain for s in all_series}):
        scoped = [s for s in all_series if s.domain == domain]
        per_domain[domain] = _scope_report(domain, scoped, log_aggregation)
    return MonoReport(
        overall=_scope_report("all", all_series, log_aggregation),
        per_domain=per_domain,
        samples_per_question=next(iter(k_values)),
        log_aggregation=log_aggregation,
    )


# ---------------------------------------------------------------------------
# compositionality


@dataclass(frozen=True)
class TripletEstimate:
    triplet_id: str
    compute_parts: tuple[float, float]
    compute_composite: float
    accuracy_parts: tuple[float, float]
    accuracy_composite: float


@dataclass(frozen=True)
class CompoSide:
    mad: float
    sum_abs_parts: float
    nmad: float | None
    n_included: int
    n_excluded_zero_accuracy: int = 0

    def to_dict(self) -> dict:
        return {
            "mad": self.mad,
            "sum_abs_parts": self.sum_abs_parts,
            "nmad": self.nmad,
            "n_included": self.n_included,
            "n_excluded_zero_accuracy": self.n_excluded_zero_accuracy,
        }


@dataclass(frozen=True)
class TripletDeviation:
    triplet_id: str
    sum_parts_compute: float
    composite_compute: float
    sum_parts_log_accuracy: float | None
    composite_log_accuracy: float | None


@dataclass(frozen=True)
class CompoReport:
    compute: CompoSide
    log_accuracy: CompoSide
    deviations: tuple[TripletDeviation, ...] = field(default=(), compare=False)

    def to_dict(self) -> dict:
        return {
            "compute": self.compute.to_dict(),
            "log_accuracy": self.log_accuracy.to_dict(),
        }


def triplet_estimates(
    triplets: Sequence[Triplet],
    estimates: Mapping[str, QuestionEstimate],
) -> list[TripletEstimate]:
    """Join triplets with per-question estimates.

    Sub-questions are keyed by their own ids; the composite is keyed by
    the triplet id.
    """
    rows = []
    for t in triplets:
        try:
            e1 = estimates[t.q1.id]
            e2 = estimates[t.q2.id]
            e12 = estimates[t.triplet_id]
        except KeyError as exc:
            raise ValueError(f"missing estimate for {exc.args[0]!r}") from exc
        rows.append(
            TripletEstimate(
                triplet_id=t.triplet_id,
                compute_parts=(e1.compute, e2.compute),
                compute_composite=e12.compute,
                accuracy_parts=(e1.accuracy, e2.accuracy),
                accuracy_composite=e12.accuracy,
            )
        )
    return rows


def compo_eval(rows: Sequence[TripletEstimate]) -> CompoReport:
    """Additivity deviation over triplets.

    For compute, f is the mean reasoning compute; for accuracy, f is
    log accuracy, where triplets with any zero accuracy are excluded
    (their logs are undefined) and counted. MAD sums |f(composite) -
    (f(part1) + f(part2))| and is normalized by the summed magnitude of
    the part sums, so nMAD is invariant to rescaling f.
    """
    if not rows:
        raise ValueError("compo_eval needs at least one triplet")
    mad_c = 0.0
    s_c = 0.0
    mad_log = 0.0
    s_log = 0.0
    n_log = 0
    n_excluded = 0
    deviations = []
    for row in rows:
        parts_sum = row.compute_parts[0] + row.compute_parts[1]
        mad_c += abs(row.compute_composite - parts_sum)
        s_c += abs(parts_sum)
        log_parts = None
        log_comp = None
        a1, a2 = row.accuracy_parts
        a12 = row.accuracy_composite
        if a1 > 0.0 and a2 > 0.0 and a12 > 0.0:
            log_parts = math.log(a1) + math.log(a2)
            log_comp = math.log(a12)
            mad_log += abs(log_comp - log_parts)
            s_log += abs(log_parts)
            n_log += 1
        else:
            n_excluded += 1
        deviations.append(
            TripletDeviation(
                triplet_id=row.triplet_id,
                sum_parts_compute=parts_sum,
                composite_compute=row.compute_composite,
                sum_parts_log_accuracy=log_parts,
                composite_log_accuracy=log_comp,
            )
        )
    return CompoReport(
        compute=CompoSide(
            mad=mad_c,
            sum_abs_parts=s_c,
            nmad=(mad_c / s_c) if s_c > 0.0 else None,
            n_included=len(rows),
        ),
        log_accuracy=CompoSide(
            mad=mad_log,
            sum_abs_parts=s_log,
            nmad=(mad_log / s_log) if s_log > 0.0 else None,
            n_included=n_log,
            n_excluded_zero_accuracy=n_excluded,
        ),
        deviations=tuple(deviations),
    )


# ---------------------------------------------------------------------------
# law fits


@dataclass(frozen=True)
class LawFit:
    compute_slope: float
    compute_intercept: float
    compute_r2: float
    decay_rate: float | None
    log_accuracy_intercept: float | None
    accuracy_r2: float | None
    n_points: int
    n_zero_accuracy_excluded: int

    def to_dict(self) -> dict:
        return {
            "compute_slope": self.compute_slope,
            "compute_intercept": self.compute_intercept,
            "compute_r2": self.compute_r2,
            "decay_rate": self.decay_rate,
            "log_accuracy_intercept": self.log_accuracy_intercept,
            "accuracy_r2": self.accuracy_r2,
            "n_points": self.n_points,
            "n_zero_accuracy_excluded": self.n_zero_accuracy_excluded,
        }


def _ols(x: np.ndarray, y: np.ndarray) -> tuple[float, float, float]:
    design = np.stack([x, np.ones_like(x)], axis=1)
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    pred = design @ coef
    ss_res = float(np.sum((y - pred) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    if ss_tot == 0.0:
        r2 = 1.0 if ss_res < 1e-24 else 0.0
    else:
        r2 = 1.0 - ss_res / ss_tot
    return float(coef[0]), float(coef[1]), r2


def fit_laws(
    complexities: Sequence[float],
    computes: Sequence[float],
    accuracies: Sequence[float],
) -> LawFit:
    """Fit compute = a + slope * complexity and
    log accuracy = b - decay_rate * complexity by OLS.

    Zero-accuracy points have no log and are excluded from the decay
    fit; their count is reported. If fewer than two usable points
    remain, the decay side is None rather than a fabricated fit.
    """
    kappa = np.asarray(complexities, dtype=float)
    comp = np.asarray(computes, dtype=float)
    acc = np.asarray(accuracies, dtype=float)
    if not (len(kappa) == len(comp) == len(acc)):
        raise FitError("complexities, computes, accuracies must have equal length")
    if len(kappa) < 3:
        raise FitError(f"need >= 3 points to fit, got {len(kappa)}")
    if float(kappa.max()) == float(kappa.min()):
        raise FitError("complexity values are constant; slope is unidentifiable")
    slope, intercept, r2 = _ols(kappa, comp)
    mask = acc > 0.0
    n_excluded = int((~mask).sum())
    decay = log_intercept = acc_r2 = None
    if mask.sum() >= 2 and float(kappa[mask].max()) != float(kappa[mask].min()):
        log_slope, log_intercept, acc_r2 = _ols(kappa[mask], np.log(acc[mask]))
        decay = -log_slope
    return LawFit(
        compute_slope=slope,
        compute_intercept=intercept,
        compute_r2=r2,
        decay_rate=decay,
        log_accuracy_intercept=log_intercept,
        accuracy_r2=acc_r2,
        n_points=len(kappa),
        n_zero_accuracy_excluded=n_excluded,
    )
