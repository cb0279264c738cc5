"""Sample records: the on-disk unit of model output.

One record is one rollout for one question. samples.jsonl carries
question_id, sample_index, reasoning_text, answer_text, an optional
reasoning_tokens count, token_source, and finish; unknown fields
round-trip through meta untouched.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .errors import IngestError
from .jsonl import iter_jsonl, write_jsonl_atomic
from .parsing import (
    FINISH_COMPLETE,
    FINISH_ERROR,
    FINISH_TRUNCATED,
    THINK_CLOSE,
    THINK_OPEN,
    count_tokens,
)

TOKEN_SOURCE_SERVER = "server_reported"
TOKEN_SOURCE_LOCAL = "local_approx"

_FINISH_VALUES = (FINISH_COMPLETE, FINISH_TRUNCATED, FINISH_ERROR)
_TOKEN_SOURCES = (TOKEN_SOURCE_SERVER, TOKEN_SOURCE_LOCAL)

_KNOWN_FIELDS = (
    "question_id",
    "sample_index",
    "reasoning_text",
    "answer_text",
    "reasoning_tokens",
    "token_source",
    "finish",
    "meta",
)


@dataclass(frozen=True)
class SamplingConfig:
    """Connection and decoding settings for remote sampling."""

    endpoint: str = ""
    model: str = ""
    temperature: float | None = None
    samples_per_question: int = 8
    max_tokens: int = 20480
    think_open: str = THINK_OPEN
    think_close: str = THINK_CLOSE
    max_in_flight: int = 4
    max_attempts: int = 3
    backoff_base: float = 1.0
    timeout: float = 600.0
    api_key_env: str = "OPENAI_API_KEY"
    token_mode: str = "whitespace"

    def resolved_temperature(self) -> float:
        if self.temperature is not None:
            return self.temperature
        return default_temperature(self.model)


def default_temperature(model: str) -> float:
    """0.8 for model families that recommend it, 0.6 otherwise."""
    return 0.8 if "phi" in model.lower() else 0.6


@dataclass(frozen=True)
class SampleRecord:
    question_id: str
    sample_index: int
    reasoning_text: str
    answer_text: str
    reasoning_tokens: int
    token_source: str
    finish: str
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.finish not in _FINISH_VALUES:
            raise ValueError(f"invalid finish value: {self.finish!r}")
        if self.token_source not in _TOKEN_SOURCES:
            raise ValueError(f"invalid token_source value: {self.token_source!r}")
        if self.reasoning_tokens < 0:
            raise ValueError("reasoning_tokens must be >= 0")


def record_from_raw(
    question_id: str,
    sample_index: int,
    raw_text: str,
    *,
    think_open: str = THINK_OPEN,
    think_close: str = THINK_CLOSE,
    server_reasoning_tokens: int | None = None,
    truncated: bool = False,
    token_mode: str = "whitespace",
    meta: dict | None = None,
) -> SampleRecord:
    """Split raw completion text and build a record.

    A server-side length stop marks the record truncated even when the
    split itself found a close marker.
    """
    from .parsing import split_reasoning

    reasoning, answer, finish = split_reasoning(raw_text, think_open, think_close)
    if truncated:
        finish = FINISH_TRUNCATED
    if server_reasoning_tokens is not None:
        tokens = server_reasoning_tokens
        source = TOKEN_SOURCE_SERVER
    else:
        tokens = count_tokens(reasoning, token_mode)
        source = TOKEN_SOURCE_LOCAL
    return SampleRecord(
        question_id=question_id,
        sample_index=sample_index,
        reasoning_text=reasoning,
        answer_text=answer,
        reasoning_tokens=tokens,
        token_source=source,
        finish=finish,
        meta=meta or {},
    )


def record_to_row(record: SampleRecord) -> dict:
    row = {
        "question_id": record.question_id,
        "sample_index": record.sample_index,
        "reasoning_text": record.reasoning_text,
        "answer_text": record.answer_text,
        "reasoning_tokens": record.reasoning_tokens,
        "token_source": record.token_source,
        "finish": record.finish,
    }
    if record.meta:
        row["meta"] = record.meta
    return row


def write_records(path: str | Path, records: Iterable[SampleRecord]) -> int:
    return write_jsonl_atomic(path, records, to_obj=record_to_row)


def _require(row: dict, name: str, typ, path, line_number: int):
    if name not in row:
        raise IngestError(
            f"{path}: line {line_number}: missing field {name!r}",
            line_number=line_number,
        )
    value = row[name]
    if not isinstance(value, typ) or isinstance(value, bool):
        raise IngestError(
            f"{path}: line {line_number}: field {name!r} must be {typ.__name__}",
            line_number=line_number,
        )
    return value


def read_records(path: str | Path, token_mode: str = "whitespace") -> list[SampleRecord]:
    """Ingest samples.jsonl with schema validation.

    Records that already carry reasoning_tokens keep their count and are
    treated as server reported unless the file says otherwise; records
    without one get a local approximation. Unknown fields are preserved
    under meta.
    """
    records = []
    for line_number, row in iter_jsonl(path):
        question_id = _require(row, "question_id", str, path, line_number)
        sample_index = _require(row, "sample_index", int, path, line_number)
        reasoning_text = _require(row, "reasoning_text", str, path, line_number)
        answer_text = _require(row, "answer_text", str, path, line_number)
        finish = _require(row, "finish", str, path, line_number)
        if finish not in _FINISH_VALUES:
            raise IngestError(
                f"{path}: line {line_number}: finish must be one of "
                f"{', '.join(_FINISH_VALUES)}; got {finish!r}",
                line_number=line_number,
            )
        if "reasoning_tokens" in row:
            tokens = _require(row, "reasoning_tokens", int, path, line_number)
            if tokens < 0:
                raise IngestError(
                    f"{path}: line {line_number}: reasoning_tokens must be >= 0",
                    line_number=line_number,
                )
            token_source = row.get("token_source", TOKEN_SOURCE_SERVER)
        else:
            tokens = count_tokens(reasoning_text, token_mode)
            token_source = TOKEN_SOURCE_LOCAL
        if token_source not in _TOKEN_SOURCES:
            raise IngestError(
                f"{path}: line {line_number}: token_source must be one of "
                f"{', '.join(_TOKEN_SOURCES)}; got {token_source!r}",
                line_number=line_number,
            )
        meta = dict(row.get("meta") or {})
        extra = {k: v for k, v in row.items() if k not in _KNOWN_FIELDS}
        meta.update(extra)
        records.append(
            SampleRecord(
                question_id=question_id,
                sample_index=sample_index,
                reasoning_text=reasoning_text,
                answer_text=answer_text,
                reasoning_tokens=tokens,
                token_source=token_source,
                finish=finish,
                meta=meta,
            )
        )
    return records
