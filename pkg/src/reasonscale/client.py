"""Remote sampling against an OpenAI-compatible chat-completions endpoint.

Each (question, sample_index) pair becomes one single-choice request so
retries and token accounting stay per-sample. Requests run on a thread
pool capped at max_in_flight. Transient failures (connection errors,
429, 5xx) are retried with exponential backoff; exhausted or permanent
failures produce finish=error records rather than aborting the batch.
The API key is read from the configured environment variable and is
never logged or echoed into records.
"""

from __future__ import annotations

import logging
import os
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Protocol, Sequence

import requests

from .errors import RemoteBatchError
from .records import SampleRecord, SamplingConfig, record_from_raw, write_records

log = logging.getLogger(__name__)

_RETRYABLE_STATUS = {429, 500, 502, 503, 504}
_AUTH_STATUS = {401, 403}


class PromptItem(Protocol):
    id: str
    text: str


def _error_record(question_id: str, sample_index: int, reason: str) -> SampleRecord:
    return SampleRecord(
        question_id=question_id,
        sample_index=sample_index,
        reasoning_text="",
        answer_text="",
        reasoning_tokens=0,
        token_source="local_approx",
        finish="error",
        meta={"error": reason},
    )


def _reasoning_token_count(choice: dict, usage: dict) -> int | None:
    """Server-reported reasoning tokens when available.

    Prefers an explicit reasoning count; falls back to the completion
    total, which for think-style models is dominated by the chain.
    """
    details = usage.get("completion_tokens_details") or {}
    if isinstance(details.get("reasoning_tokens"), int):
        return details["reasoning_tokens"]
    if isinstance(usage.get("completion_tokens"), int):
        return usage["completion_tokens"]
    return None


def _request_one(
    session: requests.Session,
    cfg: SamplingConfig,
    api_key: str | None,
    item_id: str,
    text: str,
    sample_index: int,
) -> SampleRecord:
    payload = {
        "model": cfg.model,
        "messages": [{"role": "user", "content": text}],
        "temperature": cfg.resolved_temperature(),
        "n": 1,
        "max_tokens": cfg.max_tokens,
    }
    headers = {"Content-Type": "application/json"}
    if api_key:
        headers["Authorization"] = f"Bearer {api_key}"
    last_reason = "unknown error"
    for attempt in range(cfg.max_attempts):
        if attempt > 0:
            time.sleep(cfg.backoff_base * (2 ** (attempt - 1)))
        try:
            resp = session.post(
                cfg.endpoint, json=payload, headers=headers, timeout=cfg.timeout
            )
        except requests.RequestException as exc:
            last_reason = f"connection error: {type(exc).__name__}"
            continue
        if resp.status_code in _AUTH_STATUS:
            return _error_record(item_id, sample_index, f"auth rejected ({resp.status_code})")
        if resp.status_code in _RETRYABLE_STATUS:
            last_reason = f"http {resp.status_code}"
            continue
        if resp.status_code != 200:
            return _error_record(item_id, sample_index, f"http {resp.status_code}")
        try:
            body = resp.json()
            choice = body["choices"][0]
            raw_text = choice["message"]["content"] or ""
        except (ValueError, KeyError, IndexError, TypeError):
            last_reason = "malformed response body"
            continue
        usage = body.get("usage") or {}
        return record_from_raw(
            item_id,
            sample_index,
            raw_text,
            think_open=cfg.think_open,
            think_close=cfg.think_close,
            server_reasoning_tokens=_reasoning_token_count(choice, usage),
            truncated=choice.get("finish_reason") == "length",
            token_mode=cfg.token_mode,
        )
    return _error_record(item_id, sample_index, last_reason)


def sample_remote(
    items: Sequence[PromptItem],
    cfg: SamplingConfig,
    out_path: str | Path | None = None,
) -> list[SampleRecord]:
    """Collect samples_per_question rollouts for every item.

    Results come back ordered by (input position, sample_index)
    regardless of completion order. When out_path is given the records
    are also written there; if every request failed, whatever was
    collected is flushed first and a RemoteBatchError is raised so the
    caller can distinguish a dead endpoint from a bad model.
    """
    if not cfg.endpoint:
        raise RemoteBatchError("sampling endpoint is not configured")
    api_key = os.environ.get(cfg.api_key_env) or None
    tasks = [
        (pos, item, k)
        for pos, item in enumerate(items)
        for k in range(cfg.samples_per_question)
    ]
    results: dict[tuple[int, int], SampleRecord] = {}
    with requests.Session() as session:
        with ThreadPoolExecutor(max_workers=max(1, cfg.max_in_flight)) as pool:
            futures = {
                pool.submit(
                    _request_one, session, cfg, api_key, item.id, item.text, k
                ): (pos, k)
                for pos, item, k in tasks
            }
            for future, key in futures.items():
                results[key] = future.result()
    records = [results[key] for key in sorted(results)]
    if out_path is not None:
        write_records(out_path, records)
    if records and all(r.finish == "error" for r in records):
        raise RemoteBatchError(
            f"all {len(records)} requests failed; last reason: "
            f"{records[-1].meta.get('error', 'unknown')}"
        )
    return records
