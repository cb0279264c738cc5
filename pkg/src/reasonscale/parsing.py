"""Parsing and grading of model outputs.

Raw completions are split into a reasoning segment (between the first
think-open marker and the first subsequent think-close marker) and an
answer segment (everything after the close marker). Final answers are
pulled from the answer segment, preferring explicit \\boxed{...} markers,
then labeled "Q1:"/"Q2:" lines, then bare numeric tokens. Grading
canonicalizes both sides so formatting noise (case, whitespace, leading
zeros, a leading plus sign) never decides correctness.
"""

from __future__ import annotations

import math
import re

THINK_OPEN = "<think>"
THINK_CLOSE = "</think>"

FINISH_COMPLETE = "complete"
FINISH_TRUNCATED = "truncated"
FINISH_ERROR = "error"


def split_reasoning(
    raw: str,
    open_marker: str = THINK_OPEN,
    close_marker: str = THINK_CLOSE,
) -> tuple[str, str, str]:
    """Split raw output into (reasoning, answer, finish).

    No open marker: the whole text is answer. An open marker with no
    close marker means the model never finished thinking, so the
    remainder is reasoning and the sample is flagged truncated. Segments
    are returned verbatim; together with the consumed markers they
    reassemble the input exactly.
    """
    start = raw.find(open_marker)
    if start == -1:
        return "", raw, FINISH_COMPLETE
    body_start = start + len(open_marker)
    end = raw.find(close_marker, body_start)
    if end == -1:
        return raw[body_start:], "", FINISH_TRUNCATED
    return raw[body_start:end], raw[end + len(close_marker):], FINISH_COMPLETE


def count_tokens(text: str, mode: str = "whitespace") -> int:
    """Approximate token count when the server does not report one.

    whitespace: runs of non-whitespace characters. bytes_div4: UTF-8
    byte length divided by 4, rounded up. Server-reported counts always
    take precedence over either mode.
    """
    if mode == "whitespace":
        return len(text.split())
    if mode == "bytes_div4":
        return math.ceil(len(text.encode("utf-8")) / 4)
    raise ValueError(f"unknown token counting mode: {mode!r}")


def find_boxed(text: str) -> list[str]:
    """All \\boxed{...} payloads in order, with nested braces balanced."""
    out = []
    pos = 0
    marker = "\\boxed{"
    while True:
        start = text.find(marker, pos)
        if start == -1:
            return out
        depth = 1
        i = start + len(marker)
        while i < len(text) and depth > 0:
            if text[i] == "{":
                depth += 1
            elif text[i] == "}":
                depth -= 1
            i += 1
        if depth == 0:
            out.append(text[start + len(marker):i - 1])
            pos = i
        else:
            return out


_NUMERIC_TOKEN = re.compile(r"[+-]?\d+(?:\.\d+)?(?:/\d+)?")


def _labeled_answer(text: str, slot: int) -> str | None:
    """Answer from the last 'Q<slot>:' line, if any."""
    matches = list(re.finditer(rf"(?im)^\s*Q{slot}\s*[:.)]\s*(.+)$", text))
    if not matches:
        return None
    content = matches[-1].group(1).strip()
    boxed = find_boxed(content)
    if boxed:
        return boxed[-1]
    return content.rstrip(".").strip()


def extract_answers(text: str, n_expected: int) -> list[str]:
    """Extract exactly n_expected answer strings from an answer segment.

    Resolution order: boxed markers when at least n_expected are present
    (final ones win, in order); otherwise labeled Q1:/Q2: lines per slot;
    otherwise the trailing bare numeric tokens. Slots that stay
    unresolved come back as empty strings, never as raised errors.
    """
    if n_expected not in (1, 2):
        raise ValueError(f"n_expected must be 1 or 2, got {n_expected}")
    boxed = find_boxed(text)
    if len(boxed) >= n_expected:
        return boxed[-n_expected:]
    slots: list[str | None] = [None] * n_expected
    for i in range(n_expected):
        slots[i] = _labeled_answer(text, i + 1)
    if any(s is None for s in slots):
        numeric = _NUMERIC_TOKEN.findall(text)
        open_slots = [i for i, s in enumerate(slots) if s is None]
        tail = numeric[-len(open_slots):] if numeric else []
        for slot_idx, value in zip(open_slots[len(open_slots) - len(tail):], tail):
            slots[slot_idx] = value
    return [s if s is not None else "" for s in slots]


_INTEGER = re.compile(r"[+-]?\d+")


def canonicalize_answer(answer: str) -> str:
    """Canonical comparison form: trimmed, lowercased, single-spaced;
    integers lose leading zeros and a leading plus sign; any other
    answer loses at most one leading plus sign."""
    s = re.sub(r"\s+", " ", answer.strip()).lower()
    if _INTEGER.fullmatch(s):
        return str(int(s))
    if s.startswith("+"):
        s = s[1:]
    return s


def grade(extracted: list[str], gold: list[str]) -> bool:
    """Slotwise exact match after canonicalization; every slot must match."""
    if len(extracted) != len(gold):
        raise ValueError(
            f"extracted {len(extracted)} answers but gold has {len(gold)} slots"
        )
    return all(
        canonicalize_answer(e) == canonicalize_answer(g)
        for e, g in zip(extracted, gold)
    )
