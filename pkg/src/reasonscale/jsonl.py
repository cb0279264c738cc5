"""JSONL reading and atomic writing helpers.

All writers in the toolkit go through ``write_jsonl_atomic`` /
``write_text_atomic`` so that partially written outputs are never
observable: content lands in a temp file in the destination directory
and is renamed into place.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path
from typing import Any, Callable, Iterable, Iterator

from .errors import IngestError


def dumps_canonical(obj: Any) -> str:
    """Serialize with sorted keys and no float munging.

    Sorted keys keep reruns byte-identical regardless of dict build order.
    """
    return json.dumps(obj, sort_keys=True, ensure_ascii=False)


def iter_jsonl(path: str | Path) -> Iterator[tuple[int, dict]]:
    """Yield (line_number, parsed object) pairs; line numbers are 1-based.

    Blank lines are skipped. Malformed JSON raises IngestError naming the line.
    """
    path = Path(path)
    with path.open("r", encoding="utf-8") as fh:
        for line_number, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped:
                continue
            try:
                obj = json.loads(stripped)
            except json.JSONDecodeError as exc:
                raise IngestError(
                    f"{path}: line {line_number}: invalid JSON: {exc}",
                    line_number=line_number,
                ) from exc
            if not isinstance(obj, dict):
                raise IngestError(
                    f"{path}: line {line_number}: expected a JSON object, "
                    f"got {type(obj).__name__}",
                    line_number=line_number,
                )
            yield line_number, obj


def read_jsonl(path: str | Path) -> list[dict]:
    return [obj for _, obj in iter_jsonl(path)]


def write_text_atomic(path: str | Path, text: str) -> None:
    """Write text via a temp file and rename, so readers never see partials."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise


def write_jsonl_atomic(
    path: str | Path,
    rows: Iterable[dict],
    to_obj: Callable[[Any], dict] | None = None,
) -> int:
    """Write one canonical JSON object per line; returns the row count."""
    lines = []
    for row in rows:
        obj = to_obj(row) if to_obj is not None else row
        lines.append(dumps_canonical(obj))
    body = "\n".join(lines)
    if body:
        body += "\n"
    write_text_atomic(path, body)
    return len(lines)
