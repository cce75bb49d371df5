"""Edit datasets: JSONL/CSV I/O and a seeded edit-effort simulator."""
from __future__ import annotations

import csv
import json
import logging
import math
import string
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence, Union

import numpy as np

log = logging.getLogger(__name__)

SCENARIOS = ("normal", "similar", "fast", "human")
EDIT_SCENARIOS = ("normal", "similar", "fast")

PathLike = Union[str, Path]


class DatasetError(ValueError):
    """Malformed or inconsistent dataset content."""

    def __init__(self, message: str, problems: Sequence["LineError"] = ()):
        super().__init__(message)
        self.problems = list(problems)


@dataclass(frozen=True)
class EditRecord:
    id: str
    source: str
    target: str
    context: Optional[str] = None
    edit_time_s: Optional[float] = None
    keystrokes: Optional[int] = None
    annotator: Optional[str] = None
    scenario: Optional[str] = None

    def __post_init__(self) -> None:
        if not isinstance(self.id, str) or not self.id:
            raise DatasetError("id must be a nonempty string")
        for name in ("source", "target"):
            if not isinstance(getattr(self, name), str):
                raise DatasetError(f"{name} must be a string")
        for name in ("context", "annotator"):
            value = getattr(self, name)
            if value is not None and not isinstance(value, str):
                raise DatasetError(f"{name} must be a string or null")
        t = self.edit_time_s
        if t is not None:
            if isinstance(t, bool) or not isinstance(t, (int, float)) or not math.isfinite(t) or t < 0:
                raise DatasetError("edit_time_s must be a non-negative number")
            object.__setattr__(self, "edit_time_s", float(t))
        k = self.keystrokes
        if k is not None:
            if isinstance(k, float) and k.is_integer():
                k = int(k)
            if isinstance(k, bool) or not isinstance(k, int) or k < 0:
                raise DatasetError("keystrokes must be a non-negative integer")
            object.__setattr__(self, "keystrokes", k)
        if self.scenario is not None and self.scenario not in SCENARIOS:
            raise DatasetError(f"scenario must be one of {SCENARIOS}, got {self.scenario!r}")


FIELD_NAMES = tuple(f.name for f in fields(EditRecord))
REQUIRED_FIELDS = ("id", "source", "target")


@dataclass(frozen=True)
class LineError:
    line: int
    message: str


@dataclass
class LoadReport:
    records: list[EditRecord] = field(default_factory=list)
    errors: list[LineError] = field(default_factory=list)
    unknown_fields: int = 0


def record_from_dict(obj: Any) -> EditRecord:
    if not isinstance(obj, dict):
        raise DatasetError("expected a JSON object")
    missing = [k for k in REQUIRED_FIELDS if k not in obj]
    if missing:
        raise DatasetError(f"missing required field(s): {', '.join(missing)}")
    return EditRecord(**{k: obj.get(k) for k in FIELD_NAMES})


def read_jsonl(path: PathLike) -> LoadReport:
    """Parse every line, collecting malformed ones instead of stopping."""
    report = LoadReport()
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                record = record_from_dict(obj)
            except (json.JSONDecodeError, DatasetError, TypeError) as exc:
                report.errors.append(LineError(lineno, str(exc)))
                continue
            if record.id in seen:
                raise DatasetError(f"duplicate id {record.id!r} at line {lineno}")
            seen.add(record.id)
            report.unknown_fields += sum(1 for k in obj if k not in FIELD_NAMES)
            report.records.append(record)
    return report


def load_jsonl(path: PathLike) -> list[EditRecord]:
    """Load records in file order; raise ``DatasetError`` listing malformed lines."""
    report = read_jsonl(path)
    if report.unknown_fields:
        log.warning("%s: ignored %d unknown field(s)", path, report.unknown_fields)
    if report.errors:
        detail = "; ".join(f"line {e.line}: {e.message}" for e in report.errors[:10])
        raise DatasetError(f"{path}: {len(report.errors)} malformed line(s): {detail}", report.errors)
    return report.records


def write_jsonl(records: Iterable[EditRecord], path: PathLike) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for record in records:
                fh.write(json.dumps(asdict(record), ensure_ascii=False) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def write_rows_csv(rows: Sequence[dict], path: PathLike, columns: Sequence[str]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(columns), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({c: "" if row.get(c) is None else row.get(c) for c in columns})


def read_csv(path: PathLike) -> list[dict[str, str]]:
    """Read any CSV written by this package into a list of string dicts."""
    with open(path, encoding="utf-8", newline="") as fh:
        return list(csv.DictReader(fh))


def write_csv(records: Iterable[EditRecord], path: PathLike) -> None:
    write_rows_csv([asdict(r) for r in records], path, FIELD_NAMES)


def records_from_csv(path: PathLike) -> list[EditRecord]:
    out = []
    for row in read_csv(path):
        obj: dict[str, Any] = {k: (v if v != "" else None) for k, v in row.items()}
        obj["source"] = row.get("source", "")
        obj["target"] = row.get("target", "")
        if obj.get("edit_time_s") is not None:
            obj["edit_time_s"] = float(obj["edit_time_s"])
        if obj.get("keystrokes") is not None:
            obj["keystrokes"] = int(obj["keystrokes"])
        out.append(record_from_dict(obj))
    return out


# --- synthetic effort data -------------------------------------------------

OP_KINDS = ("char", "move", "duplicate", "delete")
OP_WEIGHTS = (0.40, 0.30, 0.15, 0.15)
EFFORT_PER_OP = 1.0
MAX_OPS = 20
_LETTERS = np.array(list(string.ascii_lowercase))


def _random_text(rng: np.random.Generator, vocab: Sequence[str]) -> str:
    n_words = int(rng.integers(80, 200))
    return " ".join(vocab[i] for i in rng.integers(0, len(vocab), n_words))


def _block(rng: np.random.Generator, n: int, lo: int, hi: int) -> tuple[int, int]:
    length = int(rng.integers(lo, min(hi, n // 2) + 1))
    start = int(rng.integers(0, n - length + 1))
    return start, length


def apply_edit(rng: np.random.Generator, text: str, kind: str) -> str:
    """One scripted edit: a character edit, block move, duplication or deletion."""
    n = len(text)
    if kind == "char":
        pos = int(rng.integers(0, n))
        action = int(rng.integers(0, 3))
        letter = str(rng.choice(_LETTERS))
        if action == 0:
            return text[:pos] + letter + text[pos + 1 :]
        if action == 1:
            return text[:pos] + letter + text[pos:]
        return text[:pos] + text[pos + 1 :]
    if kind == "move":
        start, length = _block(rng, n, 10, 60)
        block = text[start : start + length]
        rest = text[:start] + text[start + length :]
        dest = int(rng.integers(0, len(rest) + 1))
        return rest[:dest] + block + rest[dest:]
    if kind == "duplicate":
        start, length = _block(rng, n, 10, 60)
        dest = int(rng.integers(0, n + 1))
        return text[:dest] + text[start : start + length] + text[dest:]
    if kind == "delete":
        start, length = _block(rng, n, 5, 40)
        return text[:start] + text[start + length :]
    raise ValueError(f"unknown edit kind {kind!r}")


def simulate_effort_dataset(n: int = 200, noise_sigma: float = 0.5, seed: int = 42) -> list[EditRecord]:
    """Random texts edited by seeded edit scripts, timed at one second per edit.

    ``edit_time_s = ops + N(0, noise_sigma)``, clipped at zero.
    """
    if n < 10:
        raise ValueError("n must be at least 10")
    if noise_sigma < 0:
        raise ValueError("noise_sigma must be non-negative")
    rng = np.random.default_rng(seed)
    vocab = [
        "".join(rng.choice(_LETTERS, int(rng.integers(2, 10)))) for _ in range(3000)
    ]
    records = []
    for i in range(n):
        source = _random_text(rng, vocab)
        ops = int(rng.integers(1, MAX_OPS + 1))
        target = source
        for kind in rng.choice(OP_KINDS, size=ops, p=OP_WEIGHTS):
            target = apply_edit(rng, target, str(kind))
        noise = float(rng.normal(0.0, noise_sigma)) if noise_sigma > 0 else 0.0
        records.append(
            EditRecord(
                id=f"sim-{i:04d}",
                source=source,
                target=target,
                edit_time_s=max(0.0, EFFORT_PER_OP * ops + noise),
            )
        )
    return records
