"""Per-run metrics, cross-run medians and the results CSV."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence, TextIO, Tuple, Union

import numpy as np

from .config import FIELD_NAMES, WorldConfig, coerce_field, format_value, parse_value
from .model import CLASSES, DeveloperState, Seniority, StoryStatus

__all__ = [
    "AggregationError",
    "RunResult",
    "ClassSummary",
    "velocity",
    "per_class_stats",
    "collect",
    "aggregate_median",
    "CSV_COLUMNS",
    "write_csv",
    "read_csv",
    "to_csv_text",
]

NA = math.nan


class AggregationError(ValueError):
    pass


@dataclass
class RunResult:
    run_id: int
    seed: int
    sociable: bool
    curious: bool
    solved: int
    ticks: int
    velocity: float
    solved_by_class: Dict[Seniority, int]
    gain_abs: Dict[Seniority, float]
    gain_rel: Dict[Seniority, float]
    attachments: Dict[Tuple[Seniority, Seniority], int]
    config: WorldConfig = field(default_factory=WorldConfig)


@dataclass(frozen=True)
class ClassSummary:
    solved_by_class: Dict[Seniority, int]
    gain_by_class: Dict[Seniority, float]
    gain_rel_by_class: Dict[Seniority, float]
    most_solved: Seniority
    most_solved_tied: bool
    most_gain: Optional[Seniority]
    most_gain_tied: bool


def velocity(solved: int, ticks_elapsed: int) -> float:
    if ticks_elapsed < 1:
        raise ValueError("ticks_elapsed must be >= 1")
    return solved / ticks_elapsed


def _median_or_na(values: Sequence[float]) -> float:
    return float(np.median(values)) if len(values) else NA


def _argmax(values: Dict[Seniority, float]) -> Tuple[Optional[Seniority], bool]:
    # CLASSES is ordered Senior, Mid, Junior, so the first maximum wins ties
    best, best_v, tied = None, -math.inf, False
    for cls in CLASSES:
        v = values[cls]
        if math.isnan(v):
            continue
        if v > best_v:
            best, best_v, tied = cls, v, False
        elif v == best_v:
            tied = True
    return best, tied


def per_class_stats(
    developers: Iterable[DeveloperState], solved_by_class: Dict[Seniority, int]
) -> ClassSummary:
    """Gains per seniority class and the classes leading each measure.

    ``developers`` carry both final competence ``c`` and the frozen
    ``c_initial``. Absolute gain is ``c - c_initial``; relative gain divides
    by ``c_initial`` and skips developers that started at zero. Classes with
    no members report NaN and never lead.
    """
    gains: Dict[Seniority, List[float]] = {c: [] for c in CLASSES}
    rel: Dict[Seniority, List[float]] = {c: [] for c in CLASSES}
    for d in developers:
        gains[d.seniority].append(d.c - d.c_initial)
        if d.c_initial > 0:
            rel[d.seniority].append((d.c - d.c_initial) / d.c_initial)
    gain_abs = {c: _median_or_na(gains[c]) for c in CLASSES}
    gain_rel = {c: _median_or_na(rel[c]) for c in CLASSES}
    solved = {c: int(solved_by_class.get(c, 0)) for c in CLASSES}
    top_solved, solved_tied = _argmax({c: float(v) for c, v in solved.items()})
    top_gain, gain_tied = _argmax(gain_abs)
    return ClassSummary(solved, gain_abs, gain_rel, top_solved, solved_tied, top_gain, gain_tied)


def collect(world, run_id: int = 0) -> RunResult:
    """Build the metrics row for a finished world."""
    solved_by_class = {c: 0 for c in CLASSES}
    for d in world.developers:
        solved_by_class[d.seniority] += d.stories_completed
    solved = sum(1 for s in world.stories if s.status is StoryStatus.DONE)
    summary = per_class_stats(world.developers, solved_by_class)
    ticks = max(world.tick, 1)
    cfg = world.config
    return RunResult(
        run_id=run_id,
        seed=cfg.seed,
        sociable=cfg.sociable,
        curious=cfg.curious,
        solved=solved,
        ticks=ticks,
        velocity=velocity(solved, ticks),
        solved_by_class=summary.solved_by_class,
        gain_abs=summary.gain_by_class,
        gain_rel=summary.gain_rel_by_class,
        attachments={(a, b): int(world.attachments.get((a, b), 0)) for a in CLASSES for b in CLASSES},
        config=cfg,
    )


Selector = Union[str, Callable[[RunResult], float]]


def _select(row, selector: Selector) -> float:
    if callable(selector):
        return float(selector(row))
    if isinstance(row, dict):
        return float(row[selector])
    return float(flatten(row)[selector])


def aggregate_median(rows: Sequence, selector: Selector = "velocity") -> float:
    """Median of one field over ``rows``; an even count averages the central pair.

    ``selector`` is a CSV column name or a callable. Rows may be RunResults,
    flat dicts, or plain numbers (with ``selector=None``).
    """
    if len(rows) == 0:
        raise AggregationError("cannot aggregate an empty set of rows")
    if selector is None:
        values = sorted(float(r) for r in rows)
    else:
        values = sorted(_select(r, selector) for r in rows)
    n = len(values)
    mid = n // 2
    if n % 2:
        return values[mid]
    return (values[mid - 1] + values[mid]) / 2.0


_CLS = {Seniority.SENIOR: "senior", Seniority.MID: "mid", Seniority.JUNIOR: "junior"}
_CLS_BY_NAME = {v: k for k, v in _CLS.items()}

_ECHO = tuple(n for n in FIELD_NAMES if n not in ("seed", "sociable", "curious"))

CSV_COLUMNS: Tuple[str, ...] = (
    ("run_id", "seed", "sociable", "curious", "solved", "ticks", "velocity")
    + tuple(f"solved_{_CLS[c]}" for c in CLASSES)
    + tuple(f"gain_abs_{_CLS[c]}" for c in CLASSES)
    + tuple(f"gain_rel_{_CLS[c]}" for c in CLASSES)
    + tuple(f"attach_{_CLS[a]}_{_CLS[b]}" for a in CLASSES for b in CLASSES)
    + _ECHO
)


def flatten(row: RunResult) -> Dict[str, object]:
    out: Dict[str, object] = {
        "run_id": row.run_id,
        "seed": row.seed,
        "sociable": row.sociable,
        "curious": row.curious,
        "solved": row.solved,
        "ticks": row.ticks,
        "velocity": row.velocity,
    }
    for c in CLASSES:
        out[f"solved_{_CLS[c]}"] = row.solved_by_class[c]
    for c in CLASSES:
        out[f"gain_abs_{_CLS[c]}"] = row.gain_abs[c]
    for c in CLASSES:
        out[f"gain_rel_{_CLS[c]}"] = row.gain_rel[c]
    for a in CLASSES:
        for b in CLASSES:
            out[f"attach_{_CLS[a]}_{_CLS[b]}"] = row.attachments[(a, b)]
    for name in _ECHO:
        out[name] = getattr(row.config, name)
    return out


def _fmt(value) -> str:
    if isinstance(value, float):
        return "NA" if math.isnan(value) else repr(value)
    return format_value(value)


def _parse_bool(s: str) -> bool:
    low = s.strip().lower()
    if low not in ("true", "false"):
        raise ValueError(f"expected true/false, got {s!r}")
    return low == "true"


def _parse_float(s: str) -> float:
    return NA if s.strip() == "NA" else float(s)


def write_csv(rows: Iterable[RunResult], out: TextIO) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        flat = flatten(row)
        writer.writerow([_fmt(flat[c]) for c in CSV_COLUMNS])


def to_csv_text(rows: Iterable[RunResult]) -> str:
    buf = io.StringIO()
    write_csv(rows, buf)
    return buf.getvalue()


def _from_flat(rec: Dict[str, str]) -> RunResult:
    echo = {name: coerce_field(name, parse_value(rec[name])) for name in _ECHO}
    seed = int(rec["seed"])
    sociable = _parse_bool(rec["sociable"])
    curious = _parse_bool(rec["curious"])
    config = WorldConfig(**echo, seed=seed, sociable=sociable, curious=curious)
    return RunResult(
        run_id=int(rec["run_id"]),
        seed=seed,
        sociable=sociable,
        curious=curious,
        solved=int(rec["solved"]),
        ticks=int(rec["ticks"]),
        velocity=_parse_float(rec["velocity"]),
        solved_by_class={c: int(rec[f"solved_{_CLS[c]}"]) for c in CLASSES},
        gain_abs={c: _parse_float(rec[f"gain_abs_{_CLS[c]}"]) for c in CLASSES},
        gain_rel={c: _parse_float(rec[f"gain_rel_{_CLS[c]}"]) for c in CLASSES},
        attachments={
            (a, b): int(rec[f"attach_{_CLS[a]}_{_CLS[b]}"]) for a in CLASSES for b in CLASSES
        },
        config=config,
    )


def read_csv(source: TextIO) -> List[RunResult]:
    """Parse a results CSV written by :func:`write_csv`.

    Raises ``ValueError`` on a missing or mismatched header or a malformed row.
    """
    reader = csv.reader(source)
    try:
        header = next(reader)
    except StopIteration:
        raise ValueError("no rows") from None
    if tuple(header) != CSV_COLUMNS:
        missing = [c for c in CSV_COLUMNS if c not in header]
        raise ValueError(f"unexpected CSV header (missing: {', '.join(missing) or 'none'})")
    rows = []
    for lineno, values in enumerate(reader, start=2):
        if not values:
            continue
        if len(values) != len(header):
            raise ValueError(f"line {lineno}: expected {len(header)} fields, got {len(values)}")
        try:
            rows.append(_from_flat(dict(zip(header, values))))
        except (KeyError, ValueError) as exc:
            raise ValueError(f"line {lineno}: {exc}") from exc
    return rows
