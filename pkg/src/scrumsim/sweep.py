"""Factorial parameter sweeps, replicated runs and the four-scenario report."""

from __future__ import annotations

import dataclasses
import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

from scipy.stats import mannwhitneyu

from .config import (
    FIELD_NAMES,
    ConfigError,
    WorldConfig,
    coerce_field,
    config_from_mapping,
    field_for_key,
    read_file,
)
from .engine import run
from .metrics import CSV_COLUMNS, RunResult, aggregate_median, flatten

__all__ = [
    "DesignError",
    "ReportError",
    "SweepError",
    "SweepDesign",
    "RunSpec",
    "ScenarioReport",
    "SCENARIOS",
    "mix_seed",
    "expand_design",
    "execute_sweep",
    "scenario_design",
    "load_design",
    "rank_sum_pvalue",
    "scenario_report",
    "render_report",
]

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15

# scenario label -> (sociable, curious)
SCENARIOS: Dict[str, Tuple[bool, bool]] = {
    "S1": (False, False),
    "S2": (True, False),
    "S3": (False, True),
    "S4": (True, True),
}
REPORT_PAIRS = (("S4", "S2"), ("S4", "S1"), ("S3", "S1"), ("S2", "S1"))


class DesignError(ValueError):
    pass


class ReportError(ValueError):
    pass


class SweepError(RuntimeError):
    def __init__(self, run_id: int, cause: Exception):
        super().__init__(f"run {run_id} failed: {cause}")
        self.run_id = run_id
        self.cause = cause


def mix_seed(master_seed: int, run_id: int) -> int:
    """SplitMix64 output for state ``master_seed + run_id * gamma`` (mod 2**64).

    ``mix_seed(s, 1)`` is the first output of a SplitMix64 generator seeded
    with ``s``, so published SplitMix64 vectors double as golden values.
    """
    z = (master_seed + run_id * GOLDEN_GAMMA) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


@dataclass
class SweepDesign:
    base: WorldConfig = field(default_factory=WorldConfig)
    variations: Dict[str, List[Any]] = field(default_factory=dict)
    repetitions: int = 30
    master_seed: int = 0

    def validate(self) -> None:
        if self.repetitions < 1:
            raise DesignError("repetitions must be >= 1")
        if not 0 <= self.master_seed <= MASK64:
            raise DesignError("master_seed must be an unsigned 64-bit integer")
        for name, values in self.variations.items():
            if name not in FIELD_NAMES:
                raise DesignError(f"unknown field in variations: {name!r}")
            if name == "seed":
                raise DesignError("seed cannot be varied; it is derived from master_seed")
            if not values:
                raise DesignError(f"variation {name!r} has no values")

    @property
    def total_runs(self) -> int:
        return math.prod(len(v) for v in self.variations.values()) * self.repetitions


@dataclass(frozen=True)
class RunSpec:
    run_id: int
    seed: int
    config: WorldConfig


def expand_design(design: SweepDesign) -> List[RunSpec]:
    """Enumerate every run of a design in a fixed order.

    The first varied field changes slowest and repetitions are innermost.
    Run ids start at 1 and each run's seed is ``mix_seed(master_seed, run_id)``.
    """
    design.validate()
    names = list(design.variations)
    grids = [[coerce_field(n, v) for v in design.variations[n]] for n in names]
    specs = []
    run_id = 0
    for combo in itertools.product(*grids):
        cell = dataclasses.replace(design.base, **dict(zip(names, combo)))
        for _ in range(design.repetitions):
            run_id += 1
            seed = mix_seed(design.master_seed, run_id)
            specs.append(RunSpec(run_id, seed, dataclasses.replace(cell, seed=seed)))
    return specs


def _execute(spec: RunSpec) -> RunResult:
    try:
        return run(spec.config, run_id=spec.run_id)
    except Exception as exc:  # re-raised with the run id attached
        raise SweepError(spec.run_id, exc) from exc


def execute_sweep(design: SweepDesign, worker_count: int = 1) -> List[RunResult]:
    """Run every spec of ``design``; the result order and values ignore ``worker_count``."""
    if worker_count < 1:
        raise ValueError("worker_count must be >= 1")
    specs = expand_design(design)
    if worker_count == 1 or len(specs) <= 1:
        results = [_execute(s) for s in specs]
    else:
        chunk = max(1, len(specs) // (worker_count * 4))
        with ProcessPoolExecutor(max_workers=worker_count) as pool:
            results = list(pool.map(_execute, specs, chunksize=chunk))
    return sorted(results, key=lambda r: r.run_id)


def scenario_design(
    base: WorldConfig = WorldConfig(), repetitions: int = 30, master_seed: int = 0
) -> SweepDesign:
    """The 2x2 sociable/curious design; cells enumerate in S1, S2, S3, S4 order."""
    return SweepDesign(
        base=base,
        variations={"curious": [False, True], "sociable": [False, True]},
        repetitions=repetitions,
        master_seed=master_seed,
    )


def load_design(path: Union[str, Path]) -> SweepDesign:
    """Read a sweep definition: config keys, ``repetitions``, ``master_seed`` and ``vary.<field>`` lists."""
    raw = read_file(path)
    base_keys: Dict[str, Any] = {}
    variations: Dict[str, List[Any]] = {}
    repetitions, master_seed = 30, 0
    for key, value in raw.items():
        if key == "repetitions":
            repetitions = _int(key, value)
        elif key == "master_seed":
            master_seed = _int(key, value)
        elif key.startswith("vary."):
            try:
                name = field_for_key(key[len("vary."):])
            except ConfigError as exc:
                raise DesignError(str(exc)) from None
            values = value if isinstance(value, list) else [value]
            variations[name] = values
        else:
            base_keys[key] = value
    design = SweepDesign(config_from_mapping(base_keys), variations, repetitions, master_seed)
    design.validate()
    return design


def _int(key: str, value: Any) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise DesignError(f"{key} must be an integer, got {value!r}")
    return value


def rank_sum_pvalue(x: Sequence[float], y: Sequence[float]) -> float:
    """Two-sided Mann-Whitney p-value; exact without ties, normal approximation otherwise."""
    x, y = list(map(float, x)), list(map(float, y))
    if len(set(x) | set(y)) == 1:
        return 1.0
    method = "exact" if len(set(x + y)) == len(x) + len(y) else "asymptotic"
    return float(mannwhitneyu(x, y, alternative="two-sided", method=method).pvalue)


@dataclass
class ScenarioReport:
    medians: Dict[str, Dict[str, float]]
    counts: Dict[str, int]
    pvalues: Dict[Tuple[str, str], float]
    ordering: str


def scenario_of(row) -> str:
    for label, flags in SCENARIOS.items():
        if (row.sociable, row.curious) == flags:
            return label
    raise ReportError("row has no scenario")  # unreachable for boolean flags


_METRIC_COLUMNS = tuple(
    c for c in CSV_COLUMNS[: CSV_COLUMNS.index("attach_junior_junior") + 1]
    if c not in ("run_id", "seed", "sociable", "curious")
)


def _ordering(values: Dict[str, float]) -> str:
    ranked = sorted(values, key=lambda k: (-values[k], k))
    parts = [ranked[0]]
    for prev, cur in zip(ranked, ranked[1:]):
        parts.append(("= " if values[cur] == values[prev] else "> ") + cur)
    return " ".join(parts)


def scenario_report(rows: Sequence[RunResult]) -> ScenarioReport:
    """Per-scenario medians of every metric, velocity rank-sum tests and an ordering line."""
    cells: Dict[str, List[RunResult]] = {k: [] for k in SCENARIOS}
    for r in rows:
        cells[scenario_of(r)].append(r)
    missing = [k for k, v in cells.items() if len(v) < 2]
    if missing:
        raise ReportError(f"scenario cells need at least 2 runs each; short: {', '.join(missing)}")

    medians: Dict[str, Dict[str, float]] = {}
    for label, cell in cells.items():
        flat = [flatten(r) for r in cell]
        medians[label] = {}
        for col in _METRIC_COLUMNS:
            vals = [float(f[col]) for f in flat if not math.isnan(float(f[col]))]
            medians[label][col] = aggregate_median(vals, None) if vals else math.nan
    pvalues = {
        (a, b): rank_sum_pvalue([r.velocity for r in cells[a]], [r.velocity for r in cells[b]])
        for a, b in REPORT_PAIRS
    }
    ordering = _ordering({k: medians[k]["velocity"] for k in SCENARIOS})
    return ScenarioReport(
        medians=medians,
        counts={k: len(v) for k, v in cells.items()},
        pvalues=pvalues,
        ordering=ordering,
    )


def _cell(value: float) -> str:
    if math.isnan(value):
        return "NA"
    if float(value).is_integer():
        return str(int(value))
    return f"{value:.3f}"


def render_report(report: ScenarioReport) -> str:
    labels = list(SCENARIOS)
    lines = ["Scenario medians", ""]
    head = f"{'metric':<22}" + "".join(f"{lab:>12}" for lab in labels)
    lines.append(head)
    flags = "".join(
        f"{('T' if s else 'F') + '/' + ('T' if c else 'F'):>12}" for s, c in SCENARIOS.values()
    )
    lines.append(f"{'sociable/curious':<22}" + flags)
    lines.append(f"{'runs':<22}" + "".join(f"{report.counts[lab]:>12}" for lab in labels))
    for col in _METRIC_COLUMNS:
        lines.append(
            f"{col:<22}" + "".join(f"{_cell(report.medians[lab][col]):>12}" for lab in labels)
        )
    lines += ["", "Velocity rank-sum tests (two-sided Mann-Whitney)"]
    for (a, b), p in report.pvalues.items():
        lines.append(f"  {a} vs {b}: p = {p:.4g}")
    lines += ["", f"Velocity ordering: {report.ordering}"]
    return "\n".join(lines) + "\n"
