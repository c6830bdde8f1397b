"""Agents, population statistics and sampling of the initial world."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .config import ConfigError, WorldConfig

__all__ = [
    "Seniority",
    "SosdBand",
    "StoryStatus",
    "DeveloperState",
    "StoryState",
    "PopulationStats",
    "sample_population",
    "sample_nonnegative",
    "classify_sociability",
    "classify_seniority",
    "is_high_enquiry",
    "make_rng",
]

MAX_RESAMPLE = 100


class Seniority(enum.Enum):
    SENIOR = "senior"
    MID = "mid"
    JUNIOR = "junior"


CLASSES = (Seniority.SENIOR, Seniority.MID, Seniority.JUNIOR)


class SosdBand(enum.Enum):
    LOW = "low"
    MID = "mid"
    HIGH = "high"


class StoryStatus(enum.Enum):
    OPEN = "open"
    DONE = "done"


@dataclass(slots=True)
class DeveloperState:
    id: int
    x: float
    y: float
    heading: float
    c: float
    c_initial: float
    sosd: float
    e: float
    seniority: Seniority = Seniority.MID
    team: Optional[int] = None
    stories_completed: int = 0

    @property
    def pos(self) -> Tuple[float, float]:
        return (self.x, self.y)


@dataclass(slots=True)
class StoryState:
    id: int
    x: float
    y: float
    d: float
    status: StoryStatus = StoryStatus.OPEN
    team: List[int] = field(default_factory=list)
    solved_at_tick: Optional[int] = None

    @property
    def pos(self) -> Tuple[float, float]:
        return (self.x, self.y)

    @property
    def is_open(self) -> bool:
        return self.status is StoryStatus.OPEN


@dataclass(frozen=True)
class PopulationStats:
    mean_c: float
    stdev_c: float
    mean_sosd: float
    stdev_sosd: float
    mean_e: float
    stdev_e: float

    @classmethod
    def from_values(cls, c, sosd, e) -> "PopulationStats":
        return cls(*_mean_sd(c), *_mean_sd(sosd), *_mean_sd(e))


def _mean_sd(values) -> Tuple[float, float]:
    # sample standard deviation (n - 1); a single value has spread 0
    a = np.asarray(values, dtype=float)
    if a.size == 0:
        return 0.0, 0.0
    sd = float(a.std(ddof=1)) if a.size > 1 else 0.0
    return float(a.mean()), sd


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def sample_nonnegative(
    rng: np.random.Generator, mean: float, sd: float, n: int
) -> np.ndarray:
    """Draw ``n`` normals, redrawing negatives up to 100 times before clamping to 0."""
    out = rng.normal(mean, sd, n) if n else np.empty(0)
    for _ in range(MAX_RESAMPLE):
        bad = np.flatnonzero(out < 0)
        if bad.size == 0:
            break
        out[bad] = rng.normal(mean, sd, bad.size)
    np.maximum(out, 0.0, out=out)
    return out


def _check_distribution(config: WorldConfig) -> None:
    if config.n_developers < 1:
        raise ConfigError("at least one developer is required")
    for name in (
        "mean_difficulty", "stdev_difficulty", "mean_competence", "stdev_competence",
        "mean_sosd", "stdev_sosd", "mean_enquiry", "stdev_enquiry", "world_half_extent",
    ):
        v = getattr(config, name)
        if not math.isfinite(v):
            raise ConfigError(f"{name} must be finite")


def sample_stories(
    config: WorldConfig, rng: np.random.Generator, n: int, first_id: int = 0
) -> List[StoryState]:
    h = config.world_half_extent
    xy = rng.uniform(-h, h, (n, 2)) if n else np.empty((0, 2))
    d = sample_nonnegative(rng, config.mean_difficulty, config.stdev_difficulty, n)
    return [
        StoryState(id=first_id + i, x=float(xy[i, 0]), y=float(xy[i, 1]), d=float(d[i]))
        for i in range(n)
    ]


def sample_population(
    config: WorldConfig, rng: np.random.Generator
) -> Tuple[List[DeveloperState], List[StoryState], PopulationStats]:
    """Draw developers and stories for a fresh world.

    Draw order is fixed: developer positions, headings, competence,
    sociability, enquiry, then story positions and difficulty. Changing it
    changes every seeded result.
    """
    _check_distribution(config)
    n = config.n_developers
    h = config.world_half_extent

    xy = rng.uniform(-h, h, (n, 2))
    heading = rng.uniform(0.0, 360.0, n)
    c = sample_nonnegative(rng, config.mean_competence, config.stdev_competence, n)
    sosd = rng.normal(config.mean_sosd, config.stdev_sosd, n)
    e = rng.normal(config.mean_enquiry, config.stdev_enquiry, n)
    stats = PopulationStats.from_values(c, sosd, e)

    developers = []
    for i in range(n):
        ci = float(c[i])
        developers.append(
            DeveloperState(
                id=i,
                x=float(xy[i, 0]),
                y=float(xy[i, 1]),
                heading=float(heading[i]) % 360.0,
                c=ci,
                c_initial=ci,
                sosd=float(sosd[i]),
                e=float(e[i]),
                seniority=classify_seniority(ci, stats, config.band_k),
            )
        )
    stories = sample_stories(config, rng, config.n_stories)
    return developers, stories, stats


def _band(value: float, mean: float, sd: float, k: float) -> int:
    if value > mean + k * sd:
        return 1
    if value < mean - k * sd:
        return -1
    return 0


def classify_sociability(sosd: float, stats: PopulationStats, band_k: float) -> SosdBand:
    b = _band(sosd, stats.mean_sosd, stats.stdev_sosd, band_k)
    return SosdBand.HIGH if b > 0 else SosdBand.LOW if b < 0 else SosdBand.MID


def classify_seniority(c: float, stats: PopulationStats, band_k: float) -> Seniority:
    b = _band(c, stats.mean_c, stats.stdev_c, band_k)
    return Seniority.SENIOR if b > 0 else Seniority.JUNIOR if b < 0 else Seniority.MID


def is_high_enquiry(e: float, stats: PopulationStats) -> bool:
    return e > stats.mean_e
