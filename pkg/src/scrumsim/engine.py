"""Discrete-time scheduler.

One tick runs, in order: move free developers, claim stories and recruit
teams, attempt every claimed story, spawn new stories, record a snapshot.
A run stops when every story is done or ``steps`` ticks have elapsed.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np

from . import kernels
from .config import WorldConfig
from .kernels import CombinationMode
from .metrics import RunResult, collect
from .model import (
    CLASSES,
    DeveloperState,
    PopulationStats,
    Seniority,
    StoryState,
    StoryStatus,
    classify_sociability,
    is_high_enquiry,
    make_rng,
    sample_population,
    sample_stories,
)

__all__ = [
    "SimulationError",
    "TickSnapshot",
    "World",
    "setup",
    "move_unattached",
    "claim_and_recruit",
    "attempt_all",
    "spawn_stories",
    "step",
    "is_terminated",
    "run_world",
    "run",
]

MAX_TURN = 45.0


class SimulationError(RuntimeError):
    """Raised when the scheduler is driven outside its contract."""


@dataclass
class TickSnapshot:
    tick: int
    stories_open: int
    stories_done: int
    solved_this_tick: int
    attempts_this_tick: int
    solved_by_class: Dict[Seniority, int]
    mean_c_by_class: Dict[Seniority, float]


@dataclass
class World:
    config: WorldConfig
    developers: List[DeveloperState]
    stories: List[StoryState]
    stats: PopulationStats
    rng: np.random.Generator
    tick: int = 0
    event_log: List[TickSnapshot] = field(default_factory=list)
    attachments: Counter = field(default_factory=Counter)
    mode_counts: Counter = field(default_factory=Counter)
    # number of member competence values read by attempts; stays 0 without sharing
    member_reads: int = 0
    attempts_this_tick: int = 0
    solved_this_tick: Dict[Seniority, int] = field(default_factory=dict)

    @property
    def n_done(self) -> int:
        return sum(1 for s in self.stories if s.status is StoryStatus.DONE)

    @property
    def n_open(self) -> int:
        return len(self.stories) - self.n_done


def setup(config: WorldConfig) -> World:
    rng = make_rng(config.seed)
    developers, stories, stats = sample_population(config, rng)
    return World(config=config, developers=developers, stories=stories, stats=stats, rng=rng)


def _reflect(pos: float, h: float) -> Tuple[float, bool]:
    if pos > h:
        return 2 * h - pos, True
    if pos < -h:
        return -2 * h - pos, True
    return pos, False


def _wrap(pos: float, h: float) -> float:
    return (pos + h) % (2 * h) - h


def move_unattached(world: World) -> World:
    """Random walk for free developers: turn up to 45 degrees either way, step one unit.

    Headings follow the usual turtle convention (0 is north, clockwise).
    With ``avoid_edges`` a developer crossing a wall is mirrored back inside
    and its heading reflected; otherwise the world wraps.
    """
    h = world.config.world_half_extent
    free = [d for d in world.developers if d.team is None]
    if not free:
        return world
    turns = world.rng.uniform(-MAX_TURN, MAX_TURN, len(free))
    for dev, turn in zip(free, turns):
        heading = (dev.heading + float(turn)) % 360.0
        rad = math.radians(heading)
        x = dev.x + math.sin(rad)
        y = dev.y + math.cos(rad)
        if world.config.avoid_edges:
            x, flip_x = _reflect(x, h)
            y, flip_y = _reflect(y, h)
            if flip_x:
                heading = (-heading) % 360.0
            if flip_y:
                heading = (180.0 - heading) % 360.0
            # a unit step cannot overshoot twice unless the world is tiny
            x = min(max(x, -h), h)
            y = min(max(y, -h), h)
        else:
            x, y = _wrap(x, h), _wrap(y, h)
        dev.x, dev.y, dev.heading = x, y, heading
    return world


def _nearest(xs: np.ndarray, ys: np.ndarray, mask: np.ndarray, x: float, y: float, radius: float) -> int:
    """Index of the nearest masked point within ``radius`` (lowest index on ties), or -1."""
    if not mask.any():
        return -1
    dist = np.hypot(xs - x, ys - y)
    dist[~mask] = np.inf
    i = int(np.argmin(dist))
    return i if dist[i] <= radius else -1


def claim_and_recruit(world: World) -> World:
    """Free developers claim the nearest unclaimed open story, then the rest join teams.

    Claims happen one developer at a time in a shuffled order; joining
    happens afterwards, each remaining free developer attaching to the
    nearest claimed open story within ``proximity`` of itself.
    """
    cfg = world.config
    if not cfg.looking_for_stories or not world.stories:
        return world
    free = [d for d in world.developers if d.team is None]
    if not free:
        return world

    stories = world.stories
    xs = np.fromiter((s.x for s in stories), float, len(stories))
    ys = np.fromiter((s.y for s in stories), float, len(stories))
    open_ = np.fromiter((s.is_open for s in stories), bool, len(stories))
    claimed = np.fromiter((bool(s.team) for s in stories), bool, len(stories))

    order = world.rng.permutation(len(free))
    leftover = []
    for k in order:
        dev = free[int(k)]
        i = _nearest(xs, ys, open_ & ~claimed, dev.x, dev.y, cfg.proximity)
        if i < 0:
            leftover.append(dev)
            continue
        stories[i].team.append(dev.id)
        dev.team = stories[i].id
        claimed[i] = True

    by_id = {d.id: d for d in world.developers}
    joinable = open_ & claimed
    for dev in sorted(leftover, key=lambda d: d.id):
        i = _nearest(xs, ys, joinable, dev.x, dev.y, cfg.proximity)
        if i < 0:
            continue
        story = stories[i]
        lead = by_id[story.team[0]]
        story.team.append(dev.id)
        dev.team = story.id
        world.attachments[(lead.seniority, dev.seniority)] += 1
    return world


def attempt_all(world: World) -> World:
    """Every claimed open story is attempted once, in shuffled order.

    The lead tries alone first; only if that fails is the combination mode
    consulted. Every member's competence and sociability adapt to the
    outcome. Solved stories release their team; failed teams also disband
    unless ``persist_failed_teams`` is set.
    """
    cfg = world.config
    by_id = {d.id: d for d in world.developers}
    teams = [s for s in world.stories if s.is_open and s.team]
    solved_now: Dict[Seniority, int] = {c: 0 for c in CLASSES}
    attempts = 0
    for k in world.rng.permutation(len(teams)):
        story = teams[int(k)]
        members = [by_id[i] for i in story.team]
        lead = members[0]
        attempts += 1
        if kernels.attempt(lead.c, story.d):
            mode = CombinationMode.SOLO
            solved = True
        else:
            mode = kernels.select_mode(
                cfg.sociable,
                cfg.curious,
                classify_sociability(lead.sosd, world.stats, cfg.band_k),
                is_high_enquiry(lead.e, world.stats),
            )
            if mode is CombinationMode.SOLO:
                effective = lead.c
            else:
                others = [(m.sosd, m.c) for m in members[1:]]
                world.member_reads += len(others)
                effective = kernels.combine(
                    mode, lead.c, lead.sosd, others, cfg.exponent_cap, cfg.contribution_cap
                )
            solved = kernels.attempt(effective, story.d)
        world.mode_counts[mode] += 1

        for m in members:
            if solved:
                m.c = kernels.update_on_success(m.c, cfg.increase_comp_rate)
            else:
                m.c = kernels.update_on_failure(m.c, cfg.decrease_comp_rate)
            m.sosd = kernels.update_attitude(
                m.sosd, solved, cfg.increase_comp_rate, cfg.decrease_comp_rate
            )
        if solved:
            story.status = StoryStatus.DONE
            story.solved_at_tick = world.tick
            lead.stories_completed += 1
            solved_now[lead.seniority] += 1
        if solved or not cfg.persist_failed_teams:
            for m in members:
                m.team = None
            story.team = []

    world.attempts_this_tick = attempts
    world.solved_this_tick = solved_now
    return world


def spawn_stories(world: World) -> World:
    n = int(math.floor(world.config.pso))
    if n <= 0:
        return world
    world.stories.extend(sample_stories(world.config, world.rng, n, first_id=len(world.stories)))
    return world


def is_terminated(world: World) -> bool:
    return world.tick >= world.config.steps or world.n_open == 0


def _snapshot(world: World) -> TickSnapshot:
    mean_c = {}
    for cls in CLASSES:
        cs = [d.c for d in world.developers if d.seniority is cls]
        mean_c[cls] = float(np.mean(cs)) if cs else math.nan
    done = world.n_done
    return TickSnapshot(
        tick=world.tick,
        stories_open=len(world.stories) - done,
        stories_done=done,
        solved_this_tick=sum(world.solved_this_tick.values()),
        attempts_this_tick=world.attempts_this_tick,
        solved_by_class=dict(world.solved_this_tick),
        mean_c_by_class=mean_c,
    )


def step(world: World) -> World:
    if is_terminated(world):
        raise SimulationError(
            f"world is terminated at tick {world.tick} ({world.n_open} open stories)"
        )
    move_unattached(world)
    claim_and_recruit(world)
    attempt_all(world)
    spawn_stories(world)
    world.event_log.append(_snapshot(world))
    world.tick += 1
    return world


def run_world(config: WorldConfig) -> World:
    """Set up and step a world to termination, returning the final state."""
    world = setup(config)
    while not is_terminated(world):
        step(world)
    return world


def run(config: WorldConfig, run_id: int = 0) -> RunResult:
    """Run one simulation and return its metrics row."""
    return collect(run_world(config), run_id=run_id)
