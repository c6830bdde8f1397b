import math

import numpy as np
import pytest

from scrumsim import engine
from scrumsim.config import WorldConfig
from scrumsim.engine import (
    SimulationError,
    attempt_all,
    claim_and_recruit,
    is_terminated,
    move_unattached,
    run,
    run_world,
    setup,
    spawn_stories,
    step,
)
from scrumsim.model import Seniority, StoryStatus

from helpers import attach, dev, story, world


def test_setup_table2():
    w = setup(WorldConfig())
    assert (len(w.developers), len(w.stories), w.tick) == (50, 100, 0)
    assert all(d.team is None for d in w.developers)
    assert all(not s.team and s.is_open for s in w.stories)
    assert w.event_log == []


def test_setup_no_stories_terminates_immediately():
    w = setup(WorldConfig(n_stories=0))
    assert is_terminated(w)
    r = run(WorldConfig(n_stories=0))
    assert (r.solved, r.ticks, r.velocity) == (0, 1, 0.0)


def test_setup_deterministic():
    a, b = setup(WorldConfig(seed=5)), setup(WorldConfig(seed=5))
    assert a.developers == b.developers and a.stories == b.stories and a.stats == b.stats


# movement


def test_attached_developers_do_not_move():
    devs = [dev(0, 1.0, 1.0), dev(1, -2.0, 3.0)]
    s = story(0)
    w = world(devs, [s])
    attach(w, s, *devs)
    move_unattached(w)
    assert [(d.x, d.y) for d in devs] == [(1.0, 1.0), (-2.0, 3.0)]


def test_free_developer_steps_one_unit():
    d = dev(0, 0.0, 0.0, heading=30.0)
    w = world([d], [])
    move_unattached(w)
    assert math.hypot(d.x, d.y) == pytest.approx(1.0, abs=1e-12)
    # heading turned by at most 45 degrees
    turn = (d.heading - 30.0 + 180.0) % 360.0 - 180.0
    assert abs(turn) <= 45.0
    assert math.degrees(math.atan2(d.x, d.y)) % 360.0 == pytest.approx(d.heading, abs=1e-9)


@pytest.mark.parametrize("heading", [0.0, 90.0, 180.0, 270.0, 45.0])
def test_wall_reflection_keeps_in_bounds(heading):
    h = 16.5
    rng = np.random.default_rng(1)
    d = dev(0, h - 0.2, h - 0.2, heading=heading)
    d2 = dev(1, -h + 0.1, -h + 0.1, heading=(heading + 180) % 360)
    w = world([d, d2], [])
    for _ in range(200):
        move_unattached(w)
        for a in (d, d2):
            assert -h <= a.x <= h and -h <= a.y <= h
            assert 0 <= a.heading < 360


def test_wrap_without_avoid_edges():
    d = dev(0, 16.4, 0.0, heading=90.0)
    w = world([d], [], avoid_edges=False)
    w.rng = np.random.default_rng(0)
    for _ in range(50):
        move_unattached(w)
        assert -16.5 <= d.x < 16.5 and -16.5 <= d.y < 16.5


# claiming and recruiting


def test_out_of_range_no_claim():
    d = dev(0, 0.0, 0.0)
    s = story(0, 20.0, 0.0)
    w = world([d], [s], proximity=19.0)
    claim_and_recruit(w)
    assert d.team is None and s.team == []


def test_boundary_distance_claims():
    d = dev(0, 0.0, 0.0)
    s = story(0, 3.0, 4.0)
    w = world([d], [s], proximity=5.0)
    claim_and_recruit(w)
    assert d.team == 0 and s.team == [0]


def test_claims_nearest():
    d = dev(0, 0.0, 0.0)
    far, near = story(0, 5.0, 0.0), story(1, 0.0, 3.0)
    w = world([d], [far, near])
    claim_and_recruit(w)
    assert d.team == 1 and near.team == [0] and far.team == []


def test_tie_prefers_lower_story_id():
    d = dev(0)
    a, b = story(0, 0.0, 2.0), story(1, 2.0, 0.0)
    w = world([d], [b, a][::-1])
    claim_and_recruit(w)
    assert d.team == 0


def test_two_developers_one_story_form_team():
    a, b = dev(0, 0.0, 0.0, seniority=Seniority.SENIOR), dev(1, 1.0, 0.0, seniority=Seniority.JUNIOR)
    s = story(0, 0.5, 0.5)
    w = world([a, b], [s])
    claim_and_recruit(w)
    assert len(s.team) == 2 and set(s.team) == {0, 1}
    assert a.team == b.team == 0
    lead = {0: a, 1: b}[s.team[0]]
    member = {0: a, 1: b}[s.team[1]]
    assert w.attachments[(lead.seniority, member.seniority)] == 1


def test_join_uses_developer_to_story_distance():
    lead = dev(0, 4.0, 0.0)
    near_lead, near_story = dev(1, 8.0, 0.0), dev(2, -4.0, 0.0)
    s = story(0, 0.0, 0.0)
    w = world([lead, near_lead, near_story], [s], proximity=5.0)
    attach(w, s, lead)
    claim_and_recruit(w)
    assert near_lead.team is None
    assert near_story.team == 0 and s.team == [0, 2]


def test_no_claims_when_not_looking():
    d = dev(0)
    s = story(0)
    w = world([d], [s], looking_for_stories=False)
    claim_and_recruit(w)
    assert d.team is None


def test_done_stories_not_claimed():
    d = dev(0)
    s = story(0)
    s.status = StoryStatus.DONE
    w = world([d], [s])
    claim_and_recruit(w)
    assert d.team is None


# attempts


def test_strong_lead_solves_solo():
    lead = dev(0, c=10.0)
    s = story(0, d=3.0)
    w = world([lead], [s])
    attach(w, s, lead)
    attempt_all(w)
    assert s.status is StoryStatus.DONE and s.team == [] and lead.team is None
    assert lead.stories_completed == 1
    assert lead.c == pytest.approx(10.0 * 1.13)


def test_curious_sociable_team_solves_nonlinearly():
    lead = dev(0, c=2.0, sosd=1.0, e=1.0)  # high band (>0.75), high enquiry (>0)
    member = dev(1, c=3.0, sosd=0.5)
    s = story(0, d=4.0)
    w = world([lead, member], [s], sociable=True, curious=True)
    attach(w, s, lead, member)
    attempt_all(w)
    assert s.status is StoryStatus.DONE
    assert lead.c == pytest.approx(2.26) and member.c == pytest.approx(3.39)
    assert lead.sosd == pytest.approx(1.13) and member.sosd == pytest.approx(0.565)


@pytest.mark.parametrize("persist", [False, True])
def test_same_team_without_sharing_fails(persist):
    lead = dev(0, c=2.0, sosd=1.0, e=1.0)
    member = dev(1, c=3.0, sosd=0.5)
    s = story(0, d=4.0)
    w = world([lead, member], [s], persist_failed_teams=persist)
    attach(w, s, lead, member)
    attempt_all(w)
    assert s.is_open and s.solved_at_tick is None
    assert lead.c == pytest.approx(2.0 * 0.36) and member.c == pytest.approx(3.0 * 0.36)
    assert w.member_reads == 0
    if persist:
        assert s.team == [0, 1] and lead.team == member.team == 0
    else:
        assert s.team == [] and lead.team is None and member.team is None


def test_linear_team():
    lead = dev(0, c=2.0, sosd=0.0)  # mid band
    member = dev(1, c=3.0, sosd=0.5)
    s = story(0, d=3.4)
    w = world([lead, member], [s], sociable=True)
    attach(w, s, lead, member)
    attempt_all(w)
    assert s.status is StoryStatus.DONE  # 2 + 1.5 = 3.5 > 3.4


# spawning


def test_spawn_disabled_by_default():
    w = setup(WorldConfig(seed=1))
    before = list(w.stories)
    spawn_stories(w)
    assert w.stories == before


def test_spawn_adds_floor_pso_each_tick():
    w = setup(WorldConfig(seed=1, pso=2.7, n_stories=5))
    for k in range(1, 4):
        spawn_stories(w)
        assert len(w.stories) == 5 + 2 * k
    assert [s.id for s in w.stories] == list(range(11))
    assert all(s.is_open and s.d >= 0 for s in w.stories[5:])


def test_spawn_four():
    w = setup(WorldConfig(seed=2, pso=4))
    spawn_stories(w)
    assert len(w.stories) == 104 and sum(s.is_open for s in w.stories[100:]) == 4


# stepping


def test_single_step_trace():
    cfg = WorldConfig(n_developers=1, n_stories=1, mean_competence=10, stdev_competence=0,
                      mean_difficulty=3, stdev_difficulty=0, proximity=100)
    w = setup(cfg)
    step(w)
    assert w.tick == 1 and w.n_done == 1
    assert w.stories[0].solved_at_tick == 0
    snap = w.event_log[0]
    assert (snap.tick, snap.stories_done, snap.solved_this_tick, snap.attempts_this_tick) == (0, 1, 1, 1)
    with pytest.raises(SimulationError):
        step(w)
    r = run(cfg)
    assert (r.solved, r.ticks, r.velocity) == (1, 1, 1.0)


def test_step_refused_after_max_ticks():
    w = setup(WorldConfig(steps=2))
    step(w)
    step(w)
    with pytest.raises(SimulationError):
        step(w)


def test_snapshot_sequence_deterministic():
    a, b = run_world(WorldConfig(seed=77)), run_world(WorldConfig(seed=77))
    assert a.event_log == b.event_log
    assert [(d.x, d.y, d.c, d.sosd) for d in a.developers] == [(d.x, d.y, d.c, d.sosd) for d in b.developers]


def test_run_ticks_bounded():
    for seed in range(5):
        r = run(WorldConfig(seed=seed))
        assert 1 <= r.ticks <= 10
        assert r.velocity == r.solved / r.ticks


def test_run_stops_when_all_done():
    cfg = WorldConfig(n_developers=5, n_stories=3, mean_competence=100, stdev_competence=0, proximity=100, steps=50)
    w = run_world(cfg)
    assert w.n_open == 0 and w.tick < 50
