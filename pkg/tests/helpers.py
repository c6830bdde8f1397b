import numpy as np

from scrumsim.config import WorldConfig
from scrumsim.engine import World
from scrumsim.model import DeveloperState, PopulationStats, Seniority, StoryState

UNIT_STATS = PopulationStats(mean_c=0.0, stdev_c=1.0, mean_sosd=0.0, stdev_sosd=1.0, mean_e=0.0, stdev_e=1.0)


def dev(id, x=0.0, y=0.0, c=1.0, sosd=0.0, e=0.0, heading=0.0, seniority=Seniority.MID):
    return DeveloperState(id=id, x=x, y=y, heading=heading, c=c, c_initial=c, sosd=sosd, e=e, seniority=seniority)


def story(id, x=0.0, y=0.0, d=1.0):
    return StoryState(id=id, x=x, y=y, d=d)


def world(developers, stories, stats=UNIT_STATS, seed=0, **cfg):
    config = WorldConfig(
        n_developers=max(1, len(developers)), n_stories=len(stories), seed=seed, **cfg
    )
    return World(config=config, developers=developers, stories=stories, stats=stats,
                 rng=np.random.default_rng(seed))


def attach(w, story_obj, *devs):
    for d in devs:
        story_obj.team.append(d.id)
        d.team = story_obj.id
