"""Agent-based simulation of competence propagation in Agile Scrum teams.

Developers wander a bounded square, claim user stories, recruit team
mates and try to solve stories whose difficulty exceeds what a lead can
manage alone. Sociable and curious developers combine team competence
linearly or non-linearly; competence and attitude adapt after every
attempt.
"""

from .config import ConfigError, WorldConfig, dump_config, load_config
from .engine import World, run, run_world, setup, step
from .kernels import (
    CombinationMode,
    combine_linear,
    combine_nonlinear,
    select_mode,
)
from .metrics import RunResult, aggregate_median, read_csv, write_csv
from .model import PopulationStats, Seniority, SosdBand, sample_population
from .sweep import (
    SweepDesign,
    execute_sweep,
    expand_design,
    render_report,
    scenario_design,
    scenario_report,
)

__version__ = "0.1.0"
