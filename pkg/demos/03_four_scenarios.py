"""
The sociable / curious experiment
=================================

Four scenarios cross the two behavioural switches, 30 replications each,
and compare median team velocity.
"""

import io

from scrumsim import WorldConfig, execute_sweep, render_report, scenario_design, scenario_report
from scrumsim.metrics import write_csv

design = scenario_design(WorldConfig(), repetitions=30, master_seed=0)
rows = execute_sweep(design, worker_count=1)
print(f"{len(rows)} runs")

print(render_report(scenario_report(rows)))

##############################################################################
# The raw table is plot-ready CSV, one row per run.

buf = io.StringIO()
write_csv(rows[:3], buf)
print(buf.getvalue())
