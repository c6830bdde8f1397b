"""
Sweeping the interaction radius
===============================

Any WorldConfig field can be varied. Here the proximity radius goes from
very short to most of the world while sociability and curiosity stay on.
"""

from scrumsim import SweepDesign, WorldConfig, aggregate_median, execute_sweep

radii = [2, 5, 10, 19]
design = SweepDesign(
    base=WorldConfig(sociable=True, curious=True),
    variations={"proximity": radii},
    repetitions=10,
    master_seed=1,
)
rows = execute_sweep(design, worker_count=1)

for r in radii:
    cell = [row for row in rows if row.config.proximity == r]
    print(
        f"proximity {r:4.1f}: median solved {aggregate_median(cell, 'solved'):5.1f}, "
        f"median velocity {aggregate_median(cell, 'velocity'):5.2f}"
    )
