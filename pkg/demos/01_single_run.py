"""
A single simulated sprint
=========================

Set up one world with the experiment constants, step it tick by tick and
watch the backlog shrink.
"""

from scrumsim import WorldConfig, setup, step
from scrumsim.engine import is_terminated
from scrumsim.metrics import collect

config = WorldConfig(sociable=True, curious=True, seed=42)
world = setup(config)
print(f"{len(world.developers)} developers, {len(world.stories)} stories")

# Seniority is fixed at setup from the initial competence bands.
counts = {}
for d in world.developers:
    counts[d.seniority.value] = counts.get(d.seniority.value, 0) + 1
print("seniority:", counts)

##############################################################################
# Each step moves free developers, forms teams, attempts stories and logs a
# snapshot.

while not is_terminated(world):
    step(world)
    snap = world.event_log[-1]
    print(
        f"tick {snap.tick:2d}: attempts={snap.attempts_this_tick:3d} "
        f"solved={snap.solved_this_tick:3d} open={snap.stories_open:3d}"
    )

##############################################################################
# The metrics row is what sweeps write to CSV.

row = collect(world)
print(f"solved {row.solved} in {row.ticks} ticks, velocity {row.velocity:.2f}")
print("solved by lead class:", {k.value: v for k, v in row.solved_by_class.items()})
