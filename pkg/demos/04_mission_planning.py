"""The missionized environment: threat zones, stale perception, A* replanning.

Flies the default scene twice: once with a perfect picture of the enemy
order of battle and once with a displaced (stale) one, then renders the final
top-down frame of the stale run so the true (red) and perceived (blue)
circles are visible.
"""

import tempfile
from pathlib import Path

from tunnelsim.f16 import AircraftState
from tunnelsim.mission import MissionConfig, MissionEnv, astar_plan, \
    build_mission, build_plan_grid
from tunnelsim.render import render_mission_frame

# plan once, standalone, just to look at the route
world = build_mission(MissionConfig(perceived_offset=0.0), seed=3)
grid = build_plan_grid(world, extra_margin=1000.0)
path = astar_plan(grid, grid.cell_of(2000.0, 0.0),
                  grid.cell_of(*world.goal_center))
print(f"Planned {len(path.cells)} cells, cost {path.cost:.1f} "
      f"(grid {grid.shape[0]}x{grid.shape[1]} at {grid.resolution:.0f} ft)")


def fly(offset, seed):
    env = MissionEnv(MissionConfig(perceived_offset=offset))
    obs, info = env.reset(seed=seed)
    replans = 0
    trespass_steps = 0
    while True:
        obs, reward, term, trunc, info = env.step()
        replans += info["replanned"]
        trespass_steps += info["trespass"] is not None
        if term or trunc:
            break
    verdict = ("reached the goal" if info["success"] else
               "trespassed an engagement zone" if trespass_steps else
               "failed")
    print(f"  offset {offset:5.0f} ft, seed {seed}: {verdict} "
          f"after {info['pn']:.0f} ft north, {replans} replans")
    return env, info


print("\nPerfect enemy picture:")
for seed in (0, 1, 2):
    fly(0.0, seed)

print("Stale enemy picture (3500 ft displacement):")
last_env = None
for seed in (0, 1, 2, 3):
    env, info = fly(3500.0, seed)
    last_env = env

state = AircraftState.from_tuple(last_env._state.as_tuple())
frame = render_mission_frame(state, last_env.world)
out = Path(tempfile.mkdtemp()) / "mission.svg"
out.write_text(frame)
print(f"\nWrote the final top-down frame to {out}")
print("Red circles are the true zones, blue unfilled ones the stale picture; "
      "where they disagree, the planner can route through a live zone.")
