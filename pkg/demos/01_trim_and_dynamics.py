"""Trim the aircraft, then watch the closed loop respond to pilot requests.

Walks through the flight-model layer on its own: solve straight-and-level
trim, hold it for ten seconds, then apply step requests on each channel and
print what the inner loop does with them.
"""

import math
from dataclasses import replace

from tunnelsim import f16

trim = f16.trim_solve(500.0, 1000.0)
print("Trim at 500 ft/s, 1000 ft:")
print(f"  alpha     {math.degrees(trim.state.alpha):7.3f} deg")
print(f"  elevator  {trim.surfaces.elevator:7.3f} deg")
print(f"  throttle  {trim.request.throttle:7.4f}")
print(f"  residual  {trim.residual:.2e}")

# hold trim for 10 s; the solution is a true fixed point of the closed loop
state = trim.state
for _ in range(300):
    state = f16.step_rk4(state, trim.request, 1.0 / 30.0, 3)
print(f"\nAfter 10 s of hands-off flight: altitude drift "
      f"{state.h - 1000.0:+.4f} ft, airspeed drift {state.vt - 500.0:+.4f} ft/s")

# a one-g pull for three seconds
state = trim.state
pull = replace(trim.request, nz_cmd=1.0)
for _ in range(90):
    state = f16.step_rk4(state, pull, 1.0 / 30.0, 3)
print(f"\n+1 g request for 3 s: pitch {math.degrees(state.theta):.1f} deg, "
      f"climbing through {state.h:.0f} ft at {state.vt:.0f} ft/s")

# full left roll-rate request for half a second
state = trim.state
roll = replace(trim.request, ps_cmd=-math.pi)
for _ in range(15):
    state = f16.step_rk4(state, roll, 1.0 / 30.0, 3)
print(f"Full-left roll request for 0.5 s: bank {math.degrees(state.phi):.1f} deg, "
      f"roll rate {state.p:.2f} rad/s")

# engine power lag toward a new throttle setting
state = replace(trim.state, pow=20.0)
fast = replace(trim.request, throttle=0.9)
history = []
for k in range(300):
    state = f16.step_rk4(state, fast, 1.0 / 30.0, 3)
    if k % 60 == 59:
        history.append(state.pow)
print("\nEngine power toward throttle 0.9 (command "
      f"{f16.tgear(0.9):.1f}%): " + " -> ".join(f"{p:.1f}" for p in history))
