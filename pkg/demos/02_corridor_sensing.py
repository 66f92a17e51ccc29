"""Ray-cast range images inside the corridor.

Builds the default tunnel (1.5 nm, cross-section four wingspans, 380 gates),
scans the default 31x31 sensor grid from a few poses, and prints coarse
ASCII pictures of the returns: close walls read dark, open corridor bright.
"""

import numpy as np

from tunnelsim.f16 import AircraftState
from tunnelsim.world import SensorConfig, make_tunnel, sensor_scan

world = make_tunnel()
print(f"Corridor: {world.length:.0f} ft long, "
      f"{2 * world.half_width:.1f} x {2 * world.half_height:.1f} ft section, "
      f"{len(world.gates)} gates worth {sum(world.gate_rewards):,.0f} total")

config = SensorConfig()      # -45..45 deg each 3 deg: 961 rays
print(f"Sensor: {config.el_nodes} x {config.az_nodes} = {config.ray_count} rays\n")


def show(label, pe, dh):
    state = AircraftState(vt=500.0, alpha=0.0, beta=0.0, phi=0.0, theta=0.0,
                          psi=0.0, p=0.0, q=0.0, r=0.0, pn=500.0, pe=pe,
                          h=world.center_altitude + dh, pow=10.0)
    img = sensor_scan(state, config, world)
    # coarse 8x8 blocks, log-scaled to glyphs (far -> '#', near -> '.')
    small = img[::4, ::4]
    glyphs = " .:-=+*#"
    scaled = np.clip(np.log10(small / 50.0) / np.log10(200.0), 0, 1)
    rows = ["".join(glyphs[int(v * (len(glyphs) - 1))] for v in row)
            for row in scaled[::-1]]      # print top elevation first
    print(f"{label} (pe={pe:+.0f} ft, dh={dh:+.0f} ft); "
          f"min {small.min():.0f} ft, max {small.max():.0f} ft")
    print("\n".join("   " + r for r in rows) + "\n")


show("Centered", 0.0, 0.0)
show("Low and west", -30.0, -30.0)
show("High and east", 30.0, 30.0)

print("A low-west aircraft sees longer returns right of the nose and above "
      "it, shorter ones left and below; the blocks above mirror that.")
