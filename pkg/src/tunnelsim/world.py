"""Corridor world: geometry, gates, body-axis ray casting, collision checks.

The corridor is an axis-aligned box open at the south end: floor/ceiling,
two side walls and one end wall at the far north.  Rays are cast in body
axes (azimuth positive right of the nose, elevation positive up) and
intersected with the wall planes in closed form, so returns carry no
marching error.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConfigError, GeometryError

WINGSPAN = 32.8                 # ft, public planform figure
CROSS_SECTION_FACTOR = 4.0      # corridor width/height as a multiple of wingspan

DEFAULT_LENGTH = 9114.0         # ft, about 1.5 nm
DEFAULT_CENTER_ALT = 1000.0     # ft
DEFAULT_GATE_COUNT = 380
DEFAULT_GATE_REWARD_STEP = 100.0
DEFAULT_MAX_RANGE = 10000.0     # ft, covers the full corridor


@dataclass(frozen=True)
class TunnelWorld:
    length: float
    half_width: float
    half_height: float
    center_altitude: float
    aircraft_radius: float
    gates: tuple          # ((north position ft, reward), ...) strictly increasing

    @property
    def gate_positions(self):
        return tuple(g[0] for g in self.gates)

    @property
    def gate_rewards(self):
        return tuple(g[1] for g in self.gates)


@dataclass(frozen=True)
class SensorConfig:
    """Body-axis ray grid: angles in degrees, range in ft."""

    az_min: float = -45.0
    az_max: float = 45.0
    el_min: float = -45.0
    el_max: float = 45.0
    az_step: float = 3.0
    el_step: float = 3.0
    max_range: float = DEFAULT_MAX_RANGE
    history_len: int = 1

    def __post_init__(self):
        for axis, lo, hi, step in (("az", self.az_min, self.az_max, self.az_step),
                                   ("el", self.el_min, self.el_max, self.el_step)):
            if step <= 0:
                raise ConfigError(f"{axis}_step must be > 0")
            if hi < lo:
                raise ConfigError(f"{axis}_max must be >= {axis}_min")
            n = (hi - lo) / step
            if abs(n - round(n)) > 1e-9:
                raise ConfigError(f"{axis}_step must divide the {axis} span exactly")
        if self.max_range <= 0:
            raise ConfigError("max_range must be > 0")
        if self.history_len < 1:
            raise ConfigError("history_len must be >= 1")

    @property
    def az_nodes(self) -> int:
        return round((self.az_max - self.az_min) / self.az_step) + 1

    @property
    def el_nodes(self) -> int:
        return round((self.el_max - self.el_min) / self.el_step) + 1

    @property
    def ray_count(self) -> int:
        return self.az_nodes * self.el_nodes


def make_tunnel(length: float = DEFAULT_LENGTH,
                half_width: float | None = None,
                half_height: float | None = None,
                center_altitude: float = DEFAULT_CENTER_ALT,
                aircraft_radius: float | None = None,
                gate_count: int = DEFAULT_GATE_COUNT,
                gate_reward_step: float = DEFAULT_GATE_REWARD_STEP) -> TunnelWorld:
    """Build a corridor.  Defaults: 1.5 nm long, cross-section four times the
    wingspan (131.2 x 131.2 ft), 380 uniformly spaced gates worth 100, 200,
    ..., 38000."""
    if half_width is None:
        half_width = CROSS_SECTION_FACTOR * WINGSPAN / 2.0
    if half_height is None:
        half_height = CROSS_SECTION_FACTOR * WINGSPAN / 2.0
    if aircraft_radius is None:
        aircraft_radius = WINGSPAN / 2.0
    if length <= 0:
        raise ConfigError("length must be > 0")
    if half_width <= 0 or half_height <= 0:
        raise ConfigError("half_width and half_height must be > 0")
    if aircraft_radius >= half_width or aircraft_radius >= half_height:
        raise ConfigError("aircraft_radius must be smaller than the half cross-section")
    if gate_count < 0:
        raise ConfigError("gate_count must be >= 0")
    gates = tuple((length * (i + 1) / gate_count, gate_reward_step * (i + 1))
                  for i in range(gate_count))
    return TunnelWorld(length=length, half_width=half_width, half_height=half_height,
                       center_altitude=center_altitude, aircraft_radius=aircraft_radius,
                       gates=gates)


def _inside(position, world: TunnelWorld) -> bool:
    pn, pe, h = position
    return (0.0 <= pn < world.length
            and abs(pe) < world.half_width
            and abs(h - world.center_altitude) < world.half_height)


def body_ray_to_ned(attitude, az_deg: float, el_deg: float):
    """Unit ray for body-axis (azimuth right+, elevation up+) rotated to NED."""
    phi, theta, psi = attitude
    az = math.radians(az_deg)
    el = math.radians(el_deg)
    xb = math.cos(el) * math.cos(az)
    yb = math.cos(el) * math.sin(az)
    zb = -math.sin(el)                      # body z is down; elevation is up

    sph, cph = math.sin(phi), math.cos(phi)
    sth, cth = math.sin(theta), math.cos(theta)
    sps, cps = math.sin(psi), math.cos(psi)
    dn = cth * cps * xb + (sph * sth * cps - cph * sps) * yb + (cph * sth * cps + sph * sps) * zb
    de = cth * sps * xb + (sph * sth * sps + cph * cps) * yb + (cph * sth * sps - sph * cps) * zb
    dd = -sth * xb + sph * cth * yb + cph * cth * zb
    return dn, de, dd


def _exit_distance(position, direction, world: TunnelWorld) -> float:
    """Distance along `direction` to the first wall plane (ft, unclipped)."""
    pn, pe, h = position
    dn, de, dd = direction
    climb = -dd
    dh = h - world.center_altitude
    t = math.inf
    if de > 0.0:
        t = min(t, (world.half_width - pe) / de)
    elif de < 0.0:
        t = min(t, (-world.half_width - pe) / de)
    if climb > 0.0:
        t = min(t, (world.half_height - dh) / climb)
    elif climb < 0.0:
        t = min(t, (-world.half_height - dh) / climb)
    if dn > 0.0:
        t = min(t, (world.length - pn) / dn)
    return t


def ray_distance(position, attitude, az_deg: float, el_deg: float,
                 world: TunnelWorld, max_range: float = DEFAULT_MAX_RANGE) -> float:
    """Exact distance from `position` to the nearest wall along one body ray,
    clipped to max_range.  Raises GeometryError if the origin is not strictly
    inside the corridor."""
    if not _inside(position, world):
        raise GeometryError(
            f"ray origin {tuple(position)} is outside the corridor")
    direction = body_ray_to_ned(attitude, az_deg, el_deg)
    return min(_exit_distance(position, direction, world), max_range)


@lru_cache(maxsize=8)
def _body_grid(config: SensorConfig):
    """Body-frame unit vectors for every sensor node, shape (el, az, 3).
    Row 0 is the lowest elevation, column 0 the leftmost azimuth."""
    az = np.radians(config.az_min + config.az_step * np.arange(config.az_nodes))
    el = np.radians(config.el_min + config.el_step * np.arange(config.el_nodes))
    elg, azg = np.meshgrid(el, az, indexing="ij")
    return np.stack([np.cos(elg) * np.cos(azg),
                     np.cos(elg) * np.sin(azg),
                     -np.sin(elg)], axis=-1)


def sensor_scan(state, config: SensorConfig, world: TunnelWorld) -> np.ndarray:
    """Range image over the full sensor grid, shape (el_nodes, az_nodes)."""
    position = (state.pn, state.pe, state.h)
    if not _inside(position, world):
        raise GeometryError(
            f"sensor origin {position} is outside the corridor")
    phi, theta, psi = state.phi, state.theta, state.psi
    sph, cph = math.sin(phi), math.cos(phi)
    sth, cth = math.sin(theta), math.cos(theta)
    sps, cps = math.sin(psi), math.cos(psi)
    rot = np.array([
        [cth * cps, sph * sth * cps - cph * sps, cph * sth * cps + sph * sps],
        [cth * sps, sph * sth * sps + cph * cps, cph * sth * sps - sph * cps],
        [-sth, sph * cth, cph * cth],
    ])
    dirs = _body_grid(config) @ rot.T       # (el, az, 3) in NED
    dn, de, dd = dirs[..., 0], dirs[..., 1], dirs[..., 2]
    climb = -dd

    pn, pe, h = position
    dh = h - world.center_altitude
    t = np.full(de.shape, np.inf)
    hi = world.half_height - dh
    lo = -world.half_height - dh
    with np.errstate(over="ignore"):
        np.minimum(t, np.where(de > 0, (world.half_width - pe) / np.where(de > 0, de, 1.0), np.inf), out=t)
        np.minimum(t, np.where(de < 0, (-world.half_width - pe) / np.where(de < 0, de, 1.0), np.inf), out=t)
        np.minimum(t, np.where(climb > 0, hi / np.where(climb > 0, climb, 1.0), np.inf), out=t)
        np.minimum(t, np.where(climb < 0, lo / np.where(climb < 0, climb, 1.0), np.inf), out=t)
        np.minimum(t, np.where(dn > 0, (world.length - pn) / np.where(dn > 0, dn, 1.0), np.inf), out=t)
    return np.minimum(t, config.max_range)


def collision_check(position, world: TunnelWorld) -> bool:
    """True when the aircraft radius circle trespasses a side wall, floor or
    ceiling, or the position has left the corridor behind the entrance.
    The open end at pn = length is the goal plane, not a wall."""
    pn, pe, h = position
    if pn < 0.0:
        return True
    if abs(pe) > world.half_width - world.aircraft_radius:
        return True
    if abs(h - world.center_altitude) > world.half_height - world.aircraft_radius:
        return True
    return False


def gates_passed(prev_pn: float, new_pn: float, world: TunnelWorld) -> list:
    """Indices of gates with prev_pn < gate position <= new_pn."""
    if new_pn <= prev_pn:
        return []
    positions = world.gate_positions
    lo = bisect_right(positions, prev_pn)
    hi = bisect_right(positions, new_pn)
    return list(range(lo, hi))
