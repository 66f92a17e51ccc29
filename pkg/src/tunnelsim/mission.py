"""Missionized top-down environment: terrain corridor, missile engagement
zones with a possibly stale perceived order of battle, forward-sensor
discovery, grid A* threat-avoidance planning, and autopilot execution.

Planning happens in the horizontal plane; altitude only interacts with
terrain through each polygon's height attribute.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field, replace
from typing import NamedTuple

import numpy as np

from . import f16
from .errors import ConfigError, EpisodeError
from .experts import Waypoint, waypoint_autopilot
from .world import WINGSPAN

# default engagement-zone radius and scene scale are sized so a 60-degree-bank
# turn radius (~3000 ft at 400 ft/s) fits inside the terrain channels
MISSION_SUCCESS_REWARD = 100.0
MISSION_FAILURE_REWARD = -100.0
MISSION_PROGRESS_SCALE = 0.01       # reward per ft of goal-distance progress


@dataclass(frozen=True)
class EngagementZone:
    zone_id: int
    center: tuple       # (pn, pe) ft
    radius: float
    active: bool = True

    def __post_init__(self):
        if self.radius <= 0:
            raise ConfigError("engagement zone radius must be > 0")

    def contains(self, pn: float, pe: float) -> bool:
        return math.hypot(pn - self.center[0], pe - self.center[1]) < self.radius


@dataclass(frozen=True)
class TerrainPolygon:
    vertices: tuple     # ((pn, pe), ...) simple polygon
    height: float       # ft


@dataclass(frozen=True)
class ForwardSensor:
    """Forward-looking sensor; its ground footprint is a sector polygon."""

    half_angle_deg: float = 30.0
    range_ft: float = 6000.0
    arc_points: int = 9

    def __post_init__(self):
        if not 0.0 < self.half_angle_deg < 90.0:
            raise ConfigError("forward sensor half angle must be in (0, 90) deg")
        if self.range_ft <= 0:
            raise ConfigError("forward sensor range must be > 0")

    def footprint(self, pn: float, pe: float, psi: float) -> tuple:
        half = math.radians(self.half_angle_deg)
        angles = [psi - half + 2.0 * half * k / (self.arc_points - 1)
                  for k in range(self.arc_points)]
        arc = [(pn + self.range_ft * math.cos(a), pe + self.range_ft * math.sin(a))
               for a in angles]
        return ((pn, pe), *arc)


def point_in_polygon(pn: float, pe: float, vertices) -> bool:
    """Even-odd crossing test in the (pn, pe) plane."""
    inside = False
    n = len(vertices)
    for i in range(n):
        a = vertices[i]
        b = vertices[(i + 1) % n]
        if (a[1] > pe) != (b[1] > pe):
            t = (pe - a[1]) / (b[1] - a[1])
            if pn < a[0] + t * (b[0] - a[0]):
                inside = not inside
    return inside


def _dist_point_segment(p, a, b) -> float:
    apn, ape = p[0] - a[0], p[1] - a[1]
    abn, abe = b[0] - a[0], b[1] - a[1]
    denom = abn * abn + abe * abe
    t = 0.0 if denom == 0.0 else min(max((apn * abn + ape * abe) / denom, 0.0), 1.0)
    return math.hypot(p[0] - (a[0] + t * abn), p[1] - (a[1] + t * abe))


def distance_to_polygon(pn: float, pe: float, vertices) -> float:
    """0 inside; otherwise distance to the nearest edge."""
    if point_in_polygon(pn, pe, vertices):
        return 0.0
    n = len(vertices)
    return min(_dist_point_segment((pn, pe), vertices[i], vertices[(i + 1) % n])
               for i in range(n))


# --- scene configuration and construction ---

def _default_terrain():
    return (
        TerrainPolygon(((0.0, -15000.0), (60000.0, -15000.0),
                        (60000.0, -12000.0), (0.0, -12000.0)), 3000.0),
        TerrainPolygon(((0.0, 12000.0), (60000.0, 12000.0),
                        (60000.0, 15000.0), (0.0, 15000.0)), 3000.0),
        TerrainPolygon(((15000.0, -12000.0), (24000.0, -12000.0),
                        (24000.0, 2000.0), (15000.0, 2000.0)), 3000.0),
        TerrainPolygon(((33000.0, -2000.0), (42000.0, -2000.0),
                        (42000.0, 12000.0), (33000.0, 12000.0)), 3000.0),
    )


@dataclass(frozen=True)
class MissionConfig:
    bounds: tuple = (0.0, 60000.0, -15000.0, 15000.0)   # n_min, n_max, e_min, e_max
    terrain: tuple = field(default_factory=_default_terrain)
    zones: tuple = ((27500.0, 7000.0, 2500.0), (45000.0, -7000.0, 2500.0))
    goal_center: tuple = (56000.0, 0.0)
    goal_radius: float = 2500.0
    grid_resolution: float = 500.0
    perceived_offset: float = 3500.0    # ft of initial EOB error; 0 = perfect
    plan_margin: float = 1000.0         # extra zone inflation for tracking error
    forward_sensor: ForwardSensor = field(default_factory=ForwardSensor)
    start: tuple = (2000.0, 0.0)
    start_jitter: float = 500.0         # east scatter of the start point, ft
    cruise_altitude: float = 1000.0
    cruise_speed: float = 350.0
    rangefinder_rays: int = 24
    rangefinder_range: float = 8000.0
    gps_denied: bool = True
    dt: float = 1.0 / 30.0
    substeps: int = 3
    max_steps: int = 9000

    def __post_init__(self):
        n_min, n_max, e_min, e_max = self.bounds
        if n_max <= n_min or e_max <= e_min:
            raise ConfigError("bounds must have positive extent")
        if self.grid_resolution <= 0:
            raise ConfigError("grid_resolution must be > 0")
        if self.goal_radius <= 0:
            raise ConfigError("goal_radius must be > 0")

        def in_bounds(pn, pe):
            return n_min <= pn <= n_max and e_min <= pe <= e_max

        if not in_bounds(*self.goal_center):
            raise ConfigError("goal_center must lie inside bounds")
        for i, (zn, ze, zr) in enumerate(self.zones):
            if zr <= 0:
                raise ConfigError(f"zones[{i}] radius must be > 0")
            if not in_bounds(zn, ze):
                raise ConfigError(f"zones[{i}] center must lie inside bounds")
            if math.hypot(zn - self.goal_center[0], ze - self.goal_center[1]) \
                    < zr + self.goal_radius:
                raise ConfigError(f"zones[{i}] overlaps the goal region")
        if self.perceived_offset < 0:
            raise ConfigError("perceived_offset must be >= 0")
        if self.dt <= 0 or self.substeps < 1 or self.max_steps < 1:
            raise ConfigError("dt must be > 0, substeps >= 1, max_steps >= 1")


@dataclass
class MissionWorld:
    bounds: tuple
    terrain: tuple
    true_eob: tuple           # EngagementZone, ground truth
    perceived_eob: tuple      # EngagementZone, possibly stale
    goal_center: tuple
    goal_radius: float
    grid_resolution: float
    aircraft_radius: float


def build_mission(config: MissionConfig, seed: int = 0) -> MissionWorld:
    """Deterministic scene from (config, seed): the perceived order of battle
    is the true one displaced by `perceived_offset` ft at seeded angles."""
    rng = np.random.default_rng(seed)
    true_eob = tuple(EngagementZone(zone_id=i, center=(zn, ze), radius=zr)
                     for i, (zn, ze, zr) in enumerate(config.zones))
    perceived = []
    for zone in true_eob:
        angle = rng.uniform(0.0, 2.0 * math.pi)
        perceived.append(replace(
            zone,
            center=(zone.center[0] + config.perceived_offset * math.cos(angle),
                    zone.center[1] + config.perceived_offset * math.sin(angle))))
    return MissionWorld(bounds=config.bounds, terrain=config.terrain,
                        true_eob=true_eob, perceived_eob=tuple(perceived),
                        goal_center=config.goal_center,
                        goal_radius=config.goal_radius,
                        grid_resolution=config.grid_resolution,
                        aircraft_radius=WINGSPAN / 2.0)


# --- perception and adversary ---

def update_perception(pose, forward_sensor: ForwardSensor, true_eob,
                      perceived_eob) -> tuple:
    """Replace perceived entries with truth for every ACTIVE true zone whose
    center lies inside the current sensor footprint.  Inactive zones are
    invisible; unseen zones keep their stale values.  Idempotent per pose."""
    pn, pe, psi = pose
    poly = forward_sensor.footprint(pn, pe, psi)
    updated = list(perceived_eob)
    for zone in true_eob:
        if zone.active and point_in_polygon(zone.center[0], zone.center[1], poly):
            updated[zone.zone_id] = zone
    return tuple(updated)


def adversary_step(adversary_action, zones) -> tuple:
    """Set each zone's active flag from a per-zone on/off action."""
    flags = list(adversary_action)
    if len(flags) != len(zones):
        raise EpisodeError(
            f"adversary action length {len(flags)} != zone count {len(zones)}")
    return tuple(replace(zone, active=bool(flag))
                 for zone, flag in zip(zones, flags))


# --- occupancy grid and A* ---


@dataclass(frozen=True)
class PlanGrid:
    origin: tuple           # (n_min, e_min)
    resolution: float
    blocked: np.ndarray     # bool, shape (n_cells, e_cells)

    @property
    def shape(self):
        return self.blocked.shape

    def cell_of(self, pn: float, pe: float):
        i = int((pn - self.origin[0]) // self.resolution)
        j = int((pe - self.origin[1]) // self.resolution)
        return i, j

    def center_of(self, cell):
        i, j = cell
        return (self.origin[0] + (i + 0.5) * self.resolution,
                self.origin[1] + (j + 0.5) * self.resolution)

    def in_grid(self, cell) -> bool:
        i, j = cell
        return 0 <= i < self.blocked.shape[0] and 0 <= j < self.blocked.shape[1]


def _polygon_proximity_mask(gn, ge, vertices, inflate: float) -> np.ndarray:
    """Cells whose center is inside the polygon or within `inflate` of an edge."""
    inside = np.zeros(gn.shape, dtype=bool)
    near = np.zeros(gn.shape, dtype=bool)
    n = len(vertices)
    for i in range(n):
        a = vertices[i]
        b = vertices[(i + 1) % n]
        crosses = (a[1] > ge) != (b[1] > ge)
        with np.errstate(divide="ignore", invalid="ignore"):
            t = (ge - a[1]) / (b[1] - a[1])
        inside ^= crosses & (gn < a[0] + t * (b[0] - a[0]))

        abn, abe = b[0] - a[0], b[1] - a[1]
        denom = abn * abn + abe * abe
        if denom == 0.0:
            continue
        u = np.clip(((gn - a[0]) * abn + (ge - a[1]) * abe) / denom, 0.0, 1.0)
        near |= np.hypot(gn - (a[0] + u * abn), ge - (a[1] + u * abe)) < inflate
    return inside | near


def build_plan_grid(world: MissionWorld, perceived_eob=None,
                    extra_margin: float = 0.0) -> PlanGrid:
    """Occupancy grid over the bounds: a cell is blocked when its center is
    within aircraft_radius (+extra_margin) of terrain or of a perceived
    ACTIVE engagement zone."""
    zones = world.perceived_eob if perceived_eob is None else perceived_eob
    n_min, n_max, e_min, e_max = world.bounds
    res = world.grid_resolution
    ni = int(math.ceil((n_max - n_min) / res))
    nj = int(math.ceil((e_max - e_min) / res))
    inflate = world.aircraft_radius + extra_margin

    centers_n = n_min + (np.arange(ni) + 0.5) * res
    centers_e = e_min + (np.arange(nj) + 0.5) * res
    gn, ge = np.meshgrid(centers_n, centers_e, indexing="ij")
    blocked = np.zeros((ni, nj), dtype=bool)

    for zone in zones:
        if not zone.active:
            continue
        d2 = (gn - zone.center[0]) ** 2 + (ge - zone.center[1]) ** 2
        blocked |= d2 < (zone.radius + inflate) ** 2

    for poly in world.terrain:
        blocked |= _polygon_proximity_mask(gn, ge, poly.vertices, inflate)
    return PlanGrid(origin=(n_min, e_min), resolution=res, blocked=blocked)


class Unreachable(RuntimeError):
    """A* found no path; reason is blocked_start, blocked_goal or disconnected."""

    def __init__(self, reason: str):
        super().__init__(f"no path: {reason}")
        self.reason = reason


def _nearest_free_cell(grid: PlanGrid, cell, max_rings: int = 20):
    """The closest unblocked cell to `cell`, searching outward ring by ring;
    None when everything nearby is blocked."""
    if grid.in_grid(cell) and not grid.blocked[cell]:
        return cell
    ci, cj = cell
    for ring in range(1, max_rings + 1):
        best = None
        for di in range(-ring, ring + 1):
            for dj in range(-ring, ring + 1):
                if max(abs(di), abs(dj)) != ring:
                    continue
                cand = (ci + di, cj + dj)
                if grid.in_grid(cand) and not grid.blocked[cand]:
                    d = di * di + dj * dj
                    if best is None or d < best[0] or (d == best[0] and cand < best[1]):
                        best = (d, cand)
        if best is not None:
            return best[1]
    return None


class Path(NamedTuple):
    cells: list             # [(i, j), ...] start to goal inclusive
    waypoints: list         # [(pn, pe), ...] cell centers
    cost: float             # cells: 1 per orthogonal step, sqrt(2) per diagonal


_SQRT2 = math.sqrt(2.0)
_MOVES = ((-1, 0, 1.0), (1, 0, 1.0), (0, -1, 1.0), (0, 1, 1.0),
          (-1, -1, _SQRT2), (-1, 1, _SQRT2), (1, -1, _SQRT2), (1, 1, _SQRT2))


def astar_plan(grid: PlanGrid, start, goal) -> Path:
    """Minimal-cost 8-connected path under the Euclidean heuristic.
    Diagonal moves may not cut blocked corners.  Ties break toward the lower
    flat cell index, so results are deterministic."""
    start = tuple(start)
    goal = tuple(goal)
    for cell, which in ((start, "blocked_start"), (goal, "blocked_goal")):
        if not grid.in_grid(cell) or grid.blocked[cell]:
            raise Unreachable(which)

    ni, nj = grid.shape
    blocked = grid.blocked

    def heuristic(c):
        return math.hypot(c[0] - goal[0], c[1] - goal[1])

    g_cost = {start: 0.0}
    came = {}
    open_heap = [(heuristic(start), start[0] * nj + start[1], start)]
    closed = set()
    while open_heap:
        _, _, current = heapq.heappop(open_heap)
        if current in closed:
            continue
        if current == goal:
            cells = [current]
            while current in came:
                current = came[current]
                cells.append(current)
            cells.reverse()
            return Path(cells=cells,
                        waypoints=[grid.center_of(c) for c in cells],
                        cost=g_cost[goal])
        closed.add(current)
        ci, cj = current
        for di, dj, move_cost in _MOVES:
            ni_, nj_ = ci + di, cj + dj
            if not (0 <= ni_ < ni and 0 <= nj_ < nj) or blocked[ni_, nj_]:
                continue
            if di != 0 and dj != 0 and blocked[ci + di, cj] and blocked[ci, cj + dj]:
                continue        # no cutting through a blocked corner
            tentative = g_cost[current] + move_cost
            neighbor = (ni_, nj_)
            if tentative < g_cost.get(neighbor, math.inf):
                g_cost[neighbor] = tentative
                came[neighbor] = current
                heapq.heappush(open_heap,
                               (tentative + heuristic(neighbor),
                                ni_ * nj + nj_, neighbor))
    raise Unreachable("disconnected")


# --- mission episode engine ---


class MissionStepResult(NamedTuple):
    observation: np.ndarray
    reward: float
    terminated: bool
    truncated: bool
    info: dict


class MissionEnv:
    """Goal-seeking episode over the mission scene.  In autopilot mode the
    aircraft follows the current A* path (replanning whenever perception
    changes); otherwise actions use the tunnel action mapping."""

    LOOKAHEAD_FT = 6000.0       # farthest carrot distance along the path
    NEAREST_WINDOW = 40         # forward cells scanned when tracking progress

    def __init__(self, config: MissionConfig | None = None):
        self.config = config or MissionConfig()
        self.trim = f16.trim_solve(self.config.cruise_speed,
                                   self.config.cruise_altitude)
        self.world: MissionWorld | None = None
        self._state: f16.AircraftState | None = None
        self._rng = np.random.default_rng()
        self._done = True
        self._steps = 0
        self._path: Path | None = None
        self._grid: PlanGrid | None = None
        self._wp_index = 0
        self._goal_dist = 0.0
        self._plan_failed = False
        self._carrot = None
        self._carrot_stamp = -10

    # --- spaces ---

    def observation_size(self) -> int:
        state_n = 14 if self.config.gps_denied else 16
        return state_n + self.config.rangefinder_rays + 4 * len(self.config.zones) + 2

    def observation_space_info(self) -> dict:
        n = self.observation_size()
        return {"shape": (n,), "low": [None] * n, "high": [None] * n}

    def action_space_info(self) -> dict:
        return {"shape": (4,), "low": [-1.0] * 4, "high": [1.0] * 4,
                "dims": ["pitch", "roll", "rudder", "throttle"]}

    # --- episode contract ---

    def reset(self, seed: int | None = None):
        if seed is None:
            seed = int(self._rng.integers(0, 2 ** 31 - 1))
        self._rng = np.random.default_rng(seed)
        self.world = build_mission(self.config, seed)
        jitter = self._rng.uniform(-self.config.start_jitter,
                                   self.config.start_jitter)
        self._state = replace(self.trim.state,
                              pn=self.config.start[0],
                              pe=self.config.start[1] + jitter,
                              h=self.config.cruise_altitude, psi=0.0)
        self._steps = 0
        self._done = False
        self._plan_failed = False
        self._goal_dist = self._distance_to_goal()
        self._replan()
        obs = self._observation()
        return obs, self._info(trespass=None, terrain=False, replanned=True)

    def step(self, action=None, adversary_action=None) -> MissionStepResult:
        if self._done or self._state is None:
            raise EpisodeError("step() called on a finished episode; call reset()")
        if adversary_action is not None:
            self.world.true_eob = adversary_step(adversary_action,
                                                 self.world.true_eob)

        request = self._autopilot_request() if action is None \
            else self._action_request(action)
        diverged = False
        try:
            self._state = f16.step_rk4(self._state, request, self.config.dt,
                                       self.config.substeps)
        except f16.DynamicsDivergedError:
            diverged = True
        self._steps += 1
        state = self._state

        replanned = False
        trespass = None
        terrain_hit = False
        success = False
        out_of_bounds = False
        if not diverged:
            perceived = update_perception(
                (state.pn, state.pe, state.psi), self.config.forward_sensor,
                self.world.true_eob, self.world.perceived_eob)
            if perceived != self.world.perceived_eob:
                self.world.perceived_eob = perceived
                self._replan()
                replanned = True

            for zone in self.world.true_eob:
                if zone.active and zone.contains(state.pn, state.pe):
                    trespass = zone.zone_id
                    break
            for poly in self.world.terrain:
                if state.h < poly.height and point_in_polygon(
                        state.pn, state.pe, poly.vertices):
                    terrain_hit = True
                    break
            n_min, n_max, e_min, e_max = self.world.bounds
            out_of_bounds = not (n_min <= state.pn <= n_max
                                 and e_min <= state.pe <= e_max)
            success = self._distance_to_goal() < self.world.goal_radius

        terminated = diverged or success or trespass is not None \
            or terrain_hit or out_of_bounds
        truncated = self._steps >= self.config.max_steps
        self._done = terminated or truncated

        if diverged:
            reward = 0.0
        else:
            new_dist = self._distance_to_goal()
            reward = MISSION_PROGRESS_SCALE * (self._goal_dist - new_dist)
            self._goal_dist = new_dist
            if success:
                reward += MISSION_SUCCESS_REWARD
            elif trespass is not None or terrain_hit or out_of_bounds:
                reward += MISSION_FAILURE_REWARD

        obs = self._observation()
        info = self._info(trespass=trespass, terrain=terrain_hit,
                          replanned=replanned)
        info["success"] = success
        info["diverged"] = diverged
        info["out_of_bounds"] = out_of_bounds
        info["request"] = [request.nz_cmd, request.ps_cmd, request.ny_r_cmd,
                           request.throttle]
        return MissionStepResult(obs, reward, terminated, truncated, info)

    # --- internals ---

    def _distance_to_goal(self) -> float:
        return math.hypot(self._state.pn - self.world.goal_center[0],
                          self._state.pe - self.world.goal_center[1])

    def _replan(self):
        grid = build_plan_grid(self.world, extra_margin=self.config.plan_margin)
        self._grid = grid
        # discovery can leave the aircraft inside a freshly blocked region, so
        # snap both endpoints to the nearest free cell before planning
        start = _nearest_free_cell(grid, grid.cell_of(self._state.pn,
                                                      self._state.pe))
        goal = _nearest_free_cell(grid, grid.cell_of(*self.world.goal_center))
        try:
            if start is None or goal is None:
                raise Unreachable("blocked_start" if start is None
                                  else "blocked_goal")
            self._path = astar_plan(grid, start, goal)
            self._wp_index = 0
            self._plan_failed = False
            self._carrot = None
        except Unreachable:
            # hold the previous path (or fly straight at the goal if none)
            self._plan_failed = True

    def _line_of_sight(self, a, b) -> bool:
        """No blocked cell between two (pn, pe) points, sampled at half-cell
        steps on the current planning grid."""
        grid = self._grid
        if grid is None:
            return True
        dist = math.hypot(b[0] - a[0], b[1] - a[1])
        steps = max(2, int(dist / (grid.resolution * 0.5)) + 1)
        for k in range(steps + 1):
            t = k / steps
            cell = grid.cell_of(a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]))
            if grid.in_grid(cell) and grid.blocked[cell]:
                return False
        return True

    def _current_waypoint(self) -> Waypoint:
        """Pure-pursuit carrot: track the nearest path point (monotonically),
        then aim at the farthest point within the lookahead that is reachable
        in a straight free-space line.  Cannot orbit-lock on a waypoint
        tighter than the turn radius, and does not cut corners into terrain."""
        alt = self.config.cruise_altitude
        if self._path is None:
            return Waypoint(*self.world.goal_center, alt)
        wps = self._path.waypoints
        pn, pe = self._state.pn, self._state.pe

        best = self._wp_index
        best_d = math.hypot(pn - wps[best][0], pe - wps[best][1])
        for k in range(best + 1, min(best + self.NEAREST_WINDOW, len(wps))):
            d = math.hypot(pn - wps[k][0], pe - wps[k][1])
            if d < best_d:
                best, best_d = k, d
        self._wp_index = best

        lookahead_cells = max(1, round(self.LOOKAHEAD_FT
                                       / self.world.grid_resolution))
        far = min(best + lookahead_cells, len(wps) - 1)
        target = best + 1 if best + 1 < len(wps) else len(wps) - 1
        for k in range(far, best, -1):
            if self._line_of_sight((pn, pe), wps[k]):
                target = k
                break
        if target >= len(wps) - 1 and self._line_of_sight(
                (pn, pe), self.world.goal_center):
            return Waypoint(*self.world.goal_center, alt)
        return Waypoint(wps[target][0], wps[target][1], alt)

    CARROT_REFRESH = 5          # env steps between carrot recomputations

    def _autopilot_request(self) -> f16.ControlRequest:
        if self._carrot is None or self._steps >= self._carrot_stamp + self.CARROT_REFRESH:
            self._carrot = self._current_waypoint()
            self._carrot_stamp = self._steps
        return waypoint_autopilot(self._state, self._carrot,
                                  self.config.cruise_speed,
                                  self.trim.request.throttle)

    def _action_request(self, action) -> f16.ControlRequest:
        a = np.clip(np.asarray(action, dtype=float).ravel(), -1.0, 1.0)
        if a.shape != (4,):
            raise EpisodeError("mission action must have shape (4,)")
        return f16.ControlRequest(
            nz_cmd=min(-f16.NZ_CMD_MIN, f16.NZ_CMD_MAX) * a[0],
            ps_cmd=f16.PS_CMD_LIMIT * a[1],
            ny_r_cmd=f16.NY_R_CMD_LIMIT * a[2],
            throttle=(a[3] + 1.0) / 2.0,
        ).clamped()

    def _rangefinder(self) -> np.ndarray:
        """Omnidirectional short-range scan against terrain edges and bounds,
        ground-projected (heading-relative azimuths, level rays)."""
        cfg = self.config
        state = self._state
        k = cfg.rangefinder_rays
        az = state.psi + 2.0 * math.pi * np.arange(k) / k
        dirs = np.stack([np.cos(az), np.sin(az)], axis=1)

        segments = []
        for poly in self.world.terrain:
            v = poly.vertices
            segments += [(v[i], v[(i + 1) % len(v)]) for i in range(len(v))]
        n_min, n_max, e_min, e_max = self.world.bounds
        corners = ((n_min, e_min), (n_max, e_min), (n_max, e_max), (n_min, e_max))
        segments += [(corners[i], corners[(i + 1) % 4]) for i in range(4)]

        a = np.array([s[0] for s in segments])      # (S, 2)
        b = np.array([s[1] for s in segments])
        o = np.array([state.pn, state.pe])
        seg = b - a                                  # (S, 2)
        # solve o + t*d = a + u*seg for each (ray, segment)
        d = dirs[:, None, :]                         # (k, 1, 2)
        rel = a[None, :, :] - o                      # (1, S, 2)
        denom = d[..., 0] * seg[None, :, 1] - d[..., 1] * seg[None, :, 0]
        denom = np.where(np.abs(denom) < 1e-12, np.nan, denom)
        t = (rel[..., 0] * seg[None, :, 1] - rel[..., 1] * seg[None, :, 0]) / denom
        u = (rel[..., 0] * d[..., 1] - rel[..., 1] * d[..., 0]) / -denom
        hit = (t > 0.0) & (u >= 0.0) & (u <= 1.0)
        t = np.where(hit, t, np.inf)
        return np.minimum(t.min(axis=1), cfg.rangefinder_range)

    def _observation(self) -> np.ndarray:
        state = self._state
        vec = list(state.as_tuple())
        extent = self.world.bounds[1] - self.world.bounds[0]
        scales = [1000.0] + [math.pi] * 8 + [extent] * 3 + [100.0, 25.0, 21.5, 30.0]
        norm = [v / s for v, s in zip(vec, scales)]
        if self.config.gps_denied:
            del norm[9:11]      # drop absolute pn, pe
        ranges = self._rangefinder() / self.config.rangefinder_range
        zone_block = []
        for zone in self.world.perceived_eob:
            zone_block += [(zone.center[0] - state.pn) / 10000.0,
                           (zone.center[1] - state.pe) / 10000.0,
                           zone.radius / 10000.0,
                           1.0 if zone.active else 0.0]
        goal_block = [(self.world.goal_center[0] - state.pn) / 10000.0,
                      (self.world.goal_center[1] - state.pe) / 10000.0]
        return np.concatenate([np.array(norm), ranges,
                               np.array(zone_block), np.array(goal_block)])

    def _info(self, trespass, terrain: bool, replanned: bool) -> dict:
        state = self._state
        return {
            "trespass": trespass,
            "terrain_collision": terrain,
            "replanned": replanned,
            "plan_failed": self._plan_failed,
            "pn": state.pn,
            "pe": state.pe,
            "goal_distance": self._goal_dist,
            "state": list(state.as_tuple()),
            "perceived_eob": [
                {"id": z.zone_id, "center": list(z.center), "radius": z.radius,
                 "active": z.active} for z in self.world.perceived_eob],
        }
