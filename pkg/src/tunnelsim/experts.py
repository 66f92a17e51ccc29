"""Scripted expert controllers and imitation-learning dataset production.

Two experts: a minimal PID centerline-holder driven by cross-section position
errors, and a waypoint-following bank-to-turn autopilot.  Both emit pilot-level
ControlRequests; rollouts convert them through the environment's action map so
recorded demonstrations live in the agent's own action space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import f16
from .f16 import AircraftState, ControlRequest

# --- PID centerline-holder ---


@dataclass(frozen=True)
class PidGains:
    """Position-error PID gains (ft of error to g / rad/s of command)."""

    kp_y: float = -0.002    # altitude error -> nz
    kd_y: float = -0.2      # altitude error first difference -> nz
    kp_x: float = -0.001    # east error -> ps
    kd_x: float = -0.1      # east error first difference -> ps


@dataclass(frozen=True)
class PidMemory:
    """Previous-step errors and their first differences, zero at reset."""

    e_y: float = 0.0
    e_x: float = 0.0
    de_y: float = 0.0
    de_x: float = 0.0


def pid_expert(state: AircraftState, memory: PidMemory, world,
               gains: PidGains = PidGains(), trim_throttle: float = 0.0):
    """One step of the centerline PID: commands from the previous step's
    errors, then the memory advances with this step's measurements.
    Errors are first differences per environment step (not divided by dt)."""
    nz = gains.kp_y * memory.e_y + gains.kd_y * memory.de_y
    ps = gains.kp_x * memory.e_x + gains.kd_x * memory.de_x
    request = ControlRequest(nz_cmd=nz, ps_cmd=ps, ny_r_cmd=0.0,
                             throttle=trim_throttle).clamped()
    e_y = state.h - world.center_altitude
    e_x = state.pe
    new_memory = PidMemory(e_y=e_y, e_x=e_x,
                           de_y=e_y - memory.e_y, de_x=e_x - memory.e_x)
    return request, new_memory


# --- waypoint-following autopilot ---

AP_MAX_BANK = math.radians(45.0)
AP_K_HEADING = 1.2      # desired bank per rad of course error
AP_K_BANK = 2.5         # ps command per rad of bank error, 1/s
AP_KP_ALT = 0.003       # g per ft of altitude error (kept soft: phugoid margin)
AP_KD_ALT = 0.015       # g per ft/s of climb rate
AP_K_SPEED = 0.008      # throttle per ft/s of airspeed error
AP_NZ_MIN = -1.0        # autopilot-level nz authority, g
AP_NZ_MAX = 3.0


@dataclass(frozen=True)
class Waypoint:
    pn: float
    pe: float
    h: float


def waypoint_autopilot(state: AircraftState, waypoint: Waypoint,
                       speed_ref: float, trim_throttle: float) -> ControlRequest:
    """Cascaded bank-to-turn law: course error -> bank -> roll rate; altitude
    error -> nz with climb-rate damping and a bank lift-compensation term;
    proportional airspeed hold on throttle.  A coincident waypoint holds trim."""
    dn = waypoint.pn - state.pn
    de = waypoint.pe - state.pe
    if math.hypot(dn, de) < 1.0:
        return ControlRequest(throttle=trim_throttle)

    course_err = math.atan2(de, dn) - state.psi
    course_err = math.atan2(math.sin(course_err), math.cos(course_err))
    bank_cmd = min(max(AP_K_HEADING * course_err, -AP_MAX_BANK), AP_MAX_BANK)
    ps_cmd = AP_K_BANK * (bank_cmd - state.phi)

    climb = state.vt * math.sin(state.theta - state.alpha)
    lift_ratio = max(math.cos(state.theta) * math.cos(state.phi), 0.4)
    bank_comp = 1.0 / lift_ratio - lift_ratio
    nz_cmd = AP_KP_ALT * (waypoint.h - state.h) - AP_KD_ALT * climb + bank_comp
    nz_cmd = min(max(nz_cmd, AP_NZ_MIN), AP_NZ_MAX)

    throttle = trim_throttle + AP_K_SPEED * (speed_ref - state.vt)
    return ControlRequest(nz_cmd=nz_cmd, ps_cmd=ps_cmd, ny_r_cmd=0.0,
                          throttle=throttle).clamped()


# --- experts bound to an environment, as rollout policies ---


class PidCenterExpert:
    """Minimal position-error PID holding the tunnel centerline."""

    name = "pid"

    def __init__(self, env, gains: PidGains | None = None):
        self.env = env
        self.gains = gains or PidGains()
        self.memory = PidMemory()

    def reset(self):
        self.memory = PidMemory()

    def act(self, state: AircraftState) -> ControlRequest:
        request, self.memory = pid_expert(state, self.memory, self.env.world,
                                          self.gains,
                                          self.env.trim.request.throttle)
        return request


class WaypointExpert:
    """Autopilot steering to a waypoint at the far end of the tunnel center."""

    name = "waypoint"

    def __init__(self, env, waypoint: Waypoint | None = None):
        self.env = env
        self.waypoint = waypoint or Waypoint(
            pn=env.world.length, pe=0.0, h=env.world.center_altitude)

    def reset(self):
        pass

    def act(self, state: AircraftState) -> ControlRequest:
        return waypoint_autopilot(state, self.waypoint,
                                  self.env.config.trim_speed,
                                  self.env.trim.request.throttle)


EXPERTS = {"pid": PidCenterExpert, "waypoint": WaypointExpert}


def make_expert(name: str, env):
    if name not in EXPERTS:
        raise ValueError(f"unknown expert '{name}' (choose from {sorted(EXPERTS)})")
    return EXPERTS[name](env)


# --- rollouts and dataset export ---


@dataclass
class DemoRecord:
    episode_id: int
    step: int
    observation: np.ndarray
    action: np.ndarray
    state: tuple
    outcome: str = ""       # filled once the episode ends


@dataclass
class EpisodeTrace:
    episode_id: int
    seed: int
    outcome: str            # reached_end | collision | truncated | error
    records: list = field(default_factory=list)
    config_hash: str = ""


def rollout_episode(env, expert, episode_id: int, seed: int,
                    config_hash: str = "") -> EpisodeTrace:
    """One expert episode: record (observation, expert action) at every step."""
    obs, info = env.reset(seed=seed)
    expert.reset()
    records = []
    step = 0
    outcome = "truncated"
    while True:
        state = AircraftState.from_tuple(info["state"])
        action = env.request_to_action(expert.act(state))
        records.append(DemoRecord(episode_id=episode_id, step=step,
                                  observation=obs.copy(),
                                  action=action.copy(),
                                  state=tuple(info["state"])))
        obs, reward, terminated, truncated, info = env.step(action)
        step += 1
        if terminated or truncated:
            if info.get("diverged"):
                outcome = "error"
            elif info.get("success"):
                outcome = "reached_end"
            elif info.get("collision"):
                outcome = "collision"
            else:
                outcome = "truncated"
            break
    for rec in records:
        rec.outcome = outcome
    return EpisodeTrace(episode_id=episode_id, seed=seed, outcome=outcome,
                        records=records, config_hash=config_hash)


def rollout_expert(env, expert, episodes: int, seed: int = 0,
                   config_hash: str = "") -> list:
    """Run the expert for `episodes` episodes (episode i resets with seed+i).
    Episodes are independent and seed-addressed, so they may also be run on
    parallel workers (see the rollout CLI) with identical results."""
    return [rollout_episode(env, expert, ep, seed + ep, config_hash)
            for ep in range(episodes)]


def outcome_counts(traces) -> dict:
    counts: dict = {}
    for trace in traces:
        counts[trace.outcome] = counts.get(trace.outcome, 0) + 1
    return counts


def export_dataset(traces, path, config_hash: str = "") -> dict:
    """Write demonstration records to a JSONL dataset (see recording module).
    Returns a summary with per-outcome episode counts."""
    from .recording import write_dataset
    if traces and not config_hash:
        config_hash = traces[0].config_hash
    n_records = write_dataset(path, traces, config_hash=config_hash)
    return {"episodes": len(traces), "records": n_records,
            "outcomes": outcome_counts(traces)}
