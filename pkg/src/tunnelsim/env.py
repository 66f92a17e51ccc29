"""Episode engine for the corridor task: reset/step semantics, action mapping,
observation assembly, rewards, termination.

Contract: reset(seed) -> (observation, info); step(action) -> (observation,
reward, terminated, truncated, info).  Everything is deterministic given
(config, seed, action sequence).
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field, replace
from typing import NamedTuple

import numpy as np

from . import f16
from .errors import ConfigError, EpisodeError
from .world import SensorConfig, TunnelWorld, collision_check, gates_passed, \
    make_tunnel, sensor_scan

REWARD_MODES = ("centerline_penalty", "target_gates")
OBSERVATION_MODES = ("sensor_only", "sensor_plus_state", "state_only", "zero_masked")
ACTION_DIM_ORDER = ("pitch", "roll", "rudder", "throttle")

# action scaling: pitch is affine and trim-centered, so its slope is the
# smaller side of the asymmetric nz envelope; roll/rudder are symmetric
NZ_ACTION_SCALE = min(-f16.NZ_CMD_MIN, f16.NZ_CMD_MAX)   # g per unit action
PS_ACTION_SCALE = f16.PS_CMD_LIMIT
NYR_ACTION_SCALE = f16.NY_R_CMD_LIMIT

# per-component normalization of the 16-element state vector (divisors);
# positions are scaled by tunnel length at observation build time
STATE_ANGLE_SCALE = math.pi
STATE_VT_SCALE = 1000.0
STATE_POW_SCALE = 100.0


@dataclass(frozen=True)
class EnvConfig:
    sensor: SensorConfig = field(default_factory=SensorConfig)
    reward_mode: str = "target_gates"
    observation_mode: str = "sensor_plus_state"
    frame_stack: int = 1
    action_dims: tuple = ACTION_DIM_ORDER
    init_randomization: str = "none"            # none | ring
    ring_displacement_factor: float = 1.5       # multiple of aircraft_radius
    dt: float = 1.0 / 30.0
    substeps: int = 3
    max_steps: int = 2000
    trim_speed: float = 500.0                   # ft/s
    seed: int | None = None

    def __post_init__(self):
        if self.reward_mode not in REWARD_MODES:
            raise ConfigError(f"reward_mode must be one of {REWARD_MODES}")
        if self.observation_mode not in OBSERVATION_MODES:
            raise ConfigError(f"observation_mode must be one of {OBSERVATION_MODES}")
        if self.frame_stack < 1:
            raise ConfigError("frame_stack must be >= 1")
        dims = tuple(self.action_dims)
        if not dims or any(d not in ACTION_DIM_ORDER for d in dims):
            raise ConfigError(f"action_dims entries must come from {ACTION_DIM_ORDER}")
        if len(set(dims)) != len(dims):
            raise ConfigError("action_dims must not repeat")
        if "pitch" not in dims or "roll" not in dims:
            raise ConfigError("action_dims must include pitch and roll")
        if tuple(sorted(dims, key=ACTION_DIM_ORDER.index)) != dims:
            raise ConfigError(f"action_dims must follow the order {ACTION_DIM_ORDER}")
        object.__setattr__(self, "action_dims", dims)
        if self.sensor.history_len not in (1, self.frame_stack):
            raise ConfigError(
                "sensor.history_len disagrees with frame_stack; set frame_stack")
        if self.init_randomization not in ("none", "ring"):
            raise ConfigError("init_randomization must be 'none' or 'ring'")
        if self.ring_displacement_factor < 0:
            raise ConfigError("ring_displacement_factor must be >= 0")
        if self.dt <= 0:
            raise ConfigError("dt must be > 0")
        if self.substeps < 1:
            raise ConfigError("substeps must be >= 1")
        if self.max_steps < 1:
            raise ConfigError("max_steps must be >= 1")


class StepResult(NamedTuple):
    observation: np.ndarray
    reward: float
    terminated: bool
    truncated: bool
    info: dict


def state_scales(world: TunnelWorld) -> np.ndarray:
    """Divisors that normalize the 16-element state vector."""
    return np.array([
        STATE_VT_SCALE,                      # vt
        STATE_ANGLE_SCALE, STATE_ANGLE_SCALE,            # alpha, beta
        STATE_ANGLE_SCALE, STATE_ANGLE_SCALE, STATE_ANGLE_SCALE,  # phi, theta, psi
        STATE_ANGLE_SCALE, STATE_ANGLE_SCALE, STATE_ANGLE_SCALE,  # p, q, r
        world.length, world.length, world.length,        # pn, pe, h
        STATE_POW_SCALE,                     # pow
        f16.ELEVATOR_LIMIT, f16.AILERON_LIMIT, f16.RUDDER_LIMIT,  # integrators
    ])


def build_observation(state: f16.AircraftState, scan_history, mode: str,
                      config: EnvConfig, world: TunnelWorld) -> np.ndarray:
    """Assemble the flat observation for one of the four observation modes.

    Sensor frames are normalized by max_range and stacked oldest first;
    the state vector is appended (normalized) in the *_plus_state modes.
    zero_masked keeps the sensor block's shape but fills it with zeros.
    """
    if mode not in OBSERVATION_MODES:
        raise ConfigError(f"observation_mode must be one of {OBSERVATION_MODES}")
    parts = []
    if mode != "state_only":
        if len(scan_history) != config.frame_stack:
            raise EpisodeError(
                f"scan history holds {len(scan_history)} frames, "
                f"expected {config.frame_stack}")
        block = np.concatenate([frame.ravel() for frame in scan_history])
        block = block / config.sensor.max_range
        if mode == "zero_masked":
            block = np.zeros_like(block)
        parts.append(block)
    if mode in ("sensor_plus_state", "state_only", "zero_masked"):
        vec = np.array(state.as_tuple()) / state_scales(world)
        parts.append(vec)
    return np.concatenate(parts)


def observation_size(config: EnvConfig) -> int:
    sensor = config.frame_stack * config.sensor.el_nodes * config.sensor.az_nodes
    if config.observation_mode == "sensor_only":
        return sensor
    if config.observation_mode == "state_only":
        return 16
    return sensor + 16


def compute_reward(mode: str, cross_distance: float, dt: float,
                   new_gate_rewards) -> float:
    """Per-step reward.  centerline_penalty charges the cross-section offset
    (ft) times dt; target_gates pays the sum of newly claimed gate values."""
    if mode == "centerline_penalty":
        return -cross_distance * dt
    if mode == "target_gates":
        return float(sum(new_gate_rewards))
    raise ConfigError(f"reward_mode must be one of {REWARD_MODES}")


class TunnelEnv:
    """Single corridor episode engine.  Not safe for concurrent sharing;
    independent instances may run in parallel."""

    def __init__(self, config: EnvConfig | None = None,
                 world: TunnelWorld | None = None):
        self.config = config or EnvConfig()
        self.world = world or make_tunnel()
        self.trim = f16.trim_solve(self.config.trim_speed,
                                   self.world.center_altitude)
        self._rng = np.random.default_rng(self.config.seed)
        self._state: f16.AircraftState | None = None
        self._history: deque = deque(maxlen=self.config.frame_stack)
        self._claimed: set = set()
        self._steps = 0
        self._done = True
        self._last_obs: np.ndarray | None = None

    # --- space descriptors, for binding layers ---

    def observation_space_info(self) -> dict:
        n = observation_size(self.config)
        sensor_n = 0 if self.config.observation_mode == "state_only" else \
            self.config.frame_stack * self.config.sensor.ray_count
        low = [0.0] * sensor_n + [None] * (n - sensor_n)
        high = [1.0] * sensor_n + [None] * (n - sensor_n)
        return {"shape": (n,), "low": low, "high": high}

    def action_space_info(self) -> dict:
        k = len(self.config.action_dims)
        return {"shape": (k,), "low": [-1.0] * k, "high": [1.0] * k,
                "dims": list(self.config.action_dims)}

    # --- action/request mapping ---

    def action_to_request(self, action) -> f16.ControlRequest:
        a = np.clip(np.asarray(action, dtype=float).ravel(), -1.0, 1.0)
        if a.shape != (len(self.config.action_dims),):
            raise EpisodeError(
                f"action must have shape ({len(self.config.action_dims)},)")
        if not np.all(np.isfinite(a)):
            raise EpisodeError("action must be finite")
        values = dict(zip(self.config.action_dims, a.tolist()))
        return f16.ControlRequest(
            nz_cmd=NZ_ACTION_SCALE * values.get("pitch", 0.0),
            ps_cmd=PS_ACTION_SCALE * values.get("roll", 0.0),
            ny_r_cmd=NYR_ACTION_SCALE * values.get("rudder", 0.0),
            throttle=(values["throttle"] + 1.0) / 2.0
            if "throttle" in values else self.trim.request.throttle,
        ).clamped()

    def request_to_action(self, request: f16.ControlRequest) -> np.ndarray:
        """Inverse of the action map (clamped); used by expert rollouts."""
        full = {
            "pitch": request.nz_cmd / NZ_ACTION_SCALE,
            "roll": request.ps_cmd / PS_ACTION_SCALE,
            "rudder": request.ny_r_cmd / NYR_ACTION_SCALE,
            "throttle": 2.0 * request.throttle - 1.0,
        }
        a = np.array([full[d] for d in self.config.action_dims])
        return np.clip(a, -1.0, 1.0)

    # --- episode contract ---

    def reset(self, seed: int | None = None):
        """Start an episode at trim, centered at the corridor entrance, with
        optional ring displacement of (east, altitude).  Identical seeds give
        bit-identical observations."""
        if seed is not None:
            self._rng = np.random.default_rng(seed)
        state = replace(self.trim.state, pn=0.0, pe=0.0,
                        h=self.world.center_altitude, psi=0.0)
        if self.config.init_randomization == "ring":
            angle = self._rng.uniform(0.0, 2.0 * math.pi)
            offset = self.config.ring_displacement_factor * self.world.aircraft_radius
            state = replace(state, pe=offset * math.cos(angle),
                            h=state.h + offset * math.sin(angle))
        self._state = state
        self._claimed = set()
        self._steps = 0
        self._done = False
        scan = sensor_scan(state, self.config.sensor, self.world)
        self._history = deque([scan.copy() for _ in range(self.config.frame_stack)],
                              maxlen=self.config.frame_stack)
        obs = build_observation(state, self._history, self.config.observation_mode,
                                self.config, self.world)
        self._last_obs = obs
        return obs, self._info(collision=False, new_gates=[], diverged=False)

    def step(self, action) -> StepResult:
        if self._done or self._state is None:
            raise EpisodeError("step() called on a finished episode; call reset()")
        request = self.action_to_request(action)
        prev_pn = self._state.pn
        diverged = False
        try:
            self._state = f16.step_rk4(self._state, request, self.config.dt,
                                       self.config.substeps)
        except f16.DynamicsDivergedError:
            diverged = True
        self._steps += 1

        state = self._state
        new_gates = []
        collision = False
        success = False
        if not diverged:
            for idx in gates_passed(prev_pn, state.pn, self.world):
                if idx not in self._claimed:
                    self._claimed.add(idx)
                    new_gates.append(idx)
            success = state.pn >= self.world.length
            if not success:
                collision = collision_check((state.pn, state.pe, state.h),
                                            self.world)

        terminated = diverged or success or collision
        truncated = self._steps >= self.config.max_steps
        self._done = terminated or truncated

        if diverged:
            reward = 0.0
        else:
            cross = math.hypot(state.pe, state.h - self.world.center_altitude)
            reward = compute_reward(
                self.config.reward_mode, cross, self.config.dt,
                [self.world.gate_rewards[i] for i in new_gates])
            if self._try_scan(state):
                self._last_obs = build_observation(
                    state, self._history, self.config.observation_mode,
                    self.config, self.world)
        obs = self._last_obs

        info = self._info(collision=collision, new_gates=new_gates,
                          diverged=diverged)
        info["success"] = success
        info["request"] = [request.nz_cmd, request.ps_cmd, request.ny_r_cmd,
                           request.throttle]
        return StepResult(obs, reward, terminated, truncated, info)

    def _try_scan(self, state) -> bool:
        # after a terminal overshoot the pose can leave the corridor; the
        # last valid frame is then kept as the final observation
        if not (0.0 <= state.pn < self.world.length
                and abs(state.pe) < self.world.half_width
                and abs(state.h - self.world.center_altitude) < self.world.half_height):
            return False
        self._history.append(sensor_scan(state, self.config.sensor, self.world))
        return True

    def _info(self, collision: bool, new_gates, diverged: bool) -> dict:
        state = self._state
        return {
            "collision": collision,
            "gates": list(new_gates),
            "gates_total": len(self._claimed),
            "pn": state.pn,
            "state": list(state.as_tuple()),
            "diverged": diverged,
        }
