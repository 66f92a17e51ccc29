"""Run configuration: YAML documents validated against the published schema.

Top-level keys: environment (tunnel | mission), seed, episodes, expert,
out, render_dir,
env { sensor {...}, reward_mode, observation_mode, frame_stack, action_dims,
init_randomization, ring_displacement_factor, dt, substeps, max_steps,
trim_speed }, world { length, half_width, half_height, center_altitude,
aircraft_radius, gate_count, gate_reward_step }, mission { bounds, terrain,
zones, goal_center, goal_radius, grid_resolution, perceived_offset,
plan_margin, forward_sensor {...}, start, start_jitter, cruise_altitude,
cruise_speed, rangefinder_rays, rangefinder_range, gps_denied, dt, substeps,
max_steps }.  Unknown keys are rejected by name.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
from dataclasses import dataclass, field

import yaml

from .env import EnvConfig
from .errors import ConfigError
from .mission import ForwardSensor, MissionConfig, TerrainPolygon
from .world import SensorConfig, TunnelWorld, make_tunnel

ENVIRONMENTS = ("tunnel", "mission")
EXPERT_NAMES = ("pid", "waypoint", "none")


@dataclass
class RunConfig:
    environment: str = "tunnel"
    seed: int = 0
    episodes: int = 1
    expert: str = "waypoint"
    out: str | None = None          # default trajectory/dataset output path
    render_dir: str | None = None   # when set, run also renders frames here
    env: EnvConfig = field(default_factory=EnvConfig)
    world: TunnelWorld = field(default_factory=make_tunnel)
    mission: MissionConfig = field(default_factory=MissionConfig)


def _check_keys(data: dict, allowed, where: str):
    for key in data:
        if key not in allowed:
            raise ConfigError(f"unknown key '{key}' in {where}")


def _get(data: dict, key: str, kind, where: str, default):
    if key not in data:
        return default
    value = data[key]
    if kind is float and isinstance(value, int) and not isinstance(value, bool):
        value = float(value)
    if kind is not None and not isinstance(value, kind):
        raise ConfigError(f"{where}.{key} must be {getattr(kind, '__name__', kind)}")
    return value


def _sensor_from_dict(data: dict, where: str) -> SensorConfig:
    _check_keys(data, ("az_min", "az_max", "el_min", "el_max", "az_step",
                       "el_step", "max_range", "history_len"), where)
    base = SensorConfig()
    kwargs = {}
    for name in ("az_min", "az_max", "el_min", "el_max", "az_step", "el_step",
                 "max_range"):
        kwargs[name] = _get(data, name, float, where, getattr(base, name))
    kwargs["history_len"] = _get(data, "history_len", int, where, base.history_len)
    return SensorConfig(**kwargs)


def env_config_from_dict(data: dict, where: str = "env") -> EnvConfig:
    _check_keys(data, ("sensor", "reward_mode", "observation_mode", "frame_stack",
                       "action_dims", "init_randomization",
                       "ring_displacement_factor", "dt", "substeps", "max_steps",
                       "trim_speed"), where)
    base = EnvConfig()
    sensor = _sensor_from_dict(_get(data, "sensor", dict, where, {}),
                               f"{where}.sensor")
    dims = _get(data, "action_dims", list, where, list(base.action_dims))
    return EnvConfig(
        sensor=sensor,
        reward_mode=_get(data, "reward_mode", str, where, base.reward_mode),
        observation_mode=_get(data, "observation_mode", str, where,
                              base.observation_mode),
        frame_stack=_get(data, "frame_stack", int, where, base.frame_stack),
        action_dims=tuple(dims),
        init_randomization=_get(data, "init_randomization", str, where,
                                base.init_randomization),
        ring_displacement_factor=_get(data, "ring_displacement_factor", float,
                                      where, base.ring_displacement_factor),
        dt=_get(data, "dt", float, where, base.dt),
        substeps=_get(data, "substeps", int, where, base.substeps),
        max_steps=_get(data, "max_steps", int, where, base.max_steps),
        trim_speed=_get(data, "trim_speed", float, where, base.trim_speed),
    )


def world_from_dict(data: dict, where: str = "world") -> TunnelWorld:
    _check_keys(data, ("length", "half_width", "half_height", "center_altitude",
                       "aircraft_radius", "gate_count", "gate_reward_step"), where)
    return make_tunnel(
        length=_get(data, "length", float, where, 9114.0),
        half_width=_get(data, "half_width", float, where, None),
        half_height=_get(data, "half_height", float, where, None),
        center_altitude=_get(data, "center_altitude", float, where, 1000.0),
        aircraft_radius=_get(data, "aircraft_radius", float, where, None),
        gate_count=_get(data, "gate_count", int, where, 380),
        gate_reward_step=_get(data, "gate_reward_step", float, where, 100.0),
    )


def mission_from_dict(data: dict, where: str = "mission") -> MissionConfig:
    _check_keys(data, ("bounds", "terrain", "zones", "goal_center", "goal_radius",
                       "grid_resolution", "perceived_offset", "plan_margin",
                       "forward_sensor", "start", "start_jitter",
                       "cruise_altitude", "cruise_speed", "rangefinder_rays",
                       "rangefinder_range", "gps_denied", "dt", "substeps",
                       "max_steps"), where)
    base = MissionConfig()
    kwargs = {}
    if "bounds" in data:
        bounds = _get(data, "bounds", list, where, None)
        if len(bounds) != 4:
            raise ConfigError(f"{where}.bounds must have 4 numbers")
        kwargs["bounds"] = tuple(float(v) for v in bounds)
    if "terrain" in data:
        polys = []
        for i, item in enumerate(_get(data, "terrain", list, where, [])):
            pwhere = f"{where}.terrain[{i}]"
            if not isinstance(item, dict):
                raise ConfigError(f"{pwhere} must be a mapping")
            _check_keys(item, ("vertices", "height"), pwhere)
            verts = item.get("vertices")
            if not isinstance(verts, list) or len(verts) < 3:
                raise ConfigError(f"{pwhere}.vertices must list >= 3 points")
            polys.append(TerrainPolygon(
                vertices=tuple((float(v[0]), float(v[1])) for v in verts),
                height=float(item.get("height", 3000.0))))
        kwargs["terrain"] = tuple(polys)
    if "zones" in data:
        zones = []
        for i, item in enumerate(_get(data, "zones", list, where, [])):
            if not isinstance(item, (list, tuple)) or len(item) != 3:
                raise ConfigError(
                    f"{where}.zones[{i}] must be [center_n, center_e, radius]")
            zones.append(tuple(float(v) for v in item))
        kwargs["zones"] = tuple(zones)
    if "goal_center" in data:
        gc = _get(data, "goal_center", list, where, None)
        if len(gc) != 2:
            raise ConfigError(f"{where}.goal_center must have 2 numbers")
        kwargs["goal_center"] = (float(gc[0]), float(gc[1]))
    if "start" in data:
        st = _get(data, "start", list, where, None)
        if len(st) != 2:
            raise ConfigError(f"{where}.start must have 2 numbers")
        kwargs["start"] = (float(st[0]), float(st[1]))
    if "forward_sensor" in data:
        fs = _get(data, "forward_sensor", dict, where, {})
        fwhere = f"{where}.forward_sensor"
        _check_keys(fs, ("half_angle_deg", "range_ft", "arc_points"), fwhere)
        kwargs["forward_sensor"] = ForwardSensor(
            half_angle_deg=_get(fs, "half_angle_deg", float, fwhere, 30.0),
            range_ft=_get(fs, "range_ft", float, fwhere, 6000.0),
            arc_points=_get(fs, "arc_points", int, fwhere, 9))
    for name, kind in (("goal_radius", float), ("grid_resolution", float),
                       ("perceived_offset", float), ("plan_margin", float),
                       ("start_jitter", float), ("cruise_altitude", float),
                       ("cruise_speed", float), ("rangefinder_rays", int),
                       ("rangefinder_range", float), ("gps_denied", bool),
                       ("dt", float), ("substeps", int), ("max_steps", int)):
        if name in data:
            kwargs[name] = _get(data, name, kind, where, getattr(base, name))
    return MissionConfig(**kwargs)


def parse_run_config(data: dict, source: str = "<config>") -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError(f"{source}: top level must be a mapping")
    _check_keys(data, ("environment", "seed", "episodes", "expert", "out",
                       "render_dir", "env", "world", "mission"), source)
    environment = _get(data, "environment", str, source, "tunnel")
    if environment not in ENVIRONMENTS:
        raise ConfigError(f"environment must be one of {ENVIRONMENTS}")
    expert = _get(data, "expert", str, source, "waypoint")
    if expert not in EXPERT_NAMES:
        raise ConfigError(f"expert must be one of {EXPERT_NAMES}")
    episodes = _get(data, "episodes", int, source, 1)
    if episodes < 0:
        raise ConfigError("episodes must be >= 0")
    return RunConfig(
        environment=environment,
        seed=_get(data, "seed", int, source, 0),
        episodes=episodes,
        expert=expert,
        out=_get(data, "out", str, source, None),
        render_dir=_get(data, "render_dir", str, source, None),
        env=env_config_from_dict(_get(data, "env", dict, source, {})),
        world=world_from_dict(_get(data, "world", dict, source, {})),
        mission=mission_from_dict(_get(data, "mission", dict, source, {})),
    )


def load_config(path) -> RunConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = yaml.safe_load(fh)
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: invalid YAML: {exc}") from exc
    if data is None:
        data = {}
    return parse_run_config(data, source=str(path))


# --- canonical dictionaries and hashing ---


def sensor_to_dict(sensor: SensorConfig) -> dict:
    return dataclasses.asdict(sensor)


def env_config_to_dict(cfg: EnvConfig) -> dict:
    out = dataclasses.asdict(cfg)
    out["sensor"] = sensor_to_dict(cfg.sensor)
    out["action_dims"] = list(cfg.action_dims)
    out.pop("seed", None)       # seeding is run state, not env identity
    return out


def world_to_dict(world: TunnelWorld) -> dict:
    return {
        "length": world.length,
        "half_width": world.half_width,
        "half_height": world.half_height,
        "center_altitude": world.center_altitude,
        "aircraft_radius": world.aircraft_radius,
        "gate_count": len(world.gates),
        "gate_reward_step": world.gates[0][1] if world.gates else 0.0,
    }


def mission_to_dict(cfg: MissionConfig) -> dict:
    return {
        "bounds": list(cfg.bounds),
        "terrain": [{"vertices": [list(v) for v in p.vertices],
                     "height": p.height} for p in cfg.terrain],
        "zones": [list(z) for z in cfg.zones],
        "goal_center": list(cfg.goal_center),
        "goal_radius": cfg.goal_radius,
        "grid_resolution": cfg.grid_resolution,
        "perceived_offset": cfg.perceived_offset,
        "plan_margin": cfg.plan_margin,
        "forward_sensor": {"half_angle_deg": cfg.forward_sensor.half_angle_deg,
                           "range_ft": cfg.forward_sensor.range_ft,
                           "arc_points": cfg.forward_sensor.arc_points},
        "start": list(cfg.start),
        "start_jitter": cfg.start_jitter,
        "cruise_altitude": cfg.cruise_altitude,
        "cruise_speed": cfg.cruise_speed,
        "rangefinder_rays": cfg.rangefinder_rays,
        "rangefinder_range": cfg.rangefinder_range,
        "gps_denied": cfg.gps_denied,
        "dt": cfg.dt,
        "substeps": cfg.substeps,
        "max_steps": cfg.max_steps,
    }


def run_config_to_dict(cfg: RunConfig) -> dict:
    out = {
        "environment": cfg.environment,
        "seed": cfg.seed,
        "episodes": cfg.episodes,
        "expert": cfg.expert,
        "env": env_config_to_dict(cfg.env),
        "world": world_to_dict(cfg.world),
        "mission": mission_to_dict(cfg.mission),
    }
    if cfg.out is not None:
        out["out"] = cfg.out
    if cfg.render_dir is not None:
        out["render_dir"] = cfg.render_dir
    return out


def config_hash(data: dict) -> str:
    canon = json.dumps(data, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()[:12]


def setup_hash(cfg: RunConfig) -> str:
    """Hash of the environment-defining parts of a run config (environment,
    env, world, mission), ignoring seed/episodes/expert."""
    data = run_config_to_dict(cfg)
    return config_hash({k: data[k] for k in ("environment", "env", "world",
                                             "mission")})


def dump_config(cfg: RunConfig, path=None) -> dict:
    data = run_config_to_dict(cfg)
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            yaml.safe_dump(data, fh, sort_keys=True)
    return data
