"""Command-line driver.

Subcommands: trim (print a trim solution), run (episodes with an expert,
zero actions, or a replayed action tape), rollout (imitation dataset
generation), plan (A* over a scene file), render (SVG frames from a
trajectory), serve (JSON-lines environment server on stdio for bindings).
Every subcommand is deterministic given its config and seed.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import f16
from .config import (RunConfig, load_config, mission_from_dict,
                     parse_run_config, run_config_to_dict, setup_hash)
from .env import TunnelEnv
from .errors import ConfigError, EpisodeError
from .experts import make_expert
from .mission import MissionEnv, Unreachable, astar_plan, build_mission, \
    build_plan_grid, _nearest_free_cell
from .recording import (TrajectoryRecord, read_action_tape, read_trajectory,
                        write_path_file, write_trajectory)
from .render import render_frame
from .world import make_tunnel


def _jsonable(value):
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def _make_env(cfg: RunConfig):
    if cfg.environment == "tunnel":
        return TunnelEnv(cfg.env, cfg.world)
    return MissionEnv(cfg.mission)


def _episode_records(env, cfg: RunConfig, episode: int, seed: int, control,
                     record_obs: bool, frames=None):
    """Run one episode; control is an expert object, a list of actions, or
    None for zero/autopilot control.  Returns trajectory records."""
    obs, info = env.reset(seed=seed)
    if hasattr(control, "reset"):
        control.reset()
    records = []
    step = 0
    tunnel = isinstance(env, TunnelEnv)
    while True:
        if isinstance(control, list):
            if step >= len(control):
                break
            action = control[step]
        elif hasattr(control, "act"):
            state = f16.AircraftState.from_tuple(info["state"])
            action = env.request_to_action(control.act(state))
        else:
            action = None if not tunnel else \
                [0.0] * len(env.config.action_dims)
        result = env.step(action) if tunnel or action is None else \
            env.step(action=action)
        obs, reward, terminated, truncated, info = result
        records.append(TrajectoryRecord(
            episode=episode, step=step,
            state=[float(v) for v in info["state"]],
            action=[float(v) for v in np.atleast_1d(action).tolist()]
            if action is not None else [],
            request=[float(v) for v in info["request"]],
            reward=float(reward), terminated=bool(terminated),
            truncated=bool(truncated),
            collision=bool(info.get("collision", False)
                           or info.get("terrain_collision", False)),
            gates=list(info.get("gates", [])),
            observation=[float(v) for v in obs] if record_obs else None,
        ))
        if frames is not None:
            frames.append((episode, step, f16.AircraftState.from_tuple(info["state"])))
        step += 1
        if terminated or truncated:
            break
    return records


def cmd_trim(args) -> int:
    try:
        result = f16.trim_solve(args.vt, args.alt)
    except (f16.TrimError, f16.DynamicsError) as exc:
        print(f"trim failed: {exc}", file=sys.stderr)
        return 1
    if args.json:
        print(json.dumps({
            "vt": args.vt, "alt": args.alt,
            "alpha_rad": result.state.alpha,
            "elevator_deg": result.surfaces.elevator,
            "throttle": result.request.throttle,
            "pow": result.state.pow,
            "residual": result.residual,
        }))
    else:
        print(f"trim at vt={args.vt:g} ft/s, h={args.alt:g} ft:")
        print(f"  alpha    = {math.degrees(result.state.alpha):.4f} deg")
        print(f"  elevator = {result.surfaces.elevator:.4f} deg")
        print(f"  throttle = {result.request.throttle:.5f}")
        print(f"  power    = {result.state.pow:.3f} %")
        print(f"  residual = {result.residual:.3e}")
    return 0


def _resolve_out(args, cfg: RunConfig):
    out = args.out or cfg.out
    if not out:
        print("error: no output path (--out flag or 'out' config key)",
              file=sys.stderr)
    return out


def cmd_run(args) -> int:
    cfg = load_config(args.config)
    if args.episodes is not None:
        cfg.episodes = args.episodes
    if args.seed is not None:
        cfg.seed = args.seed
    if args.expert is not None:
        cfg.expert = args.expert
    out = _resolve_out(args, cfg)
    if not out:
        return 2
    render_dir = args.render_dir or cfg.render_dir
    env = _make_env(cfg)

    replay = None
    if args.replay:
        _, replay = read_action_tape(args.replay)

    frames = [] if render_dir else None
    all_records = []
    for ep in range(cfg.episodes):
        if replay is not None:
            control = replay.get(ep, [])
        elif cfg.environment == "tunnel" and cfg.expert != "none":
            control = make_expert(cfg.expert, env)
        else:
            control = None
        all_records += _episode_records(env, cfg, ep, cfg.seed + ep, control,
                                        args.record_obs, frames)
    n = write_trajectory(out, all_records, setup_hash(cfg),
                         extra={"environment": cfg.environment,
                                "episodes": cfg.episodes, "seed": cfg.seed})
    print(f"wrote {n} records to {out}")

    if render_dir:
        import os
        os.makedirs(render_dir, exist_ok=True)
        world = cfg.world if cfg.environment == "tunnel" else env.world
        for ep, step, state in frames:
            svg = render_frame(state, world, style=cfg.environment)
            name = f"ep{ep:03d}_step{step:05d}.svg"
            with open(os.path.join(render_dir, name), "w") as fh:
                fh.write(svg)
        print(f"wrote {len(frames)} frames to {render_dir}")
    return 0


def _rollout_chunk(payload):
    """Worker entry: one env instance per worker, episodes are seed-addressed
    so any split of episode ids reproduces the sequential result."""
    cfg_dict, episode_ids = payload
    from .experts import rollout_episode
    cfg = parse_run_config(cfg_dict)
    env = TunnelEnv(cfg.env, cfg.world)
    expert = make_expert(cfg.expert, env)
    chash = setup_hash(cfg)
    return [rollout_episode(env, expert, ep, cfg.seed + ep, chash)
            for ep in episode_ids]


def cmd_rollout(args) -> int:
    from .experts import export_dataset, rollout_expert
    cfg = load_config(args.config)
    if args.episodes is not None:
        cfg.episodes = args.episodes
    if args.seed is not None:
        cfg.seed = args.seed
    if args.expert is not None:
        cfg.expert = args.expert
    out = _resolve_out(args, cfg)
    if not out:
        return 2
    if cfg.environment != "tunnel":
        print("rollout requires a tunnel environment config", file=sys.stderr)
        return 1
    if cfg.expert == "none":
        print("rollout requires an expert (pid or waypoint)", file=sys.stderr)
        return 1

    if args.workers > 1 and cfg.episodes > 1:
        import multiprocessing
        ids = list(range(cfg.episodes))
        chunks = [ids[k::args.workers] for k in range(args.workers)]
        payload = run_config_to_dict(cfg)
        with multiprocessing.Pool(args.workers) as pool:
            parts = pool.map(_rollout_chunk, [(payload, chunk)
                                              for chunk in chunks if chunk])
        traces = sorted((t for part in parts for t in part),
                        key=lambda t: t.episode_id)
    else:
        env = TunnelEnv(cfg.env, cfg.world)
        expert = make_expert(cfg.expert, env)
        traces = rollout_expert(env, expert, cfg.episodes, cfg.seed,
                                config_hash=setup_hash(cfg))
    summary = export_dataset(traces, out)
    print(json.dumps(summary))
    return 0


def cmd_plan(args) -> int:
    with open(args.scene, "r", encoding="utf-8") as fh:
        import yaml
        data = yaml.safe_load(fh) or {}
    if "mission" in data:
        mission_cfg = parse_run_config(data, source=str(args.scene)).mission
    else:
        mission_cfg = mission_from_dict(data, where=str(args.scene))
    world = build_mission(mission_cfg, seed=args.seed)
    grid = build_plan_grid(world, extra_margin=mission_cfg.plan_margin)
    start = _nearest_free_cell(grid, grid.cell_of(*mission_cfg.start))
    goal = _nearest_free_cell(grid, grid.cell_of(*world.goal_center))
    try:
        if start is None or goal is None:
            raise Unreachable("blocked_start" if start is None else "blocked_goal")
        path = astar_plan(grid, start, goal)
    except Unreachable as exc:
        print(f"planning failed: {exc}", file=sys.stderr)
        return 1
    n = write_path_file(args.out, path)
    print(f"wrote path of {n} cells (cost {path.cost:.3f}) to {args.out}")
    return 0


def cmd_render(args) -> int:
    import os
    cfg = load_config(args.config)
    header, records = read_trajectory(args.traj, expect_hash=setup_hash(cfg))
    style = args.style or header.get("environment", cfg.environment)
    if style == "tunnel":
        world = cfg.world
    else:
        world = build_mission(cfg.mission, seed=header.get("seed", cfg.seed))
    os.makedirs(args.out, exist_ok=True)
    for rec in records:
        state = f16.AircraftState.from_tuple(rec.state)
        svg = render_frame(state, world, style=style)
        name = f"ep{rec.episode:03d}_step{rec.step:05d}.svg"
        with open(os.path.join(args.out, name), "w") as fh:
            fh.write(svg)
    print(f"wrote {len(records)} frames to {args.out}")
    return 0


def cmd_serve(args) -> int:
    """JSON-lines environment server: make / spaces / reset / step / close."""
    env = None

    def spaces():
        return {"observation_space": _jsonable(env.observation_space_info()),
                "action_space": _jsonable(env.action_space_info())}

    out = sys.stdout
    for line in sys.stdin:
        line = line.strip()
        if not line:
            continue
        try:
            req = json.loads(line)
            op = req.get("op")
            if op == "make":
                cfg = parse_run_config(req.get("config", {}), source="<serve>")
                env = _make_env(cfg)
                resp = {"ok": True, "config_hash": setup_hash(cfg), **spaces()}
            elif op == "spaces":
                resp = {"ok": True, **spaces()}
            elif op == "reset":
                obs, info = env.reset(seed=req.get("seed"))
                resp = {"ok": True, "observation": obs.tolist(),
                        "info": _jsonable(info)}
            elif op == "step":
                action = req.get("action")
                result = env.step(action)
                resp = {"ok": True, "observation": result[0].tolist(),
                        "reward": float(result[1]),
                        "terminated": bool(result[2]),
                        "truncated": bool(result[3]),
                        "info": _jsonable(result[4])}
            elif op == "close":
                out.write(json.dumps({"ok": True}) + "\n")
                out.flush()
                break
            else:
                resp = {"ok": False, "error": f"unknown op '{op}'"}
        except (ConfigError, EpisodeError, f16.DynamicsError, ValueError,
                AttributeError, KeyError, TypeError) as exc:
            resp = {"ok": False, "error": f"{type(exc).__name__}: {exc}"}
        out.write(json.dumps(resp) + "\n")
        out.flush()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tunnelsim",
        description="Corridor-flight and mission environments for an F-16-class aircraft")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("trim", help="solve and print straight-and-level trim")
    p.add_argument("--vt", type=float, required=True, help="airspeed, ft/s")
    p.add_argument("--alt", type=float, required=True, help="altitude, ft")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_trim)

    p = sub.add_parser("run", help="run episodes and record a trajectory file")
    p.add_argument("--config", required=True)
    p.add_argument("--episodes", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--expert", choices=["pid", "waypoint", "none"])
    p.add_argument("--replay", help="action tape to replay instead of an expert")
    p.add_argument("--out", help="trajectory path (default: 'out' config key)")
    p.add_argument("--record-obs", action="store_true",
                   help="include observations in trajectory records")
    p.add_argument("--render-dir", help="also write one SVG frame per step")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("rollout", help="generate an imitation-learning dataset")
    p.add_argument("--config", required=True)
    p.add_argument("--episodes", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--expert", choices=["pid", "waypoint"])
    p.add_argument("--out", help="dataset path (default: 'out' config key)")
    p.add_argument("--workers", type=int, default=1,
                   help="parallel episode workers (same output as sequential)")
    p.set_defaults(func=cmd_rollout)

    p = sub.add_parser("plan", help="A* plan over a mission scene file")
    p.add_argument("--scene", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("render", help="render SVG frames from a trajectory file")
    p.add_argument("--traj", required=True)
    p.add_argument("--config", required=True)
    p.add_argument("--style", choices=["tunnel", "mission"])
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("serve", help="JSON-lines environment server on stdio")
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ConfigError, f16.TrimError, EpisodeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
