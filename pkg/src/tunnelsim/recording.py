"""Line-oriented record files.

Every file is a single JSON header line followed by one JSON record per line,
so long runs can stream/append and partial files stay readable.  Floats are
written with shortest-repr JSON and therefore round-trip bit-exactly.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import asdict, dataclass

FORMAT_VERSION = 1
TOOL_VERSION = "tunnelsim 0.1.0"


class RecordFormatError(ValueError):
    """Malformed record file; message carries path and line number."""


def _dump(obj) -> str:
    return json.dumps(obj, separators=(",", ":"), sort_keys=True, allow_nan=False)


def write_records(path, kind: str, header: dict, records) -> int:
    head = {"kind": kind, "format_version": FORMAT_VERSION, "tool": TOOL_VERSION}
    head.update(header)
    n = 0
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(_dump(head) + "\n")
        for rec in records:
            fh.write(_dump(rec) + "\n")
            n += 1
    return n


def read_records(path, expect_kind: str | None = None):
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise RecordFormatError(f"{path}:1: empty file (missing header line)")

    def parse(line: str, lineno: int):
        try:
            return json.loads(line)
        except json.JSONDecodeError as exc:
            raise RecordFormatError(
                f"{path}:{lineno}: invalid record line: {exc}") from exc

    header = parse(lines[0], 1)
    if not isinstance(header, dict) or "kind" not in header:
        raise RecordFormatError(f"{path}:1: first line is not a file header")
    if expect_kind is not None and header["kind"] != expect_kind:
        raise RecordFormatError(
            f"{path}:1: expected a '{expect_kind}' file, found '{header['kind']}'")
    records = [parse(line, i + 2) for i, line in enumerate(lines[1:]) if line]
    return header, records


# --- trajectories ---


@dataclass
class TrajectoryRecord:
    episode: int
    step: int
    state: list             # 16-element state after the step
    action: list
    request: list           # (nz_cmd, ps_cmd, ny_r_cmd, throttle)
    reward: float
    terminated: bool
    truncated: bool
    collision: bool
    gates: list
    observation: list | None = None


def write_trajectory(path, records, config_hash: str, extra: dict | None = None) -> int:
    header = {"config_hash": config_hash}
    if extra:
        header.update(extra)
    return write_records(path, "trajectory", header,
                         (asdict(r) for r in records))


def read_trajectory(path, expect_hash: str | None = None):
    header, raw = read_records(path, expect_kind="trajectory")
    if expect_hash is not None and header.get("config_hash") != expect_hash:
        warnings.warn(
            f"{path}: config hash {header.get('config_hash')!r} does not match "
            f"expected {expect_hash!r}; records may come from another setup")
    records = []
    last = {}
    for i, rec in enumerate(raw):
        tr = TrajectoryRecord(**rec)
        prev = last.get(tr.episode)
        if prev is not None and tr.step <= prev:
            raise RecordFormatError(
                f"{path}:{i + 2}: step indices not increasing in episode {tr.episode}")
        last[tr.episode] = tr.step
        records.append(tr)
    return header, records


# --- imitation datasets ---


def write_dataset(path, traces, config_hash: str = "") -> int:
    def rows():
        for trace in traces:
            for rec in trace.records:
                yield {
                    "episode": rec.episode_id,
                    "step": rec.step,
                    "observation": [float(v) for v in rec.observation],
                    "action": [float(v) for v in rec.action],
                    "state": [float(v) for v in rec.state],
                    "outcome": rec.outcome,
                }
    return write_records(path, "dataset", {"config_hash": config_hash}, rows())


def read_dataset(path):
    return read_records(path, expect_kind="dataset")


# --- planner paths and action tapes ---


def write_path_file(path, plan, scene_hash: str = "") -> int:
    header = {"config_hash": scene_hash, "cost": plan.cost}
    return write_records(path, "path", header,
                         ({"cell": list(c), "pn": w[0], "pe": w[1]}
                          for c, w in zip(plan.cells, plan.waypoints)))


def read_path_file(path):
    return read_records(path, expect_kind="path")


def write_action_tape(path, actions, config_hash: str = "") -> int:
    """actions: iterable of (episode, step, action list)."""
    return write_records(path, "actions", {"config_hash": config_hash},
                         ({"episode": e, "step": s, "action": list(map(float, a))}
                          for e, s, a in actions))


def read_action_tape(path):
    header, raw = read_records(path, expect_kind="actions")
    episodes: dict = {}
    for rec in raw:
        episodes.setdefault(rec["episode"], []).append(rec["action"])
    return header, episodes
