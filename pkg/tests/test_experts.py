"""Expert controllers, rollouts and dataset export."""

import math
from dataclasses import replace

import numpy as np
import pytest

from tunnelsim import f16
from tunnelsim.env import EnvConfig, TunnelEnv
from tunnelsim.experts import (PidGains, PidMemory, Waypoint, export_dataset,
                               make_expert, pid_expert, rollout_expert,
                               waypoint_autopilot)
from tunnelsim.recording import read_dataset
from tunnelsim.world import SensorConfig, make_tunnel

SPARSE = SensorConfig(az_min=-60.0, az_max=60.0, az_step=60.0,
                      el_min=-60.0, el_max=60.0, el_step=60.0)
WORLD = make_tunnel()


def _state(pe=0.0, h=WORLD.center_altitude):
    return f16.AircraftState(vt=500.0, alpha=0.03, beta=0.0, phi=0.0,
                             theta=0.03, psi=0.0, p=0.0, q=0.0, r=0.0,
                             pn=100.0, pe=pe, h=h, pow=9.0)


def test_pid_gain_defaults_exact():
    g = PidGains()
    assert (g.kp_y, g.kd_y, g.kp_x, g.kd_x) == (-0.002, -0.2, -0.001, -0.1)


def test_pid_zero_error_zero_command():
    req, _ = pid_expert(_state(), PidMemory(), WORLD, trim_throttle=0.13)
    assert req.nz_cmd == 0.0
    assert req.ps_cmd == 0.0
    assert req.throttle == 0.13


def test_pid_formula_direct_evaluation():
    # commands come from the previous step's errors, exactly per the law
    mem = PidMemory(e_y=100.0, de_y=10.0, e_x=0.0, de_x=0.0)
    req, _ = pid_expert(_state(), mem, WORLD)
    # -0.002*100 - 0.2*10 = -2.2, then clamped to the request envelope
    assert req.nz_cmd == f16.NZ_CMD_MIN
    mem = PidMemory(e_y=50.0, de_y=5.0)
    req, _ = pid_expert(_state(), mem, WORLD)
    assert req.nz_cmd == pytest.approx(-0.002 * 50.0 - 0.2 * 5.0, abs=1e-15)
    mem = PidMemory(e_x=-50.0, de_x=0.0)
    req, _ = pid_expert(_state(), mem, WORLD)
    assert req.ps_cmd == pytest.approx(0.05, abs=1e-15)


def test_pid_linearity_before_clamp():
    mem1 = PidMemory(e_y=30.0, de_y=2.0, e_x=-20.0, de_x=1.0)
    mem2 = PidMemory(e_y=60.0, de_y=4.0, e_x=-40.0, de_x=2.0)
    r1, _ = pid_expert(_state(), mem1, WORLD)
    r2, _ = pid_expert(_state(), mem2, WORLD)
    assert r2.nz_cmd == pytest.approx(2.0 * r1.nz_cmd, rel=1e-12)
    assert r2.ps_cmd == pytest.approx(2.0 * r1.ps_cmd, rel=1e-12)


def test_pid_memory_advances_with_first_differences():
    state = _state(pe=12.0, h=WORLD.center_altitude + 30.0)
    _, mem = pid_expert(state, PidMemory(), WORLD)
    assert mem.e_y == 30.0
    assert mem.e_x == 12.0
    assert mem.de_y == 30.0      # first difference against the zero init
    state2 = _state(pe=10.0, h=WORLD.center_altitude + 25.0)
    _, mem2 = pid_expert(state2, mem, WORLD)
    assert mem2.de_y == pytest.approx(-5.0)
    assert mem2.de_x == pytest.approx(-2.0)


def test_pid_longitudinal_disturbance_decays():
    # 20 ft altitude offset: error decays without divergence over 15 s
    env = TunnelEnv(EnvConfig(sensor=SPARSE, observation_mode="sensor_only",
                              max_steps=2000))
    env.reset(seed=0)
    env._state = replace(env._state, h=env.world.center_altitude + 20.0)
    expert = make_expert("pid", env)
    errors = []
    info = {"state": list(env._state.as_tuple())}
    for _ in range(450):
        state = f16.AircraftState.from_tuple(info["state"])
        action = env.request_to_action(expert.act(state))
        _, _, term, trunc, info = env.step(action)
        errors.append(abs(info["state"][11] - env.world.center_altitude))
        if term or trunc:
            break
    assert not term                     # never hits a wall
    assert max(errors) < 60.0           # bounded
    assert errors[-1] < 10.0            # decayed


def test_waypoint_aligned_near_trim():
    req = waypoint_autopilot(_state(), Waypoint(WORLD.length, 0.0,
                                                WORLD.center_altitude),
                             speed_ref=500.0, trim_throttle=0.13)
    assert abs(req.ps_cmd) < 0.01
    assert abs(req.nz_cmd) < 0.05


def test_waypoint_east_commands_right_roll():
    req = waypoint_autopilot(_state(), Waypoint(100.0, 5000.0, 1000.0),
                             speed_ref=500.0, trim_throttle=0.13)
    assert req.ps_cmd > 0.1


def test_waypoint_coincident_holds_trim():
    state = _state()
    req = waypoint_autopilot(state, Waypoint(state.pn, state.pe, state.h),
                             speed_ref=500.0, trim_throttle=0.13)
    assert req == f16.ControlRequest(throttle=0.13)


def test_waypoint_expert_completes_tunnel():
    env = TunnelEnv(EnvConfig(sensor=SPARSE, observation_mode="sensor_only",
                              init_randomization="ring"))
    traces = rollout_expert(env, make_expert("waypoint", env), episodes=3,
                            seed=17)
    assert [t.outcome for t in traces] == ["reached_end"] * 3


def test_rollout_zero_episodes():
    env = TunnelEnv(EnvConfig(sensor=SPARSE, observation_mode="sensor_only"))
    assert rollout_expert(env, make_expert("pid", env), episodes=0) == []


def test_rollout_deterministic():
    env = TunnelEnv(EnvConfig(sensor=SPARSE, observation_mode="sensor_only",
                              init_randomization="ring", max_steps=120))
    expert = make_expert("waypoint", env)
    a = rollout_expert(env, expert, episodes=2, seed=9)
    b = rollout_expert(env, expert, episodes=2, seed=9)
    for ta, tb in zip(a, b):
        assert ta.outcome == tb.outcome
        assert len(ta.records) == len(tb.records)
        for ra, rb in zip(ta.records, tb.records):
            assert np.array_equal(ra.observation, rb.observation)
            assert np.array_equal(ra.action, rb.action)
            assert ra.state == rb.state


def test_unknown_expert_name():
    env = TunnelEnv(EnvConfig(sensor=SPARSE, observation_mode="sensor_only"))
    with pytest.raises(ValueError, match="unknown expert"):
        make_expert("human", env)


def test_dataset_export_roundtrip(tmp_path):
    env = TunnelEnv(EnvConfig(sensor=SPARSE, observation_mode="sensor_only",
                              init_randomization="ring", max_steps=40))
    expert = make_expert("pid", env)
    traces = rollout_expert(env, expert, episodes=2, seed=4,
                            config_hash="cafe01234567")
    path = tmp_path / "demo.jsonl"
    summary = export_dataset(traces, path)
    assert summary["episodes"] == 2
    assert summary["records"] == sum(len(t.records) for t in traces)
    assert sum(summary["outcomes"].values()) == 2

    header, rows = read_dataset(path)
    assert header["config_hash"] == "cafe01234567"
    assert len(rows) == summary["records"]
    flat = [rec for t in traces for rec in t.records]
    for rec, row in zip(flat, rows):
        assert row["observation"] == list(rec.observation)   # bit-exact floats
        assert row["action"] == list(rec.action)
        assert row["state"] == list(rec.state)
        assert row["outcome"] == rec.outcome


def test_dataset_unwritable_path():
    env = TunnelEnv(EnvConfig(sensor=SPARSE, observation_mode="sensor_only",
                              max_steps=5))
    traces = rollout_expert(env, make_expert("pid", env), episodes=1, seed=0)
    with pytest.raises(OSError):
        export_dataset(traces, "/nonexistent-dir/demo.jsonl")
