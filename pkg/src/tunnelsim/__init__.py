"""Corridor-flight training environments around a nonlinear F-16-class model.

Core pieces: the flight model and inner-loop FLCS (f16), the corridor world
with body-axis ray sensing (world), the episode engine (env), scripted expert
controllers and dataset export (experts), the missionized threat-zone
environment with A* planning (mission), plus config/recording/render/cli
infrastructure.
"""

from .env import EnvConfig, StepResult, TunnelEnv
from .f16 import AircraftState, ControlRequest, SurfaceDeflections, trim_solve
from .mission import MissionConfig, MissionEnv
from .world import SensorConfig, TunnelWorld, make_tunnel

__version__ = "0.1.0"

__all__ = [
    "AircraftState", "ControlRequest", "SurfaceDeflections", "trim_solve",
    "TunnelWorld", "SensorConfig", "make_tunnel",
    "EnvConfig", "TunnelEnv", "StepResult",
    "MissionConfig", "MissionEnv",
    "__version__",
]
