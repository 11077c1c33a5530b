"""Identity-aware evaluation of sound source tracking.

Thin wrappers over the C++ core. Configs are plain dicts with the same keys as the
CLI's JSON files; angles in them are in degrees.
"""

import json

from ._core import (
    Direction,
    FrameGrid,
    GridMismatch,
    IdtrackError,
    InvalidConfig,
    ObservationSet,
    ParseError,
    TrackSet,
    angular_distance,
    bootstrap,
    evaluate,
)
from . import _core

__all__ = [
    "Direction",
    "FrameGrid",
    "GridMismatch",
    "IdtrackError",
    "InvalidConfig",
    "ObservationSet",
    "ParseError",
    "TrackSet",
    "angular_distance",
    "bootstrap",
    "evaluate",
    "run_sweep",
    "run_tracker",
    "simulate_scene",
]


def simulate_scene(scenario=None, observation=None):
    """Returns (truth, observations) for one scene."""
    return _core._simulate_scene(json.dumps(scenario or {}), json.dumps(observation or {}))


def run_tracker(tracker, truth, observations, n_speakers, seed=0):
    """Runs a tracker given as a dict, e.g. {"tracker": "pf", "k_max": "J"}."""
    return _core._run_tracker(json.dumps(tracker), truth, observations, n_speakers, seed)


def run_sweep(config, jobs=1):
    """Runs a K_max sweep; returns (cells, trend_checks)."""
    return _core._run_sweep(json.dumps(config), jobs)
