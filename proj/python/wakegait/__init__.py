"""Morphing-wing wake simulation and gait design.

Configs may be given as a path to a JSON file, a JSON string or a dict.
"""

import json
import os

from ._wakegait import (
    EXIT_CHECK,
    EXIT_CONFIG,
    EXIT_NUMERIC,
    EXIT_OK,
    ConfigError,
    MeshMismatch,
    NumericError,
    RejectedConfiguration,
    __version__,
    build_wing,
    check,
    read_wake_vtk,
    wagner_phi,
    wake_distance,
)
from . import _wakegait


def _config_text(config):
    if isinstance(config, dict):
        return json.dumps(config)
    if isinstance(config, os.PathLike) or (isinstance(config, str) and not config.lstrip().startswith("{")):
        with open(config) as f:
            return f.read()
    return config


def load_config(config):
    """Validated config as a dict with every default filled in."""
    return json.loads(_wakegait.normalize_config(_config_text(config)))


def simulate(config):
    """Run the simulation; returns wake mesh, circulation history and invariants."""
    return _wakegait.simulate_json(_config_text(config))


def export(config, out_dir, with_field=False):
    """Run and write the standard output files; returns their paths."""
    return _wakegait.export_json(_config_text(config), out_dir, with_field)


def optimize(config, desired_vtk, x0=None, budget=0):
    """Fit the config's optimizer fields to a desired wake mesh file."""
    return _wakegait.optimize_json(_config_text(config), desired_vtk, x0, budget)


__all__ = [
    "EXIT_CHECK", "EXIT_CONFIG", "EXIT_NUMERIC", "EXIT_OK",
    "ConfigError", "MeshMismatch", "NumericError", "RejectedConfiguration",
    "__version__", "build_wing", "check", "export", "load_config", "optimize",
    "read_wake_vtk", "simulate", "wagner_phi", "wake_distance",
]
