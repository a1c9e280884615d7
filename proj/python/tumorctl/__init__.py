"""Optimal drug dosing for a reaction-diffusion tumor model."""

import json

from ._core import (
    Config,
    ConfigError,
    Infeasible,
    InvalidInput,
    ModelParams,
    Problem,
    SolveFailure,
    check_feasibility,
    dosing_init,
    gradcheck,
    gradient,
    optimize,
    reference_constant_control,
    seed_control,
    simulate,
    solve_s,
)

__all__ = [
    "Config",
    "ConfigError",
    "Infeasible",
    "InvalidInput",
    "ModelParams",
    "Problem",
    "SolveFailure",
    "check_feasibility",
    "configure",
    "dosing_init",
    "gradcheck",
    "gradient",
    "optimize",
    "reference_constant_control",
    "seed_control",
    "simulate",
    "solve_s",
]


def configure(base="paper-sec6", **overrides):
    """Config from a preset name (or a Config) with flat key overrides, e.g. nx=31, eps=0.4."""
    cfg = Config.preset(base) if isinstance(base, str) else base
    if not overrides:
        return cfg
    return Config.parse(json.dumps(overrides), cfg)
