# SPDX-License-Identifier: Apache-2.0
"""RSMA dual-functional radar-communication precoder toolkit."""

from ._core import (
    ConfigError,
    Error,
    Mode,
    RunConfig,
    Scenario,
    SolverConfig,
    baseline,
    beampattern,
    dbm_to_linear,
    lb_ibr,
    load_config,
    parse_config,
    solve,
    steering_vector,
    sweep,
    wsr,
)

__all__ = [
    "ConfigError",
    "Error",
    "Mode",
    "RunConfig",
    "Scenario",
    "SolverConfig",
    "baseline",
    "beampattern",
    "dbm_to_linear",
    "lb_ibr",
    "load_config",
    "parse_config",
    "solve",
    "steering_vector",
    "sweep",
    "wsr",
]
