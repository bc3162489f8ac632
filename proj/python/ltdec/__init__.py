"""Python access to the ltd core."""

import json

from . import _core
from ._core import (
    LtdError,
    entropy,
    gaussian_factor,
    partial_trace,
    purity,
    scenario_names,
    sigma_analytic,
    tau_min,
)

__all__ = [
    "LtdError",
    "entropy",
    "gaussian_factor",
    "partial_trace",
    "purity",
    "run_scenario",
    "scenario_names",
    "sigma_analytic",
    "tau_min",
]


def run_scenario(scenario, overrides=None, preset="paper"):
    """Run a scenario; returns the report as a dict. Override values may be any JSON-able object."""
    ov = {k: json.dumps(v) for k, v in (overrides or {}).items()}
    return json.loads(_core.run_scenario_json(scenario, ov, preset))
