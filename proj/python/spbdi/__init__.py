"""BDI agents with social practices: Python access to the C++ engine."""

import json

from ._spbdi import (
    ParseError,
    ScenarioError,
    Simulation,
    SpbdiError,
    canonical_term,
    compile_plan_pattern,
    interval_overlap,
    print_plans,
)

__all__ = [
    "ParseError",
    "ScenarioError",
    "Simulation",
    "SpbdiError",
    "canonical_term",
    "compile_plan_pattern",
    "interval_overlap",
    "print_plans",
    "run_scenario",
    "trace_records",
]


def trace_records(sim):
    """Trace of a simulation as a list of dicts."""
    return [json.loads(line) for line in sim.trace_jsonl().splitlines()]


def run_scenario(manifest, steps=200, practices=True, meta_period=2, search_depth=3):
    """Runs a scenario and returns the finished simulation."""
    sim = Simulation(manifest, practices=practices, meta_period=meta_period, search_depth=search_depth)
    sim.run(steps)
    return sim
