"""Batch scenario runner: load, simulate, write trace, check expectations."""

from __future__ import annotations

import sys
from pathlib import Path
from typing import Optional

from .bridge import Metrics, run_end_to_end
from .netmodels import dump_table
from .scenario import Scenario, ScenarioError, load_scenario
from .simkernel import Trace


def run_scenario_object(scenario: Scenario) -> tuple[Trace, Metrics]:
    trace, metrics, _world = run_end_to_end(scenario)
    return trace, metrics


def check_expectations(scenario: Scenario, metrics: Metrics) -> list[str]:
    """Returns a list of failed-expectation messages (empty means pass)."""
    failures = []
    if scenario.expect_outputs is not None:
        want = 0
        for i, bit in enumerate(scenario.expect_outputs):
            want |= bit << i
        got = metrics.final_output_image
        if got != want:
            failures.append(
                f"expected final output image 0x{want:02X}, got 0x{got:02X}"
            )
    return failures


def run_scenario(
    path: str | Path,
    trace_out: Optional[str | Path] = None,
    seed: Optional[int] = None,
    out=sys.stdout,
) -> int:
    """Run one scenario file; returns the process exit code."""
    try:
        scenario = load_scenario(path)
    except (ScenarioError, OSError) as exc:
        print(f"error: {exc}", file=out)
        return 2
    if seed is not None:
        scenario.seed = seed
    trace, metrics = run_scenario_object(scenario)
    if trace_out is not None:
        Path(trace_out).write_bytes(trace.to_bytes())
    print(metrics.to_text(), end="", file=out)
    failures = check_expectations(scenario, metrics)
    for failure in failures:
        print(f"FAIL: {failure}", file=out)
    return 1 if failures else 0


def dump_table_text() -> str:
    return dump_table()
