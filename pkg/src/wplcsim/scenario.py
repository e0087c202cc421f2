"""Scenario files: the packaged description of one simulated deployment.

TOML, human-editable, field names matching the Scenario type below.
Unknown keys are errors so typos in threshold overrides cannot pass
silently.
"""

from __future__ import annotations

try:
    import tomllib
except ImportError:  # Python < 3.11
    import tomli as tomllib  # type: ignore[no-redef]

from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from . import electrical
from .netmodels import NetworkSpec, network_spec


class ScenarioError(Exception):
    """Scenario file failed to parse or validate."""


@dataclass(frozen=True)
class Stimulus:
    time_us: int
    switch: int
    on: bool


@dataclass
class Overrides:
    """Tunable timing/threshold parameters, with datasheet-style defaults."""

    scan_period_us: int = 10_000
    report_period_us: int = 50_000
    debounce_us: int = 0
    relay_settle_us: int = electrical.DEFAULT_SETTLE_US
    relay_pull_in_volts: float = electrical.DEFAULT_PULL_IN_VOLTS
    input_logic_threshold_volts: float = electrical.DEFAULT_PLC_LOGIC_THRESHOLD


@dataclass
class ChannelConfig:
    loss: float = 0.0
    jitter_us: int = 0


@dataclass
class Scenario:
    program: str
    network: NetworkSpec
    channel: ChannelConfig = field(default_factory=ChannelConfig)
    overrides: Overrides = field(default_factory=Overrides)
    stimuli: list[Stimulus] = field(default_factory=list)
    duration_us: int = 1_000_000
    seed: int = 0
    expect_outputs: Optional[list[int]] = None  # Y0..Y5 or None

    def validate(self) -> None:
        if not 0.0 <= self.channel.loss <= 1.0:
            raise ScenarioError("channel.loss must be in [0, 1]")
        if self.channel.jitter_us < 0:
            raise ScenarioError("channel.jitter must be >= 0")
        if self.duration_us < 0:
            raise ScenarioError("duration must be >= 0")
        for st in self.stimuli:
            if st.time_us > self.duration_us:
                raise ScenarioError(
                    f"stimulus at t={st.time_us} exceeds duration {self.duration_us}"
                )
            if not 0 <= st.switch < 8:
                raise ScenarioError(f"switch index {st.switch} out of range (0-7)")
        if self.expect_outputs is not None:
            if len(self.expect_outputs) != 6 or any(
                b not in (0, 1) for b in self.expect_outputs
            ):
                raise ScenarioError("expect.outputs must be six 0/1 values (Y0-Y5)")


def _require_keys(table: dict, allowed: set[str], where: str) -> None:
    unknown = set(table) - allowed
    if unknown:
        raise ScenarioError(f"unknown key(s) in {where}: {', '.join(sorted(unknown))}")


_TOP_KEYS = {"program", "network", "segment", "channel", "overrides",
             "stimuli", "duration", "seed", "expect"}
_CHANNEL_KEYS = {"loss", "jitter"}
_OVERRIDE_KEYS = {"scan_period", "report_period", "debounce", "relay_settle",
                  "relay_pull_in_volts", "input_logic_threshold_volts"}
_STIMULUS_KEYS = {"time", "switch", "state"}
_EXPECT_KEYS = {"outputs"}


def parse_scenario(data: dict) -> Scenario:
    _require_keys(data, _TOP_KEYS, "scenario")
    if "program" not in data:
        raise ScenarioError("scenario needs a 'program' field")
    if "network" not in data:
        raise ScenarioError("scenario needs a 'network' field")
    try:
        spec = network_spec(data["network"], data.get("segment"))
    except Exception as exc:
        raise ScenarioError(str(exc)) from exc

    channel = ChannelConfig()
    if "channel" in data:
        _require_keys(data["channel"], _CHANNEL_KEYS, "channel")
        channel = ChannelConfig(
            loss=float(data["channel"].get("loss", 0.0)),
            jitter_us=int(data["channel"].get("jitter", 0)),
        )

    overrides = Overrides()
    if "overrides" in data:
        ov = data["overrides"]
        _require_keys(ov, _OVERRIDE_KEYS, "overrides")
        overrides = Overrides(
            scan_period_us=int(ov.get("scan_period", overrides.scan_period_us)),
            report_period_us=int(ov.get("report_period", overrides.report_period_us)),
            debounce_us=int(ov.get("debounce", overrides.debounce_us)),
            relay_settle_us=int(ov.get("relay_settle", overrides.relay_settle_us)),
            relay_pull_in_volts=float(
                ov.get("relay_pull_in_volts", overrides.relay_pull_in_volts)
            ),
            input_logic_threshold_volts=float(
                ov.get("input_logic_threshold_volts",
                       overrides.input_logic_threshold_volts)
            ),
        )

    stimuli = []
    for i, st in enumerate(data.get("stimuli", [])):
        _require_keys(st, _STIMULUS_KEYS, f"stimuli[{i}]")
        state = str(st.get("state", "")).lower()
        if state not in ("on", "off"):
            raise ScenarioError(f"stimuli[{i}].state must be 'on' or 'off'")
        stimuli.append(Stimulus(int(st["time"]), int(st["switch"]), state == "on"))
    stimuli.sort(key=lambda s: s.time_us)

    expect_outputs = None
    if "expect" in data:
        _require_keys(data["expect"], _EXPECT_KEYS, "expect")
        expect_outputs = [int(b) for b in data["expect"]["outputs"]]

    scenario = Scenario(
        program=str(data["program"]),
        network=spec,
        channel=channel,
        overrides=overrides,
        stimuli=stimuli,
        duration_us=int(data.get("duration", 1_000_000)),
        seed=int(data.get("seed", 0)),
        expect_outputs=expect_outputs,
    )
    scenario.validate()
    return scenario


def load_scenario(path: str | Path) -> Scenario:
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ScenarioError(f"{path}: {exc}") from exc
    return parse_scenario(data)
