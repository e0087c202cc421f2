"""Electrical boundary: thresholded input channels, output drive, relays.

The field bridge energizes 5 VDC relay coils; a closed relay contact
passes 24 VDC into a PLC input channel.  Contacts only move after the
coil has sat on the far side of the pull-in threshold for the settle
time, so coil excursions shorter than settle never change the contact.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

PLC_CHANNEL_VOLTS = 24.0
RELAY_COIL_VOLTS = 5.0
DEFAULT_PULL_IN_VOLTS = 3.75  # 75% of the 5 V coil rating
DEFAULT_SETTLE_US = 5_000
DEFAULT_PLC_LOGIC_THRESHOLD = 15.0  # 24 V input channels
LOGIC_5V_THRESHOLD = 2.5


@dataclass(frozen=True)
class ChannelLevel:
    voltage: float
    logic_threshold: float = DEFAULT_PLC_LOGIC_THRESHOLD

    def __post_init__(self) -> None:
        if self.logic_threshold <= 0:
            raise ValueError("logic_threshold must be positive")


def sample_input_channel(level: ChannelLevel) -> int:
    """1 iff the channel voltage meets its logic threshold (inclusive)."""
    return 1 if level.voltage >= level.logic_threshold else 0


def drive_output_channel(bit: int) -> ChannelLevel:
    """Drive a 24 V output channel from a logic bit."""
    return ChannelLevel(PLC_CHANNEL_VOLTS if bit else 0.0)


@dataclass(frozen=True)
class Relay:
    """Electromechanical relay with settle-time contact dynamics.

    ``pending_target``/``pending_at`` track an in-flight transition: the
    contact commits at ``pending_at`` unless the coil crosses back first.
    """

    coil_voltage: float = 0.0
    pull_in_threshold: float = DEFAULT_PULL_IN_VOLTS
    settle_time: int = DEFAULT_SETTLE_US
    contact_closed: bool = False
    pending_target: Optional[bool] = None
    pending_at: Optional[int] = None


def relay_step(relay: Relay, coil_voltage: float, now: int) -> Relay:
    """Apply a coil voltage at time ``now``.

    Crossing the pull-in threshold starts a settle timer toward the new
    contact state; returning to the current state's side cancels it.
    A steady coil at or above threshold holds the contact closed.
    """
    desired = coil_voltage >= relay.pull_in_threshold
    if desired == relay.contact_closed:
        # coil agrees with the contact: abandon any in-flight transition
        return replace(relay, coil_voltage=coil_voltage,
                       pending_target=None, pending_at=None)
    if relay.pending_target == desired:
        # transition already timed from the first crossing
        return replace(relay, coil_voltage=coil_voltage)
    return replace(relay, coil_voltage=coil_voltage,
                   pending_target=desired, pending_at=now + relay.settle_time)


def relay_settle(relay: Relay, now: int) -> Relay:
    """Commit a pending transition whose settle time has elapsed."""
    if relay.pending_target is None or relay.pending_at is None:
        return relay
    if now < relay.pending_at:
        return relay
    return replace(relay, contact_closed=relay.pending_target,
                   pending_target=None, pending_at=None)


def relay_contact_level(relay: Relay) -> ChannelLevel:
    """Voltage presented to the PLC input channel through the contact."""
    return ChannelLevel(PLC_CHANNEL_VOLTS if relay.contact_closed else 0.0)
