"""Emulated HC05-style serial Bluetooth modules.

Covers AT-command configuration, the master/slave pairing handshake,
the input-image wire frame, and transmission over a loss/jitter channel
timed by the fieldbus data rate.

Frame layout (5 bytes for a 1-byte payload):

    sync 0xAA | seq | len | payload... | checksum (XOR of seq, len, payload)
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Optional

from .netmodels import NetworkSpec, network_spec, tx_delay
from .simkernel import EventKind, Simulator

SYNC = 0xAA
DEFAULT_BAUD = 9600

_ADDR_RE = re.compile(r"^([0-9a-fA-F]{4}):([0-9a-fA-F]{2}):([0-9a-fA-F]{6})$")


def parse_address(text: str) -> str:
    """Validate and normalize an hhhh:hh:hhhhhh module address."""
    m = _ADDR_RE.match(text.strip())
    if not m:
        raise ValueError(f"bad module address {text!r} (want hhhh:hh:hhhhhh)")
    return text.strip().lower()


class AtModeError(Exception):
    """AT command issued while the module is in data mode (or vice versa)."""


class PairingError(Exception):
    pass


class RoleConflictError(PairingError):
    pass


class BaudMismatchError(PairingError):
    pass


class BindMismatchError(PairingError):
    pass


class AlreadyLinkedError(PairingError):
    pass


class FrameError(Exception):
    pass


class BadSyncError(FrameError):
    pass


class ShortFrameError(FrameError):
    """Byte count inconsistent with the frame's declared length."""


class ChecksumError(FrameError):
    pass


class LinkDownError(Exception):
    pass


@dataclass
class BtModule:
    address: str
    role: Optional[str] = None  # "master" | "slave" | None
    baud: int = DEFAULT_BAUD
    bind_address: Optional[str] = None
    mode: str = "at"  # "at" | "data"
    link: Optional["Link"] = None

    def __post_init__(self) -> None:
        self.address = parse_address(self.address)


def at_command(module: BtModule, command: str) -> str:
    """Execute one AT command against a module in AT-command mode.

    Supported: AT, AT+ROLE=<0|1>, AT+ROLE?, AT+UART=<baud>, AT+ADDR?,
    AT+BIND=<addr>.  Unknown commands answer ERROR:(0), malformed
    arguments ERROR:(1); role/bind/baud changes require AT mode.
    """
    if module.mode != "at":
        raise AtModeError("module is in data mode; AT commands need AT-command mode")
    cmd = command.strip()
    upper = cmd.upper()
    if upper == "AT":
        return "OK"
    if upper == "AT+ROLE?":
        value = {"master": 1, "slave": 0}.get(module.role, 0)
        return f"+ROLE:{value}\nOK"
    if upper == "AT+ADDR?":
        return f"+ADDR:{module.address}\nOK"
    if upper.startswith("AT+ROLE="):
        arg = cmd[8:]
        if arg == "1":
            module.role = "master"
        elif arg == "0":
            module.role = "slave"
        else:
            return "ERROR:(1)"
        return "OK"
    if upper.startswith("AT+UART="):
        arg = cmd[8:]
        if not arg.isdigit() or int(arg) <= 0:
            return "ERROR:(1)"
        module.baud = int(arg)
        return "OK"
    if upper.startswith("AT+BIND="):
        arg = cmd[8:]
        try:
            module.bind_address = parse_address(arg)
        except ValueError:
            return "ERROR:(1)"
        return "OK"
    return "ERROR:(0)"


def enter_data_mode(module: BtModule) -> None:
    module.mode = "data"


@dataclass
class Channel:
    """Shared medium: fieldbus rate plus loss probability and jitter bound."""

    spec: NetworkSpec
    loss: float = 0.0
    jitter_us: int = 0

    def __post_init__(self) -> None:
        if not 0.0 <= self.loss <= 1.0:
            raise ValueError("loss probability must be in [0, 1]")
        if self.jitter_us < 0:
            raise ValueError("jitter bound must be >= 0")


@dataclass
class Link:
    master: BtModule
    slave: BtModule
    channel: Channel
    established_at: int
    alive: bool = True
    sent: int = 0
    delivered: int = 0
    dropped: int = 0


def pair(master: BtModule, slave: BtModule, now: int) -> Link:
    """Establish a link; both modules must be in data mode.

    Succeeds only with complementary roles, equal bauds, and the master
    bound to the slave's address.
    """
    if master.mode != "data" or slave.mode != "data":
        raise AtModeError("both modules must be in data mode to pair")
    if master.link is not None or slave.link is not None:
        raise AlreadyLinkedError("a module already holds a link")
    if master.role != "master" or slave.role != "slave":
        raise RoleConflictError(
            f"need roles master/slave, got {master.role}/{slave.role}"
        )
    if master.baud != slave.baud:
        raise BaudMismatchError(f"baud {master.baud} != {slave.baud}")
    if master.bind_address != slave.address:
        raise BindMismatchError(
            f"master bound to {master.bind_address}, slave is {slave.address}"
        )
    # callers normally swap in their configured channel afterwards
    link = Link(master, slave, Channel(spec=network_spec("Bluetooth")), now)
    master.link = link
    slave.link = link
    return link


def encode_frame(input_image: int, seq: int) -> bytes:
    """Frame the 8-bit input image with sequencing and an XOR checksum."""
    if not 0 <= input_image < 256:
        raise ValueError("input_image must fit in 8 bits")
    seq &= 0xFF
    length = 1
    checksum = seq ^ length ^ input_image
    return bytes((SYNC, seq, length, input_image, checksum))


def decode_frame(data: bytes) -> tuple[int, int]:
    """Inverse of encode_frame; returns (input_image, seq).

    Raises BadSyncError, ShortFrameError or ChecksumError, each
    distinguishable for the link statistics.
    """
    if len(data) < 1 or data[0] != SYNC:
        raise BadSyncError(f"expected sync 0x{SYNC:02X}")
    if len(data) < 4:
        raise ShortFrameError(f"{len(data)} bytes is below the 4-byte minimum")
    length = data[2]
    if length < 1:
        raise ShortFrameError("declared payload length 0 (minimum 1)")
    if len(data) != 4 + length:
        raise ShortFrameError(f"declared {4 + length} bytes, got {len(data)}")
    checksum = 0
    for b in data[1:-1]:
        checksum ^= b
    if checksum != data[-1]:
        raise ChecksumError(f"checksum 0x{data[-1]:02X} != 0x{checksum:02X}")
    return data[3], data[1]


def transmit(
    link: Link,
    data: bytes,
    sim: Simulator,
    on_delivery: Callable[[bytes], None],
) -> bool:
    """Send bytes over the link's channel.

    Draws loss from the simulator's seeded stream; on delivery an event
    fires after the serialization delay plus uniform jitter.  Returns
    True if the frame was put in flight, False if the channel dropped it.
    """
    if not link.alive:
        raise LinkDownError("transmit on a dead link")
    link.sent += 1
    ch = link.channel
    if ch.loss > 0.0 and sim.rng.random() < ch.loss:
        link.dropped += 1
        return False
    delay = tx_delay(ch.spec, 8 * len(data))
    if ch.jitter_us > 0:
        delay += sim.rng.randint(0, ch.jitter_us)

    def _deliver(event) -> None:
        link.delivered += 1
        on_delivery(event.payload)

    sim.schedule_in(delay, EventKind.FRAME_DELIVERY, data, _deliver)
    return True
