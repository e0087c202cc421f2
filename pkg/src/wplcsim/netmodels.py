"""Fieldbus timing data and scan-time arithmetic.

Nine network variants (wired Profibus/DeviceNet segments plus ZigBee,
Bluetooth and Wi-Fi) with their segment length, data rate and node cap.
Delay is pure serialization delay (bits over rate); no MAC or propagation
overhead is modeled.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


class UnknownNetworkError(Exception):
    pass


class UnknownSegmentError(Exception):
    pass


@dataclass(frozen=True)
class NetworkSpec:
    name: str
    wired: bool
    segment_length: int  # meters
    data_rate_kbps: Fraction
    max_nodes: int


_ROWS: tuple[NetworkSpec, ...] = (
    NetworkSpec("Profibus", True, 1200, Fraction("93.75"), 32),
    NetworkSpec("Profibus", True, 600, Fraction("182.5"), 32),
    NetworkSpec("Profibus", True, 200, Fraction(500), 32),
    NetworkSpec("DeviceNet", True, 500, Fraction(125), 64),
    NetworkSpec("DeviceNet", True, 250, Fraction(250), 64),
    NetworkSpec("DeviceNet", True, 100, Fraction(500), 64),
    NetworkSpec("ZigBee", False, 100, Fraction(250), 260),
    NetworkSpec("Bluetooth", False, 10, Fraction(1000), 10),
    NetworkSpec("WiFi", False, 50, Fraction(5500), 40),
)

_MULTI_ROW = {"Profibus", "DeviceNet"}
# accepted spellings for CLI/scenario input
_ALIASES = {"wi-fi": "WiFi", "wifi": "WiFi", "devicenet": "DeviceNet",
            "device net": "DeviceNet", "zigbee": "ZigBee",
            "bluetooth": "Bluetooth", "profibus": "Profibus"}


def all_specs() -> tuple[NetworkSpec, ...]:
    return _ROWS


def network_spec(name: str, segment_length: int | None = None) -> NetworkSpec:
    """Look up one table row.

    Multi-segment networks (Profibus, DeviceNet) require segment_length;
    single-row networks must not be given one.
    """
    canonical = _ALIASES.get(name.strip().lower())
    if canonical is None:
        raise UnknownNetworkError(f"unknown network {name!r}")
    rows = [s for s in _ROWS if s.name == canonical]
    if canonical in _MULTI_ROW:
        if segment_length is None:
            raise UnknownSegmentError(
                f"{canonical} has {len(rows)} segment lengths; one must be given"
            )
        for s in rows:
            if s.segment_length == segment_length:
                return s
        raise UnknownSegmentError(
            f"{canonical} has no {segment_length} m segment"
        )
    if segment_length is not None:
        raise UnknownSegmentError(f"{canonical} has a single row; omit segment length")
    return rows[0]


def tx_delay(spec: NetworkSpec, payload_bits: int) -> int:
    """Serialization delay in integer microseconds, rounded half-up."""
    if payload_bits < 0:
        raise ValueError("payload_bits must be >= 0")
    # rate kbps == bits per millisecond; delay_us = bits * 1000 / rate
    exact = Fraction(payload_bits * 1000) / spec.data_rate_kbps
    return int(exact + Fraction(1, 2))  # floor(x + 1/2) == round half-up


def process_scan_time(
    spec: NetworkSpec, signals_per_scan: int, bits_per_signal: int, base_scan: int
) -> int:
    """Base scan time plus the fieldbus serialization cost of one scan's signals."""
    if signals_per_scan < 0 or bits_per_signal < 0:
        raise ValueError("counts must be >= 0")
    return base_scan + signals_per_scan * tx_delay(spec, bits_per_signal)


@dataclass(frozen=True)
class NetworkRanking:
    spec: NetworkSpec
    scan_time_us: int


def compare_networks(
    signals_per_scan: int, bits_per_signal: int, base_scan: int
) -> list[NetworkRanking]:
    """All rows ranked ascending by process scan time.

    Ties break by name then segment length; zero payload keeps the
    original table ordering stable.
    """
    ranked = [
        NetworkRanking(s, process_scan_time(s, signals_per_scan, bits_per_signal, base_scan))
        for s in _ROWS
    ]
    if len({r.scan_time_us for r in ranked}) > 1:
        ranked.sort(key=lambda r: (r.scan_time_us, r.spec.name, r.spec.segment_length))
    return ranked


def _fmt_rate(rate: Fraction) -> str:
    if rate.denominator == 1:
        return str(rate.numerator)
    return str(float(rate))


def dump_table() -> str:
    """One row per line: name,segment_m,rate_kbps,max_nodes."""
    lines = [
        f"{s.name},{s.segment_length},{_fmt_rate(s.data_rate_kbps)},{s.max_nodes}"
        for s in _ROWS
    ]
    return "\n".join(lines) + "\n"
