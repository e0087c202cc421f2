"""Deterministic simulator of a Bluetooth-bridged wireless PLC deployment."""

from .ladder import SCAN_BACKEND, ImageTables, LadderProgram, parse_program, scan_cycle
from .netmodels import NetworkSpec, compare_networks, dump_table, network_spec, tx_delay

__version__ = "0.1.0"

__all__ = [
    "SCAN_BACKEND",
    "ImageTables",
    "LadderProgram",
    "NetworkSpec",
    "compare_networks",
    "dump_table",
    "network_spec",
    "parse_program",
    "scan_cycle",
    "tx_delay",
    "__version__",
]
