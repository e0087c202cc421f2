"""Instruction-list ladder programs and the PLC scan cycle.

A program is a list of rungs; each rung is a linear accumulator sequence
(LD/LDI load, AND/ANI/OR/ORI combine left-to-right, OUT writes the coil).
Operands are X0-X7 (inputs), Y0-Y5 (outputs), M0-M15 (internal bits).

One scan cycle takes a snapshot of the input image, evaluates rungs
top-to-bottom (later rungs see Y/M bits written by earlier ones) and
returns fresh images; outputs no rung drives are forced low.

Rung evaluation dispatches to a compiled kernel when the extension built;
set WPLCSIM_PURE_PY=1 to force the pure-Python fallback.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

if os.environ.get("WPLCSIM_PURE_PY"):
    from . import _scan_py as _kernel
else:
    try:
        from . import _scan_cy as _kernel  # type: ignore[attr-defined]
    except ImportError:
        from . import _scan_py as _kernel

SCAN_BACKEND: str = _kernel.BACKEND

OPCODES = {"LD": 0, "LDI": 1, "AND": 2, "ANI": 3, "OR": 4, "ORI": 5, "OUT": 6}
_OP_NAMES = {v: k for k, v in OPCODES.items()}
BANKS = {"X": 0, "Y": 1, "M": 2}
BANK_SIZES = {"X": 8, "Y": 6, "M": 16}
_LOADS = {0, 1}
_COMBINES = {2, 3, 4, 5}


class ParseError(Exception):
    def __init__(self, line_no: int, message: str) -> None:
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


@dataclass(frozen=True)
class Instruction:
    op: int
    bank: int
    index: int

    def __str__(self) -> str:
        bank = "XYM"[self.bank]
        return f"{_OP_NAMES[self.op]} {bank}{self.index}"


@dataclass
class LadderProgram:
    rungs: list[list[Instruction]]
    warnings: list[str] = field(default_factory=list)
    # flat encoding consumed by the scan kernels
    _ops: bytes = b""
    _banks: bytes = b""
    _idxs: bytes = b""

    def __post_init__(self) -> None:
        flat = [ins for rung in self.rungs for ins in rung]
        self._ops = bytes(i.op for i in flat)
        self._banks = bytes(i.bank for i in flat)
        self._idxs = bytes(i.index for i in flat)


@dataclass(frozen=True)
class ImageTables:
    """Input/output/internal bit images; one snapshot per scan."""

    input_image: int = 0  # X0-X7
    output_image: int = 0  # Y0-Y5
    internal_bits: int = 0  # M0-M15

    def __post_init__(self) -> None:
        if not 0 <= self.input_image < 256:
            raise ValueError("input_image must fit in 8 bits")
        if not 0 <= self.output_image < 64:
            raise ValueError("output_image must fit in 6 bits")
        if not 0 <= self.internal_bits < 65536:
            raise ValueError("internal_bits must fit in 16 bits")

    def x(self, i: int) -> int:
        return (self.input_image >> i) & 1

    def y(self, i: int) -> int:
        return (self.output_image >> i) & 1


def _parse_operand(token: str, line_no: int) -> tuple[int, int]:
    bank_char = token[:1].upper()
    if bank_char not in BANKS:
        raise ParseError(line_no, f"unknown operand bank in {token!r}")
    try:
        index = int(token[1:])
    except ValueError:
        raise ParseError(line_no, f"bad operand index in {token!r}") from None
    if not 0 <= index < BANK_SIZES[bank_char]:
        raise ParseError(
            line_no,
            f"{bank_char}{index} out of range ({bank_char} has {BANK_SIZES[bank_char]} bits)",
        )
    return BANKS[bank_char], index


def parse_program(text: str) -> LadderProgram:
    """Parse line-oriented instruction text into a validated program.

    One instruction per line (``OPCODE OPERAND``), ``#`` comments,
    case-insensitive opcodes, blank lines separate rungs.
    """
    rungs: list[list[Instruction]] = []
    warnings: list[str] = []
    current: list[Instruction] = []
    current_start = 0
    seen_coils: dict[tuple[int, int], int] = {}

    def close_rung(line_no: int) -> None:
        nonlocal current
        if not current:
            return
        if current[-1].op != OPCODES["OUT"]:
            raise ParseError(line_no, "rung does not end with OUT")
        rungs.append(current)
        current = []

    lines = text.splitlines()
    for line_no, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            close_rung(line_no)
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(line_no, f"expected 'OPCODE OPERAND', got {raw.strip()!r}")
        op_name = parts[0].upper()
        if op_name not in OPCODES:
            raise ParseError(line_no, f"unknown opcode {parts[0]!r}")
        op = OPCODES[op_name]
        bank, index = _parse_operand(parts[1], line_no)
        if op == OPCODES["OUT"]:
            if bank == BANKS["X"]:
                raise ParseError(line_no, "OUT cannot target an input (X) channel")
            if not current:
                raise ParseError(line_no, "OUT with no preceding condition")
            coil = (bank, index)
            if coil in seen_coils:
                warnings.append(
                    f"line {line_no}: duplicate coil {'XYM'[bank]}{index} "
                    f"(also driven at line {seen_coils[coil]}); last write wins"
                )
            else:
                seen_coils[coil] = line_no
            current.append(Instruction(op, bank, index))
            close_rung(line_no)
            continue
        if op in _LOADS:
            if current:
                raise ParseError(line_no, f"{op_name} must start a rung")
            current_start = line_no
        else:  # AND/ANI/OR/ORI
            if not current:
                raise ParseError(line_no, f"{op_name} cannot start a rung (use LD/LDI)")
        current.append(Instruction(op, bank, index))
    if current:
        raise ParseError(current_start, "rung does not end with OUT")
    return LadderProgram(rungs, warnings)


def scan_cycle(program: LadderProgram, images: ImageTables) -> ImageTables:
    """Execute one scan against a snapshot of the input image.

    Pure function: equal arguments always produce equal images.
    """
    y, m = _kernel.eval_scan(
        program._ops, program._banks, program._idxs,
        images.input_image, images.internal_bits,
    )
    return ImageTables(images.input_image, y, m)
