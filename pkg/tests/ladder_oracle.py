"""Brute-force boolean oracle for the ladder scan engine.

Deliberately independent of wplcsim.ladder: it re-parses the program
text itself and evaluates each rung by compiling a Python boolean
expression, instead of the engine's packed-bit accumulator kernel.
"""

from __future__ import annotations

_SIZES = {"X": 8, "Y": 6, "M": 16}


def _rung_texts(text: str) -> list[list[tuple[str, str]]]:
    rungs: list[list[tuple[str, str]]] = []
    current: list[tuple[str, str]] = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        op, operand = line.split()
        op = op.upper()
        operand = operand.upper()
        current.append((op, operand))
        if op == "OUT":
            rungs.append(current)
            current = []
    if current:
        raise ValueError("trailing rung without OUT")
    return rungs


def oracle_scan(text: str, x_bits: int, m_bits: int) -> tuple[int, int]:
    """Evaluate one scan; returns (y_bits, m_bits)."""
    x = [(x_bits >> i) & 1 for i in range(8)]
    y = [0] * 6
    m = [(m_bits >> i) & 1 for i in range(16)]

    def env(operand: str) -> bool:
        bank, idx = operand[0], int(operand[1:])
        if idx >= _SIZES[bank]:
            raise ValueError(f"operand {operand} out of range")
        return bool({"X": x, "Y": y, "M": m}[bank][idx])

    for rung in _rung_texts(text):
        expr = None
        coil = None
        for op, operand in rung:
            term = f"env({operand[0]!r} + {operand[1:]!r})"
            if op == "LD":
                expr = f"({term})"
            elif op == "LDI":
                expr = f"(not {term})"
            elif op == "AND":
                expr = f"({expr} and {term})"
            elif op == "ANI":
                expr = f"({expr} and not {term})"
            elif op == "OR":
                expr = f"({expr} or {term})"
            elif op == "ORI":
                expr = f"({expr} or not {term})"
            elif op == "OUT":
                coil = operand
            else:
                raise ValueError(f"unknown opcode {op}")
        value = 1 if eval(expr, {"env": env}) else 0
        bank, idx = coil[0], int(coil[1:])
        if bank == "Y":
            y[idx] = value
        elif bank == "M":
            m[idx] = value
        else:
            raise ValueError("OUT cannot target X")
    y_bits = sum(b << i for i, b in enumerate(y))
    m_out = sum(b << i for i, b in enumerate(m))
    return y_bits, m_out
