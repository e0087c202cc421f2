"""Pure-Python rung evaluation kernel.

Fallback for the Cython kernel in ``_scan_cy``; both expose the same
``eval_scan`` over a flat compiled instruction stream.  Instruction
encoding (shared with the parser and the Cython kernel):

    op:   0=LD 1=LDI 2=AND 3=ANI 4=OR 5=ORI 6=OUT
    bank: 0=X 1=Y 2=M
    idx:  bit index within the bank

Inputs and outputs are packed little-endian bit masks.  Y starts the
scan all-low (coils not driven by any rung stay low); M persists.
"""

from __future__ import annotations

BACKEND = "python"


def eval_scan(
    ops: bytes, banks: bytes, idxs: bytes, x_bits: int, m_bits: int
) -> tuple[int, int]:
    y = 0
    m = m_bits
    acc = 0
    for i in range(len(ops)):
        op = ops[i]
        bank = banks[i]
        idx = idxs[i]
        if op == 6:  # OUT
            if bank == 1:
                y = (y & ~(1 << idx)) | (acc << idx)
            else:
                m = (m & ~(1 << idx)) | (acc << idx)
            continue
        if bank == 0:
            bit = (x_bits >> idx) & 1
        elif bank == 1:
            bit = (y >> idx) & 1
        else:
            bit = (m >> idx) & 1
        if op == 0:  # LD
            acc = bit
        elif op == 1:  # LDI
            acc = bit ^ 1
        elif op == 2:  # AND
            acc &= bit
        elif op == 3:  # ANI
            acc &= bit ^ 1
        elif op == 4:  # OR
            acc |= bit
        else:  # ORI
            acc |= bit ^ 1
    return y, m
