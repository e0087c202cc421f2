# cython: language_level=3, boundscheck=False, wraparound=False
"""Cython rung evaluation kernel; see _scan_py for the encoding contract."""

BACKEND = "cython"


def eval_scan(const unsigned char[:] ops, const unsigned char[:] banks,
              const unsigned char[:] idxs, unsigned int x_bits,
              unsigned int m_bits):
    cdef unsigned int y = 0
    cdef unsigned int m = m_bits
    cdef unsigned int acc = 0
    cdef unsigned int bit
    cdef unsigned char op, bank, idx
    cdef Py_ssize_t i, n = ops.shape[0]
    for i in range(n):
        op = ops[i]
        bank = banks[i]
        idx = idxs[i]
        if op == 6:
            if bank == 1:
                y = (y & ~(1u << idx)) | (acc << idx)
            else:
                m = (m & ~(1u << idx)) | (acc << idx)
            continue
        if bank == 0:
            bit = (x_bits >> idx) & 1u
        elif bank == 1:
            bit = (y >> idx) & 1u
        else:
            bit = (m >> idx) & 1u
        if op == 0:
            acc = bit
        elif op == 1:
            acc = bit ^ 1u
        elif op == 2:
            acc = acc & bit
        elif op == 3:
            acc = acc & (bit ^ 1u)
        elif op == 4:
            acc = acc | bit
        else:
            acc = acc | (bit ^ 1u)
    return y, m
