# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled scan kernel for exhaustive diagonal-form zero searches.

Must stay observationally identical to fieldlab._zero_scan_py, which is
the import-time fallback when this extension is unavailable.
"""

COMPILED = True


def scan_diagonal_zero(int n, int q, int[::1] value_table, int[::1] add_table):
    """First nontrivial zero of a coded diagonal form, or None."""
    cdef int[64] v
    cdef int[65] acc
    cdef int i, j
    if n > 64:
        raise ValueError("kernel supports at most 64 variables")
    for i in range(n):
        v[i] = 0
    for i in range(n + 1):
        acc[i] = 0
    while True:
        j = n - 1
        while j >= 0:
            v[j] += 1
            if v[j] < q:
                break
            v[j] = 0
            j -= 1
        if j < 0:
            return None
        for i in range(j, n):
            acc[i + 1] = add_table[acc[i] * q + value_table[i * q + v[i]]]
        if acc[n] == 0:
            return tuple([v[i] for i in range(n)])
