"""Pure-Python fallback for the exhaustive diagonal-form scan kernel.

Semantics are identical to the compiled fieldlab._zero_scan: iterate all
vectors of [0,q)^n in odometer order (last coordinate fastest), skip the
all-zero vector, and return the first vector whose coded form value is 0,
or None after a full scan.
"""

COMPILED = False


def scan_diagonal_zero(n, q, value_table, add_table):
    """First nontrivial zero of a coded diagonal form, or None.

    value_table: flat n*q ints, value_table[i*q + x] = code of c_i * x^d.
    add_table:   flat q*q addition table of codes.
    """
    v = [0] * n
    acc = [0] * (n + 1)
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
            return tuple(v)
