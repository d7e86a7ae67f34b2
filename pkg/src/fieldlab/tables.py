"""Table-backed arithmetic on integer-coded field elements.

Hot loops (point enumeration, exhaustive form scans, formula evaluation)
work on int codes instead of FieldElem objects.  Multiplication runs on
discrete-log tables and addition on a Zech-style successor table, so every
operation is O(1) lookups.  Tables are built once per field and cached.

Codes agree with FieldDesc.from_code / to_code, i.e. mixed-radix encodings
of the coefficient tower.
"""

from __future__ import annotations

import threading
from array import array

from .errors import BudgetExceeded, DivisionByZero
from .galois import FieldDesc, enum_budget

_CACHE: dict[FieldDesc, "FieldTables"] = {}
_CACHE_LOCK = threading.Lock()

ADD_TABLE_MAX_Q = 1024


def tables_for(field: FieldDesc) -> "FieldTables":
    with _CACHE_LOCK:
        t = _CACHE.get(field)
        if t is None:
            t = FieldTables(field)
            _CACHE[field] = t
        return t


def _prime_divisors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


class FieldTables:
    def __init__(self, field: FieldDesc):
        if field.order > enum_budget():
            raise BudgetExceeded(
                f"building tables for {field!r} ({field.order}) exceeds the budget"
            )
        self.field = field
        self.q = q = field.order
        self.p = field.p

        # exp/log for the cyclic group of units
        g = self._find_generator()
        exp = array("q", [0] * (q - 1))
        log = array("q", [-1] * q)
        one = field._rone()
        cur = one
        for i in range(q - 1):
            c = field._rto_code(cur)
            exp[i] = c
            log[c] = i
            cur = field._rmul(cur, g)
        if cur != one:
            raise AssertionError("generator order mismatch")
        self.exp = exp
        self.log = log

        # successor table: code of x + 1 for every code
        one_rep = one
        addone = array("q", [0] * q)
        for code in range(q):
            rep = field._rfrom_code(code)
            addone[code] = field._rto_code(field._radd(rep, one_rep))
        self.addone = addone

        self.zero = 0
        self.one = field._rto_code(one)
        self.neg_one = self.int_code(-1)
        self._add_table = None
        self._as_solve = None

    def _find_generator(self):
        field = self.field
        q = self.q
        cofactors = [(q - 1) // r for r in _prime_divisors(q - 1)]
        one = field._rone()
        for code in range(1, q):
            g = field._rfrom_code(code)
            if all(field._rpow(g, c) != one for c in cofactors):
                return g
        return one  # q = 2: the unit group is trivial

    # -- scalar ops -----------------------------------------------------------

    def int_code(self, n: int) -> int:
        """Code of the image of the integer n."""
        return self.field._rto_code(self.field._rfrom_int(n))

    def add(self, a: int, b: int) -> int:
        if a == 0:
            return b
        if b == 0:
            return a
        la = self.log[a]
        d = (self.log[b] - la) % (self.q - 1)
        s = self.addone[self.exp[d]]
        if s == 0:
            return 0
        return self.exp[(la + self.log[s]) % (self.q - 1)]

    def neg(self, a: int) -> int:
        return self.mul(a, self.neg_one)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp[(self.log[a] + self.log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero")
        return self.exp[(-self.log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, n: int) -> int:
        if a == 0:
            if n == 0:
                return self.one
            if n < 0:
                raise DivisionByZero("0 to a negative power")
            return 0
        return self.exp[(self.log[a] * n) % (self.q - 1)]

    def sqrt(self, a: int) -> int | None:
        """A square root of a, or None; in char 2 always the unique root."""
        if a == 0:
            return 0
        la = self.log[a]
        if self.p == 2:
            return self.pow(a, self.q // 2)
        if la % 2:
            return None
        return self.exp[la // 2]

    def artin_schreier_root(self, v: int) -> int | None:
        """A solution z of z^2 + z = v in char 2, or None."""
        if self._as_solve is None:
            table = array("q", [-1] * self.q)
            for z in range(self.q):
                w = self.add(self.mul(z, z), z)
                if table[w] == -1:
                    table[w] = z
            self._as_solve = table
        z = self._as_solve[v]
        return None if z == -1 else z

    # -- bulk tables ------------------------------------------------------------

    def add_table(self) -> array:
        """Flat q*q addition table (codes); only for q <= ADD_TABLE_MAX_Q."""
        if self.q > ADD_TABLE_MAX_Q:
            raise BudgetExceeded(f"addition table for q={self.q} is too large")
        if self._add_table is None:
            q = self.q
            t = array("i", [0] * (q * q))
            for a in range(q):
                row = a * q
                for b in range(a, q):
                    s = self.add(a, b)
                    t[row + b] = s
                    t[b * q + a] = s
            self._add_table = t
        return self._add_table

    def frobenius_map(self, power: int | None = None) -> array:
        """Permutation code -> code^s where s defaults to the base-field order."""
        s = power if power is not None else self.field.base_order
        out = array("q", [0] * self.q)
        for c in range(1, self.q):
            out[c] = self.pow(c, s)
        return out
