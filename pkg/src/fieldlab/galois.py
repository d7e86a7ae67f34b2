"""Exact arithmetic in finite fields GF(p^k), built as towers of extensions.

A field is described by an immutable FieldDesc; elements are immutable
FieldElem values carrying their descriptor.  Extensions may be stacked
(towers), so GF(q^l) can be built as a degree-l step over GF(q) rather
than flattened to the prime field; the q-power Frobenius relative to the
base of a step is then a single pow.

Internal element representation ("rep"): an int in [0, p) for a prime
field, and a tuple of base-field reps (coefficients, low degree first)
for an extension.  Reps are always reduced, so equality and hashing are
structural.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import cached_property

from .errors import (
    BudgetExceeded,
    DivisionByZero,
    FieldMismatch,
    NotPrime,
    ParseError,
    ReducibleModulus,
)

DEFAULT_ENUM_BUDGET = 2**20


def enum_budget() -> int:
    """Element-enumeration budget; override with FIELDLAB_BUDGET."""
    raw = os.environ.get("FIELDLAB_BUDGET")
    return int(raw) if raw else DEFAULT_ENUM_BUDGET


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class FieldDesc:
    """A finite field: either GF(p) or a degree-k step over another field."""

    p: int
    degree: int
    modulus: tuple | None  # tail coefficients (c0..c_{k-1}) as base reps
    base: FieldDesc | None

    # -- basic structure ----------------------------------------------------

    @property
    def is_prime_field(self) -> bool:
        return self.base is None

    @cached_property
    def order(self) -> int:
        if self.base is None:
            return self.p
        return self.base.order**self.degree

    @property
    def characteristic(self) -> int:
        return self.p

    @cached_property
    def tower_degrees(self) -> tuple[int, ...]:
        """Extension degrees from the prime field upward."""
        if self.base is None:
            return ()
        return self.base.tower_degrees + (self.degree,)

    def __repr__(self):
        if self.base is None:
            return f"GF({self.p})"
        degs = "^".join(str(d) for d in self.tower_degrees)
        return f"GF({self.p}^{degs})"

    # -- element constructors -----------------------------------------------

    def zero(self) -> FieldElem:
        return FieldElem(self, self._rzero())

    def one(self) -> FieldElem:
        return FieldElem(self, self._rone())

    def elem(self, value) -> FieldElem:
        """Coerce an int (image of Z -> field) or coefficient list."""
        if isinstance(value, FieldElem):
            if value.field != self:
                raise FieldMismatch(f"element of {value.field!r} used in {self!r}")
            return value
        if isinstance(value, int):
            return FieldElem(self, self._rfrom_int(value))
        if isinstance(value, (list, tuple)):
            if self.base is None:
                raise FieldMismatch("coefficient vectors need an extension field")
            if len(value) > self.degree:
                raise FieldMismatch(
                    f"{len(value)} coefficients for a degree-{self.degree} extension"
                )
            coeffs = [self.base.elem(v).rep for v in value]
            coeffs += [self.base._rzero()] * (self.degree - len(coeffs))
            return FieldElem(self, tuple(coeffs))
        raise TypeError(f"cannot coerce {value!r} into {self!r}")

    def from_code(self, code: int) -> FieldElem:
        if not 0 <= code < self.order:
            raise ValueError(f"code {code} out of range for {self!r}")
        return FieldElem(self, self._rfrom_code(code))

    def to_code(self, x: FieldElem) -> int:
        if x.field != self:
            raise FieldMismatch("code lookup in the wrong field")
        return self._rto_code(x.rep)

    def elements(self):
        """All elements in code order.  Raises BudgetExceeded for big fields."""
        if self.order > enum_budget():
            raise BudgetExceeded(
                f"enumerating {self!r} ({self.order} elements) exceeds budget"
            )
        for code in range(self.order):
            yield FieldElem(self, self._rfrom_code(code))

    # -- rep-level arithmetic -----------------------------------------------

    def _rzero(self):
        if self.base is None:
            return 0
        return (self.base._rzero(),) * self.degree

    def _rone(self):
        if self.base is None:
            return 1
        return (self.base._rone(),) + (self.base._rzero(),) * (self.degree - 1)

    def _rfrom_int(self, n):
        if self.base is None:
            return n % self.p
        return (self.base._rfrom_int(n),) + (self.base._rzero(),) * (self.degree - 1)

    def _rfrom_code(self, code):
        if self.base is None:
            return code
        q = self.base.order
        coeffs = []
        for _ in range(self.degree):
            coeffs.append(self.base._rfrom_code(code % q))
            code //= q
        return tuple(coeffs)

    def _rto_code(self, rep):
        if self.base is None:
            return rep
        q = self.base.order
        code = 0
        for c in reversed(rep):
            code = code * q + self.base._rto_code(c)
        return code

    def _radd(self, a, b):
        if self.base is None:
            return (a + b) % self.p
        return tuple(self.base._radd(x, y) for x, y in zip(a, b))

    def _rneg(self, a):
        if self.base is None:
            return (-a) % self.p
        return tuple(self.base._rneg(x) for x in a)

    def _rsub(self, a, b):
        return self._radd(a, self._rneg(b))

    def _rmul(self, a, b):
        if self.base is None:
            return (a * b) % self.p
        k = self.degree
        bz = self.base._rzero()
        raw = [bz] * (2 * k - 1)
        for i, x in enumerate(a):
            if x != bz:
                for j, y in enumerate(b):
                    raw[i + j] = self.base._radd(raw[i + j], self.base._rmul(x, y))
        # reduce by x^k = -tail
        for deg in range(2 * k - 2, k - 1, -1):
            c = raw[deg]
            if c != bz:
                raw[deg] = bz
                for j, m in enumerate(self.modulus):
                    raw[deg - k + j] = self.base._rsub(
                        raw[deg - k + j], self.base._rmul(c, m)
                    )
        return tuple(raw[:k])

    def _rpow(self, a, n):
        r = self._rone()
        while n:
            if n & 1:
                r = self._rmul(r, a)
            a = self._rmul(a, a)
            n >>= 1
        return r

    def _rinv(self, a):
        if a == self._rzero():
            raise DivisionByZero(f"inverse of zero in {self!r}")
        if self.base is None:
            return pow(a, self.p - 2, self.p)
        return self._rpow(a, self.order - 2)

    # -- derived operations ---------------------------------------------------

    @property
    def base_order(self) -> int:
        return self.p if self.base is None else self.base.order

    def frobenius(self, x: FieldElem) -> FieldElem:
        """x raised to the order of the base field (identity on a prime field)."""
        if x.field != self:
            raise FieldMismatch("frobenius argument from the wrong field")
        return FieldElem(self, self._rpow(x.rep, self.base_order))

    def is_dth_power(self, x: FieldElem, d: int) -> bool:
        """Whether x = y^d for some y; decided via x^((q-1)/gcd(d,q-1))."""
        if x.field != self:
            raise FieldMismatch("d-th power test in the wrong field")
        if d < 1:
            raise ValueError("d must be positive")
        if x.rep == self._rzero():
            return True
        g = math.gcd(d, self.order - 1)
        return self._rpow(x.rep, (self.order - 1) // g) == self._rone()


@dataclass(frozen=True)
class FieldElem:
    field: FieldDesc
    rep: int | tuple

    def _coerce(self, other) -> FieldElem:
        if isinstance(other, FieldElem):
            if other.field != self.field:
                raise FieldMismatch(
                    f"mixing elements of {self.field!r} and {other.field!r}"
                )
            return other
        if isinstance(other, int):
            return self.field.elem(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElem(self.field, self.field._radd(self.rep, o.rep))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElem(self.field, self.field._rsub(self.rep, o.rep))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElem(self.field, self.field._rsub(o.rep, self.rep))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElem(self.field, self.field._rmul(self.rep, o.rep))

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElem(self.field, self.field._rneg(self.rep))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElem(self.field, self.field._rmul(self.rep, self.field._rinv(o.rep)))

    def __pow__(self, n: int):
        if n < 0:
            return FieldElem(
                self.field, self.field._rpow(self.field._rinv(self.rep), -n)
            )
        return FieldElem(self.field, self.field._rpow(self.rep, n))

    def inverse(self) -> FieldElem:
        return FieldElem(self.field, self.field._rinv(self.rep))

    def is_zero(self) -> bool:
        return self.rep == self.field._rzero()

    @property
    def code(self) -> int:
        return self.field._rto_code(self.rep)

    def __repr__(self):
        return format_element(self)


# ---------------------------------------------------------------------------
# constructors


def make_prime_field(p: int, budget: int | None = None) -> FieldDesc:
    """GF(p).  Primality is checked by trial division (desk scale)."""
    if not _is_prime(p):
        raise NotPrime(f"{p} is not prime")
    limit = budget if budget is not None else enum_budget()
    if p > limit:
        raise BudgetExceeded(f"field order {p} exceeds the enumeration budget {limit}")
    return FieldDesc(p=p, degree=1, modulus=None, base=None)


def make_extension(
    base: FieldDesc, k: int, modulus=None, budget: int | None = None
) -> FieldDesc:
    """Degree-k extension of base.

    If modulus is omitted, the first monic irreducible polynomial of degree
    k in code order (constant coefficient varying fastest) is used, so
    repeated runs build identical towers.  A supplied modulus is given as
    its tail (c0..c_{k-1}) or as a full monic coefficient list.
    """
    if k < 1:
        raise ValueError("extension degree must be >= 1")
    limit = budget if budget is not None else enum_budget()
    order = base.order**k
    if order > limit:
        raise BudgetExceeded(f"field order {order} exceeds the enumeration budget {limit}")
    if modulus is not None:
        tail = [base.elem(c) for c in modulus]
        if len(tail) == k + 1:
            if tail[-1] != base.one():
                raise ReducibleModulus("modulus must be monic")
            tail = tail[:-1]
        if len(tail) != k:
            raise ReducibleModulus(f"modulus must have degree {k}")
        tail_reps = tuple(c.rep for c in tail)
        if not _tail_irreducible(base, tail_reps, k):
            raise ReducibleModulus("supplied modulus factors over the base field")
        return FieldDesc(p=base.p, degree=k, modulus=tail_reps, base=base)
    for code in range(base.order**k):
        tail_reps = tuple(
            base._rfrom_code(c)
            for c in _digits(code, base.order, k)
        )
        if _tail_irreducible(base, tail_reps, k):
            return FieldDesc(p=base.p, degree=k, modulus=tail_reps, base=base)
    raise ReducibleModulus(f"no irreducible polynomial of degree {k} found")  # unreachable


def _digits(code: int, radix: int, width: int) -> list[int]:
    out = []
    for _ in range(width):
        out.append(code % radix)
        code //= radix
    return out


# ---------------------------------------------------------------------------
# polynomial helpers over a base field (reps, low degree first), used only
# for irreducibility testing


def _pnorm(F: FieldDesc, f: list) -> list:
    z = F._rzero()
    while f and f[-1] == z:
        f.pop()
    return f


def _pmod(F: FieldDesc, f: list, g: list) -> list:
    g = _pnorm(F, list(g))
    f = _pnorm(F, list(f))
    inv_lead = F._rinv(g[-1])
    while len(f) >= len(g):
        c = F._rmul(f[-1], inv_lead)
        shift = len(f) - len(g)
        for i, gc in enumerate(g):
            f[shift + i] = F._rsub(f[shift + i], F._rmul(c, gc))
        f = _pnorm(F, f)
    return f


def _pmulmod(F: FieldDesc, a: list, b: list, m: list) -> list:
    z = F._rzero()
    raw = [z] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x != z:
            for j, y in enumerate(b):
                raw[i + j] = F._radd(raw[i + j], F._rmul(x, y))
    return _pmod(F, raw, m)


def _ppowmod(F: FieldDesc, a: list, n: int, m: list) -> list:
    r = [F._rone()]
    a = _pmod(F, list(a), m)
    while n:
        if n & 1:
            r = _pmulmod(F, r, a, m)
        a = _pmulmod(F, a, a, m)
        n >>= 1
    return r


def _pgcd(F: FieldDesc, a: list, b: list) -> list:
    a, b = _pnorm(F, list(a)), _pnorm(F, list(b))
    while b:
        a, b = b, _pmod(F, a, b)
    return a


def _tail_irreducible(F: FieldDesc, tail: tuple, k: int) -> bool:
    """Rabin irreducibility test for x^k + tail over F."""
    if k == 1:
        return True
    m = list(tail) + [F._rone()]
    Q = F.order
    x = [F._rzero(), F._rone()]
    # x^(Q^k) == x mod m
    xq = _ppowmod(F, x, Q**k, m)
    if _pnorm(F, [F._rsub(u, v) for u, v in _zip_pad(F, xq, x)]):
        return False
    for r in _prime_divisors(k):
        xe = _ppowmod(F, x, Q ** (k // r), m)
        diff = [F._rsub(u, v) for u, v in _zip_pad(F, xe, x)]
        g = _pgcd(F, diff, m)
        if len(g) != 1:
            return False
    return True


def _zip_pad(F: FieldDesc, a: list, b: list):
    z = F._rzero()
    n = max(len(a), len(b))
    a = a + [z] * (n - len(a))
    b = b + [z] * (n - len(b))
    return zip(a, b)


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


# ---------------------------------------------------------------------------
# module-level operation aliases and tower utilities


def enumerate_elements(field: FieldDesc) -> list[FieldElem]:
    return list(field.elements())


def frobenius(x: FieldElem) -> FieldElem:
    return x.field.frobenius(x)


def is_dth_power(x: FieldElem, d: int) -> bool:
    return x.field.is_dth_power(x, d)


def embed(x: FieldElem, target: FieldDesc) -> FieldElem:
    """Embed x along the tower into target (which must extend x.field)."""
    if x.field == target:
        return x
    if target.base is None:
        raise FieldMismatch(f"{x.field!r} is not a subfield step of {target!r}")
    inner = embed(x, target.base)
    rep = (inner.rep,) + (target.base._rzero(),) * (target.degree - 1)
    return FieldElem(target, rep)


def in_base_field(x: FieldElem) -> bool:
    """Whether x lies in the base field of its tower step."""
    return x.field.frobenius(x) == x


# ---------------------------------------------------------------------------
# element literals: integers for prime fields, (elt c0 c1 ...) for extensions


def format_element(x: FieldElem) -> str:
    if x.field.is_prime_field:
        return str(x.rep)
    parts = " ".join(
        format_element(FieldElem(x.field.base, c)) for c in x.rep
    )
    return f"(elt {parts})"


def parse_element(field: FieldDesc, text: str) -> FieldElem:
    elem, pos = _parse_elem(field, text, 0)
    if text[pos:].strip():
        raise ParseError("trailing input after element literal", pos)
    return elem


def _parse_elem(field: FieldDesc, text: str, pos: int):
    while pos < len(text) and text[pos].isspace():
        pos += 1
    if pos >= len(text):
        raise ParseError("empty element literal", pos)
    if text[pos] == "(":
        end = pos + 1
        while end < len(text) and text[end].isspace():
            end += 1
        if text[end : end + 3] != "elt":
            raise ParseError("expected (elt ...)", pos)
        if field.is_prime_field:
            raise ParseError("(elt ...) literal for a prime-field element", pos)
        pos = end + 3
        coeffs = []
        while True:
            while pos < len(text) and text[pos].isspace():
                pos += 1
            if pos >= len(text):
                raise ParseError("unterminated (elt ...)", pos)
            if text[pos] == ")":
                pos += 1
                break
            c, pos = _parse_elem(field.base, text, pos)
            coeffs.append(c)
        if len(coeffs) > field.degree:
            raise ParseError(f"too many coefficients for {field!r}", pos)
        return field.elem(coeffs), pos
    # bare integer
    start = pos
    if text[pos] in "+-":
        pos += 1
    while pos < len(text) and text[pos].isdigit():
        pos += 1
    if pos == start:
        raise ParseError(f"unexpected character {text[start]!r}", start)
    return field.elem(int(text[start:pos])), pos
