"""Formal Laurent series over a finite field or over another Laurent domain.

Series are windows of known coefficients starting at the valuation; the
exact flag records that the window is the complete support (a Laurent
polynomial), in which case arithmetic is exact.  Truncated operands track
precision pessimistically, and an operation that cannot certify the
leading term of its result (total cancellation inside the window) raises
PrecisionExhausted rather than guessing.

Iterated domains k((t1))((t2))... arise by stacking LaurentDomain on a
LaurentDomain base; coefficients are then themselves series.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DivisionByZero, FieldMismatch, PrecisionExhausted
from .galois import FieldDesc

DEFAULT_PRECISION = 8


@dataclass(frozen=True)
class LaurentDomain:
    base: object  # FieldDesc or LaurentDomain
    var: str

    @property
    def characteristic(self) -> int:
        return self.base.characteristic if isinstance(self.base, LaurentDomain) else self.base.p

    def __repr__(self):
        return f"{self.base!r}(({self.var}))"

    def _bzero(self):
        return self.base.zero()

    def _bone(self):
        return self.base.one()

    def zero(self) -> "LaurentSeries":
        return LaurentSeries(self, 0, (), True)

    def one(self) -> "LaurentSeries":
        return LaurentSeries(self, 0, (self._bone(),), True)

    def t(self) -> "LaurentSeries":
        """The uniformizer: the series with a single coefficient 1 at degree 1."""
        return LaurentSeries(self, 1, (self._bone(),), True)

    def coerce(self, value) -> "LaurentSeries":
        """Accept a series of this domain, or anything coercible into the
        base (including series of inner domains), lifted as a constant."""
        if isinstance(value, LaurentSeries) and value.domain == self:
            return value
        base_val = _coerce_base(self.base, value)
        if base_val.is_zero():
            return self.zero()
        return LaurentSeries(self, 0, (base_val,), True)

    def series(self, valuation: int, coeffs, exact: bool = True) -> "LaurentSeries":
        """Build a series from its coefficient window starting at valuation."""
        vals = [_coerce_base(self.base, c) for c in coeffs]
        return _normalize(self, valuation, vals, exact)

    def random_poly(self, rng, vmin: int, vmax: int, width: int) -> "LaurentSeries":
        """A random exact Laurent polynomial with nonzero leading coefficient."""
        v = rng.randint(vmin, vmax)
        w = rng.randint(1, width)
        coeffs = [self._random_base(rng, leading=(i == 0)) for i in range(w)]
        return _normalize(self, v, coeffs, True)

    def _random_base(self, rng, leading: bool):
        if isinstance(self.base, LaurentDomain):
            if not leading and rng.random() < 0.25:
                return self.base.zero()
            return self.base.random_poly(rng, 0, 2, 3)
        q = self.base.order
        code = rng.randrange(1, q) if leading else rng.randrange(q)
        return self.base.from_code(code)


def _coerce_base(base, value):
    if isinstance(base, LaurentDomain):
        return base.coerce(value)
    if isinstance(value, LaurentSeries):
        raise FieldMismatch(f"series from {value.domain!r} used over {base!r}")
    return base.elem(value)


def _normalize(domain, v, coeffs, exact):
    # strip leading zeros (they shift the valuation up)
    i = 0
    while i < len(coeffs) and coeffs[i].is_zero():
        i += 1
    if i == len(coeffs):
        if exact:
            return LaurentSeries(domain, 0, (), True)
        raise PrecisionExhausted(
            f"all {len(coeffs)} known coefficients vanish; leading term unknown"
        )
    v += i
    coeffs = coeffs[i:]
    if exact:
        j = len(coeffs)
        while j > 0 and coeffs[j - 1].is_zero():
            j -= 1
        coeffs = coeffs[:j]
    return LaurentSeries(domain, v, tuple(coeffs), exact)


@dataclass(frozen=True)
class LaurentSeries:
    domain: LaurentDomain
    v: int
    coeffs: tuple
    exact: bool

    def is_zero(self) -> bool:
        """True only for the distinguished exact zero."""
        return self.exact and not self.coeffs

    @property
    def precision(self) -> int:
        return len(self.coeffs)

    @property
    def known_upto(self):
        """Exclusive upper bound of known degrees (None = fully known)."""
        return None if self.exact else self.v + len(self.coeffs)

    def valuation(self) -> int | None:
        """The valuation; None for the exact zero."""
        if self.is_zero():
            return None
        return self.v

    def coefficient(self, k: int):
        """Coefficient of degree k; degrees above a truncated window raise."""
        if k < self.v:
            return self.domain._bzero()
        if k < self.v + len(self.coeffs):
            return self.coeffs[k - self.v]
        if self.exact:
            return self.domain._bzero()
        raise PrecisionExhausted(f"coefficient of degree {k} beyond the window")

    # -- arithmetic -------------------------------------------------------------

    def _check(self, other) -> "LaurentSeries":
        if isinstance(other, LaurentSeries):
            if other.domain != self.domain:
                raise FieldMismatch("series from different domains")
            return other
        return self.domain.coerce(other)

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        lo = min(self.v, other.v)
        limits = []
        for s in (self, other):
            if not s.exact:
                limits.append(s.v + len(s.coeffs))
        if limits:
            hi = min(limits)
        else:
            hi = max(self.v + len(self.coeffs), other.v + len(other.coeffs))
        if hi <= lo:
            raise PrecisionExhausted("windows do not overlap enough to add")
        coeffs = [
            self.coefficient(k) + other.coefficient(k) for k in range(lo, hi)
        ]
        return _normalize(self.domain, lo, coeffs, self.exact and other.exact)

    __radd__ = __add__

    def __neg__(self):
        return LaurentSeries(
            self.domain, self.v, tuple(-c for c in self.coeffs), self.exact
        )

    def __sub__(self, other):
        other = self._check(other)
        return self + (-other)

    def __rsub__(self, other):
        other = self._check(other)
        return other + (-self)

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return self.domain.zero()
        exact = self.exact and other.exact
        la, lb = len(self.coeffs), len(other.coeffs)
        if exact:
            width = la + lb - 1
        else:
            width = min(la if not self.exact else 10**9, lb if not other.exact else 10**9)
        bz = self.domain._bzero()
        out = [bz] * width
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                k = i + j
                if k >= width:
                    break
                out[k] = out[k] + a * b
        return _normalize(self.domain, self.v + other.v, out, exact)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return inverse(self) ** (-n)
        result = self.domain.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __repr__(self):
        if self.is_zero():
            return "0"
        t = self.domain.var
        parts = []
        for i, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            k = self.v + i
            if k == 0:
                parts.append(f"{c!r}")
            else:
                parts.append(f"{c!r}*{t}^{k}")
        tail = "" if self.exact else f" + O({t}^{self.v + len(self.coeffs)})"
        return " + ".join(parts) + tail


def valuation(s: LaurentSeries) -> int | None:
    return s.valuation()


def inverse(s: LaurentSeries, precision: int = DEFAULT_PRECISION) -> LaurentSeries:
    """Multiplicative inverse.

    Exact for monomials; otherwise a truncated geometric expansion with
    the given precision (or the operand's window if smaller).
    """
    if s.is_zero():
        raise DivisionByZero("inverse of the zero series")
    dom = s.domain
    lead = s.coeffs[0]
    lead_inv = _base_inverse(lead, precision)
    if len(s.coeffs) == 1 and s.exact:
        return _normalize(dom, -s.v, [lead_inv], True)
    width = precision if s.exact else min(precision, len(s.coeffs))
    # s = lead * t^v * (1 + u) with v(u) >= 1: invert by geometric series
    u_coeffs = [lead_inv * c for c in s.coeffs[1:width]]
    bz = dom._bzero()
    out = [bz] * width
    out[0] = dom._bone()
    # accumulate (-u)^k truncated to the window
    term = [bz] + [-c for c in u_coeffs]
    term += [bz] * (width - len(term))
    power = list(term)
    for _ in range(width):
        if all(c.is_zero() for c in power):
            break
        for k in range(width):
            out[k] = out[k] + power[k]
        nxt = [bz] * width
        for i, a in enumerate(power):
            if a.is_zero():
                continue
            for j, b in enumerate(term):
                if i + j < width and not b.is_zero():
                    nxt[i + j] = nxt[i + j] + a * b
        power = nxt
    scaled = [lead_inv * c for c in out]
    return _normalize(dom, -s.v, scaled, False)


def _base_inverse(c, precision):
    if isinstance(c, LaurentSeries):
        return inverse(c, precision)
    return c.inverse()


def substitute(s: LaurentSeries, r: LaurentSeries, precision: int = DEFAULT_PRECISION) -> LaurentSeries:
    """Formal substitution t -> r, where r must have positive valuation
    (so the composition is summable within any finite window)."""
    r = s.domain.coerce(r)
    if s.is_zero():
        return s.domain.zero()
    if r.is_zero() or r.valuation() is None or r.valuation() < 1:
        raise ValueError("substitution target must have valuation >= 1")
    acc = s.domain.zero()
    if s.v >= 0:
        power = r**s.v
    else:
        power = inverse(r, precision) ** (-s.v)
    for c in s.coeffs:
        if not c.is_zero():
            term = LaurentSeries(s.domain, 0, (c,), True) * power
            acc = acc + term if not acc.is_zero() else term
        power = power * r
    return acc


def make_series(domain: LaurentDomain, valuation_: int, coeffs, exact: bool = True) -> LaurentSeries:
    return domain.series(valuation_, coeffs, exact)
