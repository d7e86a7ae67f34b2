"""Weierstrass elliptic curves over finite fields.

Curves are given in long form y^2 + a1*xy + a3*y = x^3 + a2*x^2 + a4*x + a6
so the chord-tangent group law works uniformly in characteristics 2 and 3.
Point counting is naive (per-x quadratic solving, O(q)); extension counts
use the integer recurrence driven by the trace of Frobenius, never
enumeration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import (
    CharTwo,
    CheckFailed,
    CurveMismatch,
    FieldMismatch,
    PoleOfZ,
    SearchExhausted,
    SingularCurve,
    TwistDegenerate,
)
from .galois import FieldDesc, FieldElem, embed, format_element
from .tables import tables_for


@dataclass(frozen=True)
class Curve:
    field: FieldDesc
    a1: FieldElem
    a2: FieldElem
    a3: FieldElem
    a4: FieldElem
    a6: FieldElem

    @property
    def coeffs(self):
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    def is_short_form(self) -> bool:
        return self.a1.is_zero() and self.a2.is_zero() and self.a3.is_zero()

    def __repr__(self):
        cs = ",".join(format_element(c) for c in self.coeffs)
        return f"E[{cs}]/{self.field!r}"


@dataclass(frozen=True)
class Point:
    x: FieldElem | None
    y: FieldElem | None

    @classmethod
    def infinity(cls) -> "Point":
        return cls(None, None)

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def __repr__(self):
        if self.is_infinity:
            return "O"
        return f"({self.x!r}, {self.y!r})"


INFINITY = Point.infinity()


@dataclass(frozen=True)
class FrobeniusData:
    q: int
    p: int
    n1: int
    trace: int
    ordinary: bool


def discriminant(field: FieldDesc, a1, a2, a3, a4, a6) -> FieldElem:
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    return -(b2 * b2 * b8) - 8 * (b4 * b4 * b4) - 27 * (b6 * b6) + 9 * (b2 * b4 * b6)


def new_curve(field: FieldDesc, a1, a2, a3, a4, a6) -> Curve:
    a1, a2, a3, a4, a6 = (field.elem(c) for c in (a1, a2, a3, a4, a6))
    if discriminant(field, a1, a2, a3, a4, a6).is_zero():
        raise SingularCurve("vanishing discriminant")
    return Curve(field, a1, a2, a3, a4, a6)


def is_on_curve(curve: Curve, P: Point) -> bool:
    if P.is_infinity:
        return True
    x, y = P.x, P.y
    if x.field != curve.field:
        raise FieldMismatch("point coordinates from the wrong field")
    a1, a2, a3, a4, a6 = curve.coeffs
    return (y * y + a1 * x * y + a3 * y) == (x * x * x + a2 * x * x + a4 * x + a6)


def _require_on_curve(curve: Curve, P: Point):
    if not is_on_curve(curve, P):
        raise CurveMismatch(f"{P!r} is not on {curve!r}")


def neg(curve: Curve, P: Point) -> Point:
    _require_on_curve(curve, P)
    if P.is_infinity:
        return P
    return Point(P.x, -P.y - curve.a1 * P.x - curve.a3)


def add(curve: Curve, P: Point, Q: Point) -> Point:
    _require_on_curve(curve, P)
    _require_on_curve(curve, Q)
    if P.is_infinity:
        return Q
    if Q.is_infinity:
        return P
    a1, a2, a3, a4, _ = curve.coeffs
    x1, y1 = P.x, P.y
    x2, y2 = Q.x, Q.y
    if x1 == x2:
        if y2 == -y1 - a1 * x1 - a3:
            return INFINITY
        num = 3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1
        den = 2 * y1 + a1 * x1 + a3
    else:
        num = y2 - y1
        den = x2 - x1
    lam = num / den
    nu = y1 - lam * x1
    x3 = lam * lam + a1 * lam - a2 - x1 - x2
    y3 = -(lam + a1) * x3 - nu - a3
    return Point(x3, y3)


def scalar_mul(curve: Curve, n: int, P: Point) -> Point:
    _require_on_curve(curve, P)
    if n < 0:
        return scalar_mul(curve, -n, neg(curve, P))
    R = INFINITY
    A = P
    while n:
        if n & 1:
            R = add(curve, R, A)
        A = add(curve, A, A)
        n >>= 1
    return R


# ---------------------------------------------------------------------------
# coded fast path: points as (xcode, ycode) tuples, infinity as None


class CodedCurve:
    """Table-backed group law for hot loops; mirrors the public operations."""

    def __init__(self, curve: Curve):
        self.curve = curve
        self.T = T = tables_for(curve.field)
        self.a = tuple(T.field.to_code(c) for c in curve.coeffs)
        self.q = T.q
        self.p = T.p
        self.c2 = T.int_code(2)
        self.c3 = T.int_code(3)
        self.c4 = T.int_code(4)

    def on_curve(self, P) -> bool:
        if P is None:
            return True
        T = self.T
        a1, a2, a3, a4, a6 = self.a
        x, y = P
        lhs = T.add(T.mul(y, y), T.add(T.mul(a1, T.mul(x, y)), T.mul(a3, y)))
        x2 = T.mul(x, x)
        rhs = T.add(T.add(T.mul(x2, x), T.mul(a2, x2)), T.add(T.mul(a4, x), a6))
        return lhs == rhs

    def neg(self, P):
        if P is None:
            return None
        T = self.T
        a1, _, a3, _, _ = self.a
        x, y = P
        return (x, T.neg(T.add(y, T.add(T.mul(a1, x), a3))))

    def add(self, P, Q):
        if P is None:
            return Q
        if Q is None:
            return P
        T = self.T
        a1, a2, a3, a4, _ = self.a
        x1, y1 = P
        x2, y2 = Q
        if x1 == x2:
            if y2 == T.neg(T.add(y1, T.add(T.mul(a1, x1), a3))):
                return None
            num = T.add(
                T.add(T.mul(self.c3, T.mul(x1, x1)), T.mul(self.c2, T.mul(a2, x1))),
                T.sub(a4, T.mul(a1, y1)),
            )
            den = T.add(T.mul(self.c2, y1), T.add(T.mul(a1, x1), a3))
        else:
            num = T.sub(y2, y1)
            den = T.sub(x2, x1)
        lam = T.div(num, den)
        nu = T.sub(y1, T.mul(lam, x1))
        x3 = T.sub(T.add(T.mul(lam, lam), T.mul(a1, lam)), T.add(a2, T.add(x1, x2)))
        y3 = T.sub(T.neg(T.mul(T.add(lam, a1), x3)), T.add(nu, a3))
        return (x3, y3)

    def scalar(self, n: int, P):
        if n < 0:
            return self.scalar(-n, self.neg(P))
        R = None
        A = P
        while n:
            if n & 1:
                R = self.add(R, A)
            A = self.add(A, A)
            n >>= 1
        return R

    def affine_points(self) -> list:
        """All affine points, ordered by (x code, y code)."""
        T = self.T
        a1, a2, a3, a4, a6 = self.a
        out = []
        for x in range(self.q):
            h = T.add(T.mul(a1, x), a3)
            x2 = T.mul(x, x)
            rhs = T.add(T.add(T.mul(x2, x), T.mul(a2, x2)), T.add(T.mul(a4, x), a6))
            if self.p == 2:
                if h == 0:
                    out.append((x, T.pow(rhs, self.q // 2) if rhs else 0))
                else:
                    v = T.div(rhs, T.mul(h, h))
                    z = T.artin_schreier_root(v)
                    if z is not None:
                        y1 = T.mul(h, z)
                        y2 = T.add(y1, h)
                        out.extend([(x, min(y1, y2)), (x, max(y1, y2))])
            else:
                # (y + h/2)^2 = rhs + h^2/4
                half_h = T.div(h, self.c2)
                u = T.add(rhs, T.div(T.mul(h, h), self.c4))
                s = T.sqrt(u)
                if s is None:
                    continue
                if s == 0:
                    out.append((x, T.neg(half_h)))
                else:
                    y1 = T.sub(s, half_h)
                    y2 = T.sub(T.neg(s), half_h)
                    out.extend([(x, min(y1, y2)), (x, max(y1, y2))])
        return out

    def to_point(self, P) -> Point:
        if P is None:
            return INFINITY
        F = self.curve.field
        return Point(F.from_code(P[0]), F.from_code(P[1]))

    def from_point(self, P: Point):
        if P.is_infinity:
            return None
        F = self.curve.field
        return (F.to_code(P.x), F.to_code(P.y))


# ---------------------------------------------------------------------------
# counting and Frobenius bookkeeping


def enumerate_points(curve: Curve) -> list[Point]:
    """All rational points: infinity first, then affine in code order."""
    cc = CodedCurve(curve)
    return [INFINITY] + [cc.to_point(P) for P in cc.affine_points()]


def count_points(curve: Curve) -> int:
    return 1 + len(CodedCurve(curve).affine_points())


def frobenius_trace(curve: Curve) -> FrobeniusData:
    q = curve.field.order
    p = curve.field.p
    n1 = count_points(curve)
    t = q + 1 - n1
    if t * t > 4 * q:
        raise CheckFailed(f"Hasse bound violated: t={t}, q={q}")
    return FrobeniusData(q=q, p=p, n1=n1, trace=t, ordinary=(t % p != 0))


def count_over_extension(fd: FrobeniusData, ell: int) -> int:
    """#E over the degree-ell extension via t_{j+1} = t*t_j - q*t_{j-1}.

    Exact big-integer arithmetic; valid for any ell >= 1 without touching
    the extension field itself.
    """
    if ell < 1:
        raise ValueError("extension degree must be >= 1")
    q, t = fd.q, fd.trace
    t_prev, t_cur = 2, t  # traces of Frobenius^0 and Frobenius^1
    for _ in range(ell - 1):
        t_prev, t_cur = t_cur, t * t_cur - q * t_prev
    return q**ell + 1 - t_cur


def frobenius_endo(curve: Curve, P: Point, relative_to: FieldDesc) -> Point:
    """Raise coordinates to the order of relative_to (a subfield of the
    curve's field containing all curve coefficients)."""
    s = relative_to.order
    field = curve.field
    v = s
    while v < field.order:
        v *= s
    if v != field.order:
        raise FieldMismatch(f"{relative_to!r} is not a subfield of {field!r}")
    for c in curve.coeffs:
        if c**s != c:
            raise FieldMismatch("curve coefficients do not lie in the given subfield")
    _require_on_curve(curve, P)
    if P.is_infinity:
        return P
    Q = Point(P.x**s, P.y**s)
    if not is_on_curve(curve, Q):
        raise CheckFailed("Frobenius left the curve")
    return Q


def base_change(curve: Curve, ext: FieldDesc) -> Curve:
    """The same curve viewed over an extension built on top of its field."""
    return Curve(ext, *(embed(c, ext) for c in curve.coeffs))


# ---------------------------------------------------------------------------
# searches and constructions


def find_ordinary_curve(field: FieldDesc, scan_budget: int = 4096) -> Curve:
    """First ordinary curve in lexicographic (a1,..,a6) code order,
    preferring an exact trace-1 curve when one shows up within the budget."""
    q = field.order
    first_ordinary = None
    scanned = 0
    for code in range(q**5):
        if scanned >= scan_budget:
            break
        digits = []
        c = code
        for _ in range(5):
            digits.append(c % q)
            c //= q
        # digits are (a6, a4, a3, a2, a1) so that a1 is most significant
        a6, a4, a3, a2, a1 = (field.from_code(d) for d in digits)
        scanned += 1
        try:
            curve = new_curve(field, a1, a2, a3, a4, a6)
        except SingularCurve:
            continue
        fd = frobenius_trace(curve)
        if fd.trace == 1:
            return curve
        if fd.ordinary and first_ordinary is None:
            first_ordinary = curve
    if first_ordinary is None:
        raise SearchExhausted(f"no ordinary curve within {scan_budget} candidates")
    return first_ordinary


def quadratic_twist(curve: Curve, u: FieldElem) -> Curve:
    """Twist y^2 = f(x) by f(u): the curve y^2 = x^3 + a*f(u)^2*x + b*f(u)^3.

    Twisting by a square f(u) preserves the point count; a nonsquare flips
    it to 2q + 2 - N.  Characteristic 2 is out of scope here.
    """
    if curve.field.p == 2:
        raise CharTwo("quadratic twists are implemented for odd characteristic")
    if not curve.is_short_form():
        raise ValueError("quadratic_twist needs a short-form curve y^2 = x^3 + ax + b")
    u = curve.field.elem(u)
    a, b = curve.a4, curve.a6
    fu = u * u * u + a * u + b
    if fu.is_zero():
        raise TwistDegenerate("f(u) = 0: the twisting value is a root of f")
    z = curve.field.zero()
    return new_curve(curve.field, z, z, z, a * fu * fu, b * fu * fu * fu)


def z_coord(P: Point) -> FieldElem:
    """The coordinate y/x; poles (infinity and x = 0) are errors."""
    if P.is_infinity:
        raise PoleOfZ("z = y/x has a pole at infinity")
    if P.x.is_zero():
        raise PoleOfZ("z = y/x has a pole where x = 0")
    return P.y / P.x


def curve_json(curve: Curve, fd: FrobeniusData | None = None) -> dict:
    """Canonical JSON echo used by the CLI."""
    if fd is None:
        fd = frobenius_trace(curve)
    names = ("a1", "a2", "a3", "a4", "a6")
    out = {"p": curve.field.p, "tower": list(curve.field.tower_degrees)}
    for name, c in zip(names, curve.coeffs):
        out[name] = format_element(c)
    out.update({"N1": fd.n1, "t": fd.trace, "ordinary": fd.ordinary})
    return out
