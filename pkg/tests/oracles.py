"""Independent brute-force oracles used to pin expected values in tests.

Everything in this file is deliberately naive and self-contained: plain
integer arithmetic mod p, dense polynomial tuples for extension fields,
and exhaustive loops.  Nothing here imports from fieldlab, so a test that
compares fieldlab against these helpers is a genuine two-route check.
"""

from fractions import Fraction
from itertools import product


# ---------------------------------------------------------------------------
# naive GF(p^k) as tuples of ints (coefficients low degree first)


class NaiveExt:
    """GF(p^k) with modulus x^k + mod_tail, elements = int tuples."""

    def __init__(self, p, k, mod_tail):
        assert len(mod_tail) == k
        self.p = p
        self.k = k
        self.mod_tail = tuple(m % p for m in mod_tail)

    def zero(self):
        return (0,) * self.k

    def one(self):
        return ((1,) + (0,) * (self.k - 1)) if self.k > 1 else (1,)

    def from_int(self, n):
        digits = []
        for _ in range(self.k):
            digits.append(n % self.p)
            n //= self.p
        return tuple(digits)

    def elements(self):
        for n in range(self.p**self.k):
            yield self.from_int(n)

    def add(self, a, b):
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def neg(self, a):
        return tuple((-x) % self.p for x in a)

    def mul(self, a, b):
        raw = [0] * (2 * self.k - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    raw[i + j] = (raw[i + j] + x * y) % self.p
        # reduce: x^k = -mod_tail
        for deg in range(2 * self.k - 2, self.k - 1, -1):
            c = raw[deg]
            if c:
                raw[deg] = 0
                for j, m in enumerate(self.mod_tail):
                    raw[deg - self.k + j] = (raw[deg - self.k + j] - c * m) % self.p
        return tuple(raw[: self.k])

    def pow(self, a, n):
        r = self.one()
        while n:
            if n & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            n >>= 1
        return r

    def inv(self, a):
        assert a != self.zero()
        return self.pow(a, self.p**self.k - 2)


def naive_prime_field(p):
    return NaiveExt(p, 1, (0,))


# ---------------------------------------------------------------------------
# naive curve point counting over a NaiveExt field


def curve_points_naive(F, a1, a2, a3, a4, a6):
    """All affine points of y^2+a1*xy+a3*y = x^3+a2*x^2+a4*x+a6, brute force."""
    pts = []
    for x in F.elements():
        x2 = F.mul(x, x)
        x3 = F.mul(x2, x)
        rhs = F.add(F.add(x3, F.mul(a2, x2)), F.add(F.mul(a4, x), a6))
        for y in F.elements():
            lhs = F.add(F.mul(y, y), F.add(F.mul(a1, F.mul(x, y)), F.mul(a3, y)))
            if lhs == rhs:
                pts.append((x, y))
    return pts


def curve_group_add(F, coeffs, P, Q):
    """Chord-tangent addition; None is the point at infinity."""
    a1, a2, a3, a4, a6 = coeffs
    if P is None:
        return Q
    if Q is None:
        return P
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2 and Q[1] == F.neg(F.add(y1, F.add(F.mul(a1, x1), a3))):
        return None
    if P == Q:
        num = F.add(
            F.add(F.mul(F.from_int(3), F.mul(x1, x1)), F.mul(F.from_int(2), F.mul(a2, x1))),
            F.add(a4, F.neg(F.mul(a1, y1))),
        )
        den = F.add(F.add(F.mul(F.from_int(2), y1), F.mul(a1, x1)), a3)
    else:
        num = F.add(y2, F.neg(y1))
        den = F.add(x2, F.neg(x1))
    lam = F.mul(num, F.inv(den))
    nu = F.add(y1, F.neg(F.mul(lam, x1)))
    x3 = F.add(F.add(F.mul(lam, lam), F.mul(a1, lam)), F.neg(F.add(a2, F.add(x1, x2))))
    y3 = F.neg(F.add(F.add(F.mul(F.add(lam, a1), x3), nu), a3))
    return (x3, y3)


def curve_scalar_mul(F, coeffs, n, P):
    R = None
    A = P
    while n:
        if n & 1:
            R = curve_group_add(F, coeffs, R, A)
        A = curve_group_add(F, coeffs, A, A)
        n >>= 1
    return R


# ---------------------------------------------------------------------------
# misc integer oracles


def trial_factorize(n):
    out = []
    d = 2
    while d * d <= n:
        e = 0
        while n % d == 0:
            n //= d
            e += 1
        if e:
            out.append((d, e))
        d += 1
    if n > 1:
        out.append((n, 1))
    return out


def psi_naive(n):
    return sum((Fraction(1, p) for p, _ in trial_factorize(n)), Fraction(0))


def dth_powers(F, d):
    """Set of all d-th powers in a NaiveExt field."""
    return {F.pow(x, d) for x in F.elements()}


def diag_form_zeros(F, d, coeffs):
    """All nontrivial zeros of sum c_i x_i^d, exhaustively."""
    zero = F.zero()
    n = len(coeffs)
    out = []
    for vec in product(list(F.elements()), repeat=n):
        if all(v == zero for v in vec):
            continue
        acc = zero
        for c, v in zip(coeffs, vec):
            acc = F.add(acc, F.mul(c, F.pow(v, d)))
        if acc == zero:
            out.append(vec)
    return out
