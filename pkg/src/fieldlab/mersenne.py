"""Near-primality statistics for generalized Mersenne point-count ratios.

For an ordinary curve with Frobenius data (q, t), the ratio
e_l = #E(F_{q^l}) / #E(F_q) is an integer for every prime l.  The scan
factors each e_l and reports Psi(e_l) = sum of reciprocals of its distinct
prime divisors, all in exact rational arithmetic: the comparison chain
checked by psi_sum_bound_report must not see floating point.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .curves import FrobeniusData, count_over_extension
from .errors import (
    CheckFailed,
    FactorBudgetExceeded,
    IncompleteFactorization,
    NotOrdinary,
)

# Miller-Rabin with these bases is a proven primality test below this bound.
DETERMINISTIC_MR_BOUND = 3_317_044_064_679_887_385_961_981
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_TRIAL_LIMIT = 10_000
DEFAULT_RHO_BUDGET = 2_000_000


def is_probable_prime(n: int, extra_rounds: int = 8) -> bool:
    """Deterministic below DETERMINISTIC_MR_BOUND; above it, the fixed bases
    plus extra_rounds witnesses derived deterministically from n."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1

    def witness(a: int) -> bool:
        x = pow(a, d, n)
        if x in (1, n - 1):
            return False
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                return False
        return True

    bases = list(_MR_BASES)
    if n >= DETERMINISTIC_MR_BOUND:
        rng = random.Random(n)
        bases += [rng.randrange(2, n - 1) for _ in range(extra_rounds)]
    return not any(witness(a) for a in bases)


def is_certified_prime(p: int) -> bool:
    """Whether is_probable_prime is a proof for this magnitude."""
    return p < DETERMINISTIC_MR_BOUND


def _brent_rho(n: int, budget: int) -> tuple[int | None, int]:
    """One nontrivial factor of composite odd n, or None; returns iterations used."""
    used = 0
    for c in range(1, 64):
        y, r, q_acc = 2, 1, 1
        g, ys = 1, y
        m = 128
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q_acc = q_acc * abs(x - y) % n
                used += min(m, r - k)
                if used > budget:
                    return None, used
                g = gcd(q_acc, n)
                k += m
            r *= 2
        if g == n:
            # backtrack to find the exact step
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                used += 1
                if used > budget:
                    return None, used
                g = gcd(abs(x - ys), n)
        if g != n:
            return g, used
    return None, used


def factorize(n: int, rho_budget: int = DEFAULT_RHO_BUDGET) -> list[tuple[int, int]]:
    """Sorted prime factorization of n >= 1, deterministic.

    Trial division to 10^4, then Brent's rho with a fixed polynomial
    sequence.  A composite cofactor that survives the iteration budget
    raises FactorBudgetExceeded carrying the partial factorization.
    """
    if n < 1:
        raise ValueError("factorize needs n >= 1")
    factors: dict[int, int] = {}
    for p in (2, 3, 5):
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
    d = 7
    wheel = (4, 2, 4, 2, 4, 6, 2, 6)
    wi = 0
    while d <= _TRIAL_LIMIT and d * d <= n:
        while n % d == 0:
            factors[d] = factors.get(d, 0) + 1
            n //= d
        d += wheel[wi]
        wi = (wi + 1) % len(wheel)
    remaining = n if n > 1 else None
    budget = rho_budget
    stack = [remaining] if remaining else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_probable_prime(m):
            factors[m] = factors.get(m, 0) + 1
            continue
        g, used = _brent_rho(m, budget)
        budget -= used
        if g is None or budget <= 0:
            partial = sorted(factors.items())
            raise FactorBudgetExceeded(n, partial, m)
        stack.extend([g, m // g])
    return sorted(factors.items())


def psi(n: int, rho_budget: int = DEFAULT_RHO_BUDGET) -> Fraction:
    """Sum of 1/p over the distinct prime divisors of n (0 for n = 1)."""
    return sum(
        (Fraction(1, p) for p, _ in factorize(n, rho_budget)), Fraction(0)
    )


def psi_of_factors(factors) -> Fraction:
    return sum((Fraction(1, p) for p, _ in factors), Fraction(0))


# ---------------------------------------------------------------------------
# the scan


@dataclass(frozen=True)
class MersenneRow:
    ell: int
    e: int
    factors: tuple
    cofactor: int  # 1 when the factorization is complete
    psi: Fraction | None
    complete: bool
    probable: tuple  # factors asserted prime only probabilistically

    def to_json(self) -> dict:
        return {
            "ell": self.ell,
            "e_ell": str(self.e),
            "factors": [[p, e] for p, e in self.factors],
            "cofactor": str(self.cofactor),
            "psi": None
            if self.psi is None
            else {"num": self.psi.numerator, "den": self.psi.denominator},
            "complete": self.complete,
            "probable_factors": [p for p in self.probable],
        }


def _primes_upto(n: int) -> list[int]:
    sieve = bytearray([1]) * (n + 1)
    out = []
    for p in range(2, n + 1):
        if sieve[p]:
            out.append(p)
            for m in range(p * p, n + 1, p):
                sieve[m] = 0
    return out


def mersenne_scan(
    fd: FrobeniusData, lmax: int = 60, rho_budget: int = DEFAULT_RHO_BUDGET
) -> list[MersenneRow]:
    """One row per prime l <= lmax: the ratio e_l, its factorization and Psi.

    Rows whose factorization exhausts the budget are marked incomplete and
    carry the unfactored cofactor; the scan itself never aborts on them.
    """
    if not fd.ordinary:
        raise NotOrdinary(f"trace {fd.trace} is divisible by p = {fd.p}")
    rows = []
    for ell in _primes_upto(lmax):
        n_ell = count_over_extension(fd, ell)
        if n_ell % fd.n1:
            raise CheckFailed(
                f"#E over degree {ell} is not divisible by #E: {n_ell} vs {fd.n1}"
            )
        e = n_ell // fd.n1
        try:
            factors = factorize(e, rho_budget)
            row = MersenneRow(
                ell=ell,
                e=e,
                factors=tuple(factors),
                cofactor=1,
                psi=psi_of_factors(factors),
                complete=True,
                probable=tuple(p for p, _ in factors if not is_certified_prime(p)),
            )
        except FactorBudgetExceeded as exc:
            row = MersenneRow(
                ell=ell,
                e=e,
                factors=tuple(exc.partial),
                cofactor=exc.cofactor,
                psi=None,
                complete=False,
                probable=tuple(p for p, _ in exc.partial if not is_certified_prime(p)),
            )
        rows.append(row)
    return rows


def min_psi(rows) -> tuple[Fraction, int] | None:
    """Smallest Psi(e_l) over complete rows and the l attaining it."""
    best = None
    for row in rows:
        if row.complete and (best is None or row.psi < best[0]):
            best = (row.psi, row.ell)
    return best


@dataclass(frozen=True)
class AtMostTwoReport:
    counts: dict
    offenders: tuple
    passed: bool


def at_most_two_check(rows) -> AtMostTwoReport:
    """Each rational prime may divide at most two of the e_l."""
    if any(not row.complete for row in rows):
        raise IncompleteFactorization("at-most-two check needs complete rows")
    counts: dict[int, int] = {}
    for row in rows:
        for p, _ in row.factors:
            counts[p] = counts.get(p, 0) + 1
    offenders = tuple(sorted(p for p, c in counts.items() if c > 2))
    return AtMostTwoReport(counts=counts, offenders=offenders, passed=not offenders)


@dataclass(frozen=True)
class PsiBoundReport:
    bound_b: int
    sum_psi: Fraction
    twice_psi_product: Fraction
    holds: bool


def psi_sum_bound_report(rows, bound_b: int) -> PsiBoundReport:
    """Exact check of sum_{l<=B} Psi(e_l) <= 2*Psi(prod e_l).

    The right side needs only the union of the rows' distinct primes, so no
    re-factorization of the product happens.  A violation would falsify a
    proven inequality and raises CheckFailed.
    """
    selected = [row for row in rows if row.ell <= bound_b]
    have = {row.ell for row in selected}
    missing = [p for p in _primes_upto(bound_b) if p not in have]
    if missing:
        raise ValueError(f"rows do not cover primes {missing} up to {bound_b}")
    if any(not row.complete for row in selected):
        raise IncompleteFactorization("psi bound check needs complete rows")
    sum_psi = sum((row.psi for row in selected), Fraction(0))
    distinct = {p for row in selected for p, _ in row.factors}
    twice = 2 * sum((Fraction(1, p) for p in distinct), Fraction(0))
    if sum_psi > twice:
        raise CheckFailed(f"psi sum {sum_psi} exceeds {twice}")
    return PsiBoundReport(
        bound_b=bound_b, sum_psi=sum_psi, twice_psi_product=twice, holds=True
    )
