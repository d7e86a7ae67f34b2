"""Diagonal degree-d forms, tensor products, Pfister-style constructors,
and nontrivial-zero search over finite fields.

A diagonal form a_1 x_1^d + ... + a_n x_n^d is stored as its degree and
coefficient sequence.  Coefficients live in a declared domain: a finite
field (FieldDesc) or a formal Laurent-series domain, sharing one code
path for the algebra; only find_zero is specialised to finite fields.
"""

from __future__ import annotations

import random
from array import array
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from ._accel import scan_diagonal_zero
from .errors import (
    BudgetExceeded,
    DegreeMismatch,
    FieldMismatch,
    LengthMismatch,
    TrialsExhausted,
    UnsupportedDegree,
    ZeroCoefficient,
)
from .galois import FieldDesc, FieldElem, embed, make_extension
from .tables import ADD_TABLE_MAX_Q, tables_for

DEFAULT_SCAN_BUDGET = 10**7


def _domain_of(elem):
    if isinstance(elem, FieldElem):
        return elem.field
    return elem.domain


@dataclass(frozen=True)
class DiagonalForm:
    degree: int
    coeffs: tuple
    domain: object

    @property
    def nvars(self) -> int:
        return len(self.coeffs)

    def eval(self, vector) -> object:
        """The value a_1 v_1^d + ... + a_n v_n^d."""
        if len(vector) != len(self.coeffs):
            raise LengthMismatch(
                f"form in {len(self.coeffs)} variables evaluated at {len(vector)}"
            )
        acc = self.domain.zero()
        for c, v in zip(self.coeffs, vector):
            acc = acc + c * v**self.degree
        return acc

    def __repr__(self):
        inner = ", ".join(repr(c) for c in self.coeffs)
        return f"<{inner}>_{self.degree}"


def diagonal(d: int, coeffs, domain=None) -> DiagonalForm:
    """Build the diagonal form with the given nonzero coefficients."""
    if d < 2:
        raise UnsupportedDegree("diagonal forms here have degree >= 2")
    coeffs = list(coeffs)
    if domain is None:
        if not coeffs:
            raise ValueError("domain required for a form with no coefficients")
        domain = _domain_of(coeffs[0])
    coeffs = [_coerce(domain, c) for c in coeffs]
    for c in coeffs:
        if c.is_zero():
            raise ZeroCoefficient("diagonal forms must have nonzero coefficients")
    return DiagonalForm(degree=d, coeffs=tuple(coeffs), domain=domain)


def _coerce(domain, value):
    if isinstance(domain, FieldDesc):
        return domain.elem(value)
    return domain.coerce(value)


def tensor(f: DiagonalForm, g: DiagonalForm) -> DiagonalForm:
    """Tensor product: the mn coefficients a_i*b_j, i outer, j inner."""
    if f.degree != g.degree:
        raise DegreeMismatch(f"tensor of degree {f.degree} with degree {g.degree}")
    if f.domain != g.domain:
        raise FieldMismatch("tensor factors live in different domains")
    coeffs = tuple(a * b for a in f.coeffs for b in g.coeffs)
    return DiagonalForm(degree=f.degree, coeffs=coeffs, domain=f.domain)


def pfister(d: int, gens, domain=None) -> DiagonalForm:
    """The d^n-variable form <1,a,...,a^(d-1)> tensored over all generators.

    pfister(d, []) is <1>; for d=2 these are the classical Pfister forms.
    """
    gens = list(gens)
    if domain is None:
        if not gens:
            raise ValueError("domain required for pfister(d, [])")
        domain = _domain_of(gens[0])
    acc = DiagonalForm(degree=d, coeffs=(domain.one(),), domain=domain)
    for a in gens:
        a = _coerce(domain, a)
        if a.is_zero():
            raise ZeroCoefficient("pfister generators must be nonzero")
        slot = diagonal(d, [a**i for i in range(d)], domain)
        acc = tensor(acc, slot)
    return acc


# ---------------------------------------------------------------------------
# zero search over finite fields


def find_zero(
    form: DiagonalForm,
    mode: str = "exhaustive",
    trials: int = 10**4,
    seed: int = 0,
    budget: int = DEFAULT_SCAN_BUDGET,
):
    """Search for a nontrivial zero of a form over a finite field.

    Exhaustive mode scans all q^n vectors (odometer order, last variable
    fastest) and is a decision procedure: None means the form is proven
    anisotropic over the field.  Random mode raises TrialsExhausted when
    no witness is found, which proves nothing.
    """
    field = form.domain
    if not isinstance(field, FieldDesc):
        raise FieldMismatch("find_zero runs over finite fields only")
    T = tables_for(field)
    q = field.order
    n = form.nvars
    d = form.degree
    ccodes = [c.code for c in form.coeffs]

    if mode == "exhaustive":
        if q**n > budget:
            raise BudgetExceeded(f"{q}^{n} vectors exceed the scan budget {budget}")
        if q <= ADD_TABLE_MAX_Q and n <= 64:
            vt = array("i", [0] * (n * q))
            for i, cc in enumerate(ccodes):
                base = i * q
                for x in range(q):
                    vt[base + x] = T.mul(cc, T.pow(x, d))
            hit = scan_diagonal_zero(n, q, vt, T.add_table())
        else:
            hit = _scan_zech(T, ccodes, d, q, n)
        if hit is None:
            return None
        witness = tuple(field.from_code(c) for c in hit)
        if not form.eval(witness).is_zero():
            raise AssertionError("scan kernel returned a non-zero")
        return witness

    if mode == "random":
        rng = random.Random(seed)
        vt = [[T.mul(cc, T.pow(x, d)) for x in range(q)] for cc in ccodes]
        for _ in range(trials):
            vec = [rng.randrange(q) for _ in range(n)]
            if not any(vec):
                continue
            acc = 0
            for i, x in enumerate(vec):
                acc = T.add(acc, vt[i][x])
            if acc == 0:
                return tuple(field.from_code(c) for c in vec)
        raise TrialsExhausted(f"no witness in {trials} random trials (not a proof)")

    raise ValueError(f"unknown mode {mode!r}")


def _scan_zech(T, ccodes, d, q, n):
    # fallback for fields too large for a flat addition table
    vt = [[T.mul(cc, T.pow(x, d)) for x in range(q)] for cc in ccodes]
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
            acc[i + 1] = T.add(acc[i], vt[i][v[i]])
        if acc[n] == 0:
            return tuple(v)


# ---------------------------------------------------------------------------
# experiments


@dataclass(frozen=True)
class SpringerReport:
    degree: int
    base_order: int
    extension_order: int
    extension_degree: int
    nvars: int
    forms_checked: int
    isotropic_over_extension: int
    counterexamples: tuple
    passed: bool


def springer_experiment(
    d: int,
    base_field: FieldDesc,
    extension_degree: int,
    nvars: int = 2,
    budget: int = DEFAULT_SCAN_BUDGET,
    threads: int = 1,
) -> SpringerReport:
    """Descent check: a zero over the extension forces one over the base.

    Valid configurations are degree-2 forms with odd extension degree and
    degree-3 forms with a quadratic extension.  Every diagonal form with
    coefficients from the base-field units is tried exhaustively; any
    counterexample would be a genuine mathematical event.
    """
    if d == 2:
        if extension_degree % 2 == 0:
            raise UnsupportedDegree("degree-2 descent needs an odd extension degree")
    elif d == 3:
        if extension_degree != 2:
            raise UnsupportedDegree("degree-3 descent needs a quadratic extension")
    else:
        raise UnsupportedDegree("descent configurations cover degrees 2 and 3 only")

    ext = make_extension(base_field, extension_degree)
    units = [x for x in base_field.elements() if not x.is_zero()]
    counterexamples = []
    checked = 0
    iso_ext = 0

    def one_case(coeffs):
        f_ext = diagonal(d, [embed(c, ext) for c in coeffs], ext)
        wit_ext = find_zero(f_ext, budget=budget)
        if wit_ext is None:
            return (coeffs, False, False)
        f_base = diagonal(d, coeffs, base_field)
        base_aniso = find_zero(f_base, budget=budget) is None
        return (coeffs, True, base_aniso)

    for coeffs, iso, base_aniso in _ordered_map(
        one_case, _tuples(units, nvars), threads
    ):
        checked += 1
        if iso:
            iso_ext += 1
            if base_aniso:
                counterexamples.append(tuple(coeffs))
    return SpringerReport(
        degree=d,
        base_order=base_field.order,
        extension_order=ext.order,
        extension_degree=extension_degree,
        nvars=nvars,
        forms_checked=checked,
        isotropic_over_extension=iso_ext,
        counterexamples=tuple(counterexamples),
        passed=not counterexamples,
    )


def _tuples(pool, n):
    if n == 0:
        yield ()
        return
    for head in pool:
        for rest in _tuples(pool, n - 1):
            yield (head,) + rest


def _ordered_map(fn, items, threads):
    """Map preserving input order; thread fan-out keeps results deterministic."""
    if threads <= 1:
        for item in items:
            yield fn(item)
        return
    with ThreadPoolExecutor(max_workers=threads) as pool:
        yield from pool.map(fn, items)


@dataclass(frozen=True)
class C1Report:
    field_order: int
    degree: int
    forms_checked: int
    failures: tuple
    passed: bool


def degree_for_char(p: int) -> int:
    """The working form degree: 3 in characteristic 2, else 2."""
    return 3 if p == 2 else 2


def c1_scan(
    field: FieldDesc,
    d: int | None = None,
    budget: int = DEFAULT_SCAN_BUDGET,
    threads: int = 1,
) -> C1Report:
    """Every <1,a,...,a^(d-1)> tensor <b,c> with unit a,b,c must be isotropic.

    These forms have more than d variables over a finite field, so a
    nontrivial zero always exists; the scan certifies it with an explicit
    witness for every coefficient choice.
    """
    if d is None:
        d = degree_for_char(field.p)
    units = [x for x in field.elements() if not x.is_zero()]
    failures = []
    checked = 0

    def one_case(triple):
        a, b, c = triple
        form = tensor(pfister(d, [a], field), diagonal(d, [b, c], field))
        return (triple, find_zero(form, budget=budget) is not None)

    for triple, iso in _ordered_map(one_case, _tuples(units, 3), threads):
        checked += 1
        if not iso:
            failures.append(triple)
    return C1Report(
        field_order=field.order,
        degree=d,
        forms_checked=checked,
        failures=tuple(failures),
        passed=not failures,
    )
