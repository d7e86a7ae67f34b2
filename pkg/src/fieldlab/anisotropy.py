"""Anisotropy certificates over (iterated) formal Laurent series domains.

Search can only falsify over an infinite domain, so anisotropy is
certified by a checked valuation argument instead: if the residue form is
proven anisotropic over the finite field by exhaustive scan, then in
q(x_0) + t*q(x_1) + ... + t^(d-1)*q(x_{d-1}) the d blocks have values in
distinct classes mod d, so nothing cancels and the lifted form
q * <<t1,...,tm>>_d has no nontrivial zero.  Each certificate records the
residue scan, one step per Laurent variable, and the outcome of a seeded
randomized falsification search that must come up empty.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field

from .errors import CheckFailed, ZeroCoefficient
from .forms import DiagonalForm, diagonal, find_zero, pfister, tensor
from .galois import FieldDesc, format_element
from .laurent import LaurentDomain, LaurentSeries

DEFAULT_TRIALS = 10**4
DEFAULT_PRECISION = 8


@dataclass(frozen=True)
class AnisotropyCertificate:
    conclusion: str  # "anisotropic" | "isotropic"
    degree: int
    nvars: int
    domain_repr: str
    residue_field_order: int
    residue_vectors_scanned: int
    witness: tuple | None
    steps: tuple
    search: dict | None
    form: DiagonalForm = dc_field(repr=False, compare=False, default=None)

    def to_json(self) -> dict:
        return {
            "conclusion": self.conclusion,
            "degree": self.degree,
            "nvars": self.nvars,
            "domain": self.domain_repr,
            "residue_field_order": self.residue_field_order,
            "residue_vectors_scanned": self.residue_vectors_scanned,
            "witness": None
            if self.witness is None
            else [repr(w) for w in self.witness],
            "steps": list(self.steps),
            "search": self.search,
        }


def _unit_residue_form(q_res: DiagonalForm):
    field = q_res.domain
    if not isinstance(field, FieldDesc):
        raise ZeroCoefficient("the residue form must live over a finite field")
    for c in q_res.coeffs:
        if c.is_zero():
            raise ZeroCoefficient("residue coefficients must be units")
    return field


def _lift_form(q_res: DiagonalForm, domain: LaurentDomain) -> DiagonalForm:
    return diagonal(q_res.degree, [domain.coerce(c) for c in q_res.coeffs], domain)


def _block_step(form: DiagonalForm, var: str, block_size: int, d: int) -> dict:
    """Verify the d-block valuation structure of pfister([t]) tensor q and
    record it: block i consists of coefficients with valuation exactly i,
    whose unit parts reduce to the previous form's coefficients."""
    vals = [c.valuation() for c in form.coeffs]
    blocks = []
    for i in range(d):
        block = vals[i * block_size : (i + 1) * block_size]
        if any(v != i for v in block):
            raise CheckFailed(f"block {i} of the lifted form has valuations {block}")
        blocks.append(i)
    return {
        "kind": "dvr-step",
        "variable": var,
        "blocks": d,
        "block_size": block_size,
        "valuation_classes_mod_d": blocks,
        "distinct": len(set(b % d for b in blocks)) == d,
    }


def dvr_anisotropy_check(
    q_res: DiagonalForm,
    trials: int = DEFAULT_TRIALS,
    precision: int = DEFAULT_PRECISION,
    seed: int = 0,
) -> AnisotropyCertificate:
    """Certificate for q_res tensor <<t>>_d over F_q((t)).

    Step 1 decides the residue form exhaustively.  An isotropic residue
    lifts its witness as constant series (remaining coordinates zero).  An
    anisotropic residue yields an anisotropic certificate whose trace is
    the block-valuation argument, backed by a seeded falsification search.
    """
    return local_params_anisotropy(q_res, 1, trials=trials, precision=precision, seed=seed)


def local_params_anisotropy(
    q_res: DiagonalForm,
    m: int,
    trials: int = DEFAULT_TRIALS,
    precision: int = DEFAULT_PRECISION,
    seed: int = 0,
) -> AnisotropyCertificate:
    """Certificate for q_res tensor <<t1,...,tm>>_d over F_q((t1))...((tm)),
    built as m nested single-variable steps (m = 0 is the residue proof)."""
    field = _unit_residue_form(q_res)
    d = q_res.degree
    scanned = field.order ** q_res.nvars
    witness = find_zero(q_res)

    if witness is not None:
        domain = _nested_domain(field, m)
        form = _nested_form(q_res, field, m)[0] if m else q_res
        lifted_witness = _lift_witness(witness, form, domain if m else field)
        if not form.eval(lifted_witness).is_zero():
            raise CheckFailed("lifted witness does not evaluate to zero")
        return AnisotropyCertificate(
            conclusion="isotropic",
            degree=d,
            nvars=form.nvars,
            domain_repr=repr(form.domain),
            residue_field_order=field.order,
            residue_vectors_scanned=scanned,
            witness=lifted_witness,
            steps=(
                {
                    "kind": "residue-witness",
                    "witness": [format_element(w) for w in witness],
                },
            ),
            search=None,
            form=form,
        )

    steps = [
        {
            "kind": "residue-scan",
            "field_order": field.order,
            "vectors_scanned": scanned,
            "anisotropic": True,
        }
    ]
    form, step_records = _nested_form(q_res, field, m)
    steps.extend(step_records)

    search = None
    if m >= 1 and trials > 0:
        search = _falsification_search(form, q_res, m, trials, precision, seed)

    return AnisotropyCertificate(
        conclusion="anisotropic",
        degree=d,
        nvars=form.nvars,
        domain_repr=repr(form.domain),
        residue_field_order=field.order,
        residue_vectors_scanned=scanned,
        witness=None,
        steps=tuple(steps),
        search=search,
        form=form,
    )


def _nested_domain(field: FieldDesc, m: int):
    domain = field
    for j in range(1, m + 1):
        domain = LaurentDomain(domain, f"t{j}" if m > 1 else "t")
    return domain


def _nested_form(q_res: DiagonalForm, field: FieldDesc, m: int):
    """Iteratively apply the single-variable step; returns the final form
    and one trace record per step."""
    form = q_res
    records = []
    domain = field
    d = q_res.degree
    for j in range(1, m + 1):
        var = f"t{j}" if m > 1 else "t"
        domain = LaurentDomain(domain, var)
        lifted = _lift_form(form, domain)
        form = tensor(pfister(d, [domain.t()], domain), lifted)
        records.append(_block_step(form, var, lifted.nvars, d))
    return form, records


def _lift_witness(witness, form: DiagonalForm, domain):
    if isinstance(domain, FieldDesc):
        return tuple(witness)
    lifted = [domain.coerce(w) for w in witness]
    lifted += [domain.zero()] * (form.nvars - len(lifted))
    return tuple(lifted)


def _falsification_search(form, q_res, m, trials, precision, seed):
    """Seeded random exact Laurent-polynomial vectors; every nonzero vector
    must evaluate to a certifiably nonzero series.  An exact zero would
    contradict the certificate and raises CheckFailed."""
    field = q_res.domain
    if m == 1 and field.is_prime_field:
        zeros = _search_prime_fast(form, q_res, trials, precision, seed)
    else:
        zeros = _search_generic(form, trials, precision, seed)
    if zeros:
        raise CheckFailed(f"falsification search found {zeros} zeros of a certified form")
    return {
        "trials": trials,
        "precision": precision,
        "seed": seed,
        "witnesses_found": 0,
    }


def _search_generic(form: DiagonalForm, trials, precision, seed):
    rng = random.Random(seed)
    domain = form.domain
    zeros = 0
    for _ in range(trials):
        vec = []
        for _ in range(form.nvars):
            if rng.random() < 0.2:
                vec.append(domain.zero())
            else:
                vec.append(domain.random_poly(rng, -2, 2, precision))
        if all(s.is_zero() for s in vec):
            continue
        if form.eval(vec).is_zero():
            zeros += 1
    return zeros


def _search_prime_fast(form, q_res, trials, precision, seed):
    """Prime-field fast path: coordinates are dicts degree -> int mod p."""
    rng = random.Random(seed)
    p = q_res.domain.p
    d = q_res.degree
    res_coeffs = [c.rep for c in q_res.coeffs]
    n = len(res_coeffs)
    zeros = 0
    for _ in range(trials):
        total: dict[int, int] = {}
        nonzero_vec = False
        for block in range(d):
            for j in range(n):
                if rng.random() < 0.2:
                    continue
                poly = _random_int_poly(rng, p, precision)
                if poly:
                    nonzero_vec = True
                powed = _poly_pow(poly, d, p)
                scale = res_coeffs[j]
                for deg, c in powed.items():
                    k = deg + block
                    total[k] = (total.get(k, 0) + scale * c) % p
        if not nonzero_vec:
            continue
        if all(v == 0 for v in total.values()):
            zeros += 1
    return zeros


def _random_int_poly(rng, p, precision):
    v = rng.randint(-2, 2)
    w = rng.randint(1, precision)
    coeffs = {}
    lead = rng.randrange(1, p)
    coeffs[v] = lead
    for i in range(1, w):
        c = rng.randrange(p)
        if c:
            coeffs[v + i] = c
    return coeffs


def _poly_mul(a, b, p):
    out: dict[int, int] = {}
    for i, x in a.items():
        for j, y in b.items():
            k = i + j
            out[k] = (out.get(k, 0) + x * y) % p
    return {k: v for k, v in out.items() if v}


def _poly_pow(a, d, p):
    out = {0: 1}
    for _ in range(d):
        out = _poly_mul(out, a, p)
    return out
