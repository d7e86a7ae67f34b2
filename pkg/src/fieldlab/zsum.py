"""Coverage of the field by pairwise sums of z = y/x over curve subgroups.

For a subgroup G of E(F_q), the experiment collects every value
z(g1) + z(g2) with g1, g2 in G away from the poles of z, and reports
whether the whole field is covered.  Coverage kicks in once the subgroup
index is small relative to sqrt(q); since the controlling constant is not
pinned down numerically, the index bound is a free experiment parameter
and the scan emits data rather than asserting a hypothesis.
"""

from __future__ import annotations

from dataclasses import dataclass

from .curves import CodedCurve, Curve, Point, new_curve
from .errors import EmptyAfterPoles, SingularCurve
from .galois import FieldDesc, format_element


def subgroup_by_multiplier(curve: Curve, m: int) -> frozenset:
    """The image subgroup m*E(F_q) as a set of points."""
    if m < 1:
        raise ValueError("multiplier must be >= 1")
    cc = CodedCurve(curve)
    pts = [None] + cc.affine_points()
    image = {cc.scalar(m, P) for P in pts}
    return frozenset(cc.to_point(P) for P in image)


def z_sum_set(curve: Curve, subgroup) -> set:
    """Exact set {z(g1)+z(g2)} over ordered pairs of non-pole points of G."""
    zs = []
    for P in subgroup:
        if P.is_infinity or P.x.is_zero():
            continue
        zs.append(P.y / P.x)
    if not zs:
        raise EmptyAfterPoles("every subgroup element is a pole of z")
    return {z1 + z2 for z1 in zs for z2 in zs}


@dataclass(frozen=True)
class ZSumReport:
    q: int
    curve: str
    multiplier: int
    index: int
    subgroup_size: int
    nonpole_count: int
    sum_size: int
    missing: tuple  # element codes not attained
    covered: bool

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "curve": self.curve,
            "multiplier": self.multiplier,
            "index": self.index,
            "subgroup_size": self.subgroup_size,
            "nonpole_count": self.nonpole_count,
            "sum_size": self.sum_size,
            "missing": list(self.missing),
            "covered": self.covered,
        }


def _curve_id(curve: Curve) -> str:
    return ",".join(format_element(c) for c in curve.coeffs)


def report_for_subgroup(curve: Curve, multiplier: int) -> ZSumReport:
    field = curve.field
    cc = CodedCurve(curve)
    pts = [None] + cc.affine_points()
    image = {cc.scalar(multiplier, P) for P in pts}
    subgroup = [cc.to_point(P) for P in image]
    q = field.order
    try:
        sums = z_sum_set(curve, subgroup)
    except EmptyAfterPoles:
        sums = set()
    codes = {field.to_code(s) for s in sums}
    missing = tuple(sorted(set(range(q)) - codes))
    nonpole = sum(
        1 for P in subgroup if not (P.is_infinity or P.x.is_zero())
    )
    return ZSumReport(
        q=q,
        curve=_curve_id(curve),
        multiplier=multiplier,
        index=len(pts) // len(image),
        subgroup_size=len(image),
        nonpole_count=nonpole,
        sum_size=len(codes),
        missing=missing,
        covered=not missing,
    )


def sample_curves(field: FieldDesc, max_curves: int = 64) -> list[Curve]:
    """Deterministic curve sample: short forms y^2 = x^3 + ax + b in code
    order for odd characteristic, long forms in (a1,..,a6) code order for
    characteristic 2; singular candidates are skipped."""
    curves = []
    q = field.order
    if field.p != 2:
        for acode in range(q):
            for bcode in range(q):
                if len(curves) >= max_curves:
                    return curves
                z = field.zero()
                try:
                    curves.append(
                        new_curve(
                            field, z, z, z, field.from_code(acode), field.from_code(bcode)
                        )
                    )
                except SingularCurve:
                    continue
        return curves
    for code in range(q**5):
        if len(curves) >= max_curves:
            return curves
        digits = []
        c = code
        for _ in range(5):
            digits.append(c % q)
            c //= q
        a6, a4, a3, a2, a1 = (field.from_code(d) for d in digits)
        try:
            curves.append(new_curve(field, a1, a2, a3, a4, a6))
        except SingularCurve:
            continue
    return curves


def zsum_scan(field: FieldDesc, index_bound: int, max_curves: int = 64):
    """Reports for every sampled curve and every multiplier-image subgroup
    of index <= index_bound (deduplicated), plus a per-index summary."""
    reports = []
    for curve in sample_curves(field, max_curves):
        cc = CodedCurve(curve)
        pts = [None] + cc.affine_points()
        n = len(pts)
        seen = set()
        for m in range(1, n + 1):
            image = frozenset(cc.scalar(m, P) for P in pts)
            if image in seen:
                continue
            seen.add(image)
            if n // len(image) > index_bound:
                continue
            reports.append(report_for_subgroup(curve, m))
    summary: dict[int, dict] = {}
    for rep in reports:
        slot = summary.setdefault(
            rep.index, {"reports": 0, "covered": 0, "first_covering": None}
        )
        slot["reports"] += 1
        if rep.covered:
            slot["covered"] += 1
            if slot["first_covering"] is None:
                slot["first_covering"] = rep.curve
    return reports, summary
