"""Structure of a finite abelian group recovered from an element list.

A greedy pass over the elements (in a deterministic order) produces a
generating sequence g_0, g_1, ... where each g_k has some index j_k over
the subgroup generated so far, a discrete-log table mapping every element
to its coordinate vector, and the lattice of relations among the
generators.  Subgroup orders then reduce to integer determinant
computations: the subgroup generated by coordinate vectors v_1..v_m has
order |G| / det(HNF(relations + vectors)).
"""

from __future__ import annotations

from math import gcd


class FiniteAbelianGroup:
    def __init__(self, elements, add, neg, zero, sort_key=None):
        elems = sorted(elements, key=sort_key)
        self.order = len(elems)
        self.zero = zero
        gens = []
        orders = []
        pending_relations = []  # (j_k, coords of j_k*g_k over earlier gens)
        table = {zero: ()}
        for e in elems:
            if e in table:
                continue
            j = 1
            cur = e
            while cur not in table:
                j += 1
                cur = add(cur, e)
            pending_relations.append((j, table[cur]))
            new_table = {}
            for s, sc in table.items():
                acc = s
                for i in range(j):
                    new_table[acc] = sc + (i,)
                    if i < j - 1:
                        acc = add(acc, e)
            table = new_table
            gens.append(e)
            orders.append(j)
        k = len(gens)
        self.gens = gens
        self.gen_orders = orders
        self.dl = {e: vec + (0,) * (k - len(vec)) for e, vec in table.items()}
        rels = []
        for idx, (j, coords) in enumerate(pending_relations):
            row = [0] * k
            for i, c in enumerate(coords):
                row[i] = -c
            row[idx] = j
            rels.append(row)
        self.relations = rels
        if _hnf_det([list(r) for r in rels], k) != self.order:
            raise AssertionError("relation lattice determinant != group order")

    @property
    def rank(self) -> int:
        return len(self.gens)

    def coords(self, elem):
        return self.dl[elem]

    def subgroup_order(self, vectors) -> int:
        """Order of the subgroup generated by the given coordinate vectors."""
        k = self.rank
        if k == 0:
            return 1
        rows = [list(r) for r in self.relations] + [list(v) for v in vectors]
        return self.order // _hnf_det(rows, k)


class ReducedLattice:
    """A lattice given by pre-reduced rows, supporting cheap extensions.

    Used for the per-point loop in the generation experiment: the fixed
    part (relations + base subgroup) is triangularized once, each query
    then adds a few rows and re-reduces the small result.
    """

    def __init__(self, group: FiniteAbelianGroup, vectors=()):
        self.group = group
        self.k = group.rank
        rows = [list(r) for r in group.relations] + [list(v) for v in vectors]
        self.rows = _triangularize(rows, self.k)

    def subgroup_order_with(self, vectors) -> int:
        rows = [list(r) for r in self.rows] + [list(v) for v in vectors]
        tri = _triangularize(rows, self.k)
        det = 1
        for i in range(self.k):
            det *= tri[i][i]
        return self.group.order // det


def _hnf_det(rows, k):
    tri = _triangularize(rows, k)
    det = 1
    for i in range(k):
        det *= tri[i][i]
    return det


def _triangularize(rows, k):
    """Row-reduce an integer matrix to upper-triangular HNF-style form.

    The rows must span a full-rank sublattice of Z^k.  Returns k rows with
    positive diagonal; the product of the diagonal is the lattice index.
    """
    out = []
    for col in range(k):
        pivot = None
        rest = []
        for row in rows:
            if row[col] == 0:
                rest.append(row)
                continue
            if pivot is None:
                pivot = row
                continue
            a, b = pivot[col], row[col]
            g, x, y = _xgcd(a, b)
            a_, b_ = a // g, b // g
            combined = [x * u + y * v for u, v in zip(pivot, row)]
            eliminated = [b_ * u - a_ * v for u, v in zip(pivot, row)]
            pivot = combined
            rest.append(eliminated)
        if pivot is None:
            raise AssertionError("rows do not span a full-rank lattice")
        if pivot[col] < 0:
            pivot = [-u for u in pivot]
        out.append(pivot)
        rows = rest
    return out


def _xgcd(a, b):
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t
