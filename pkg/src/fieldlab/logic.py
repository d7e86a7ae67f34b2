"""First-order formulas over the language of rings, a finite-field
evaluator, and emitters for explicitly constructed formula families.

The language is exactly rings: constants 0 and 1, addition, subtraction,
multiplication, equality, the propositional connectives, and quantifiers
over the field.  Exponentiation is always expanded into repeated
multiplication.  Named placeholder predicates (holes) stand for cited
subformulas that are not constructed here; they must be bound to concrete
formulas before evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    BudgetExceeded,
    UnassignedVariable,
    UnboundPlaceholder,
    UnsupportedDegree,
)
from .galois import FieldDesc
from .tables import tables_for

DEFAULT_EVAL_BUDGET = 10**7
DEFAULT_MATERIALIZE_CAP = 10**5


# ---------------------------------------------------------------------------
# terms


class Term:
    __slots__ = ()


@dataclass(frozen=True)
class Zero(Term):
    pass


@dataclass(frozen=True)
class One(Term):
    pass


@dataclass(frozen=True)
class Var(Term):
    name: str


@dataclass(frozen=True)
class Add(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Sub(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Mul(Term):
    left: Term
    right: Term


# ---------------------------------------------------------------------------
# formulas


class Formula:
    __slots__ = ()


@dataclass(frozen=True)
class Eq(Formula):
    left: Term
    right: Term


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Hole(Formula):
    name: str
    args: tuple


# ---------------------------------------------------------------------------
# structural helpers


def term_vars(t: Term) -> set:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, (Add, Sub, Mul)):
        return term_vars(t.left) | term_vars(t.right)
    return set()


def free_vars(f: Formula) -> set:
    if isinstance(f, Eq):
        return term_vars(f.left) | term_vars(f.right)
    if isinstance(f, Not):
        return free_vars(f.body)
    if isinstance(f, (And, Or, Implies)):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, (Exists, Forall)):
        return free_vars(f.body) - {f.var}
    if isinstance(f, Hole):
        return set(f.args)
    raise TypeError(f"not a formula: {f!r}")


def bound_vars(f: Formula) -> set:
    if isinstance(f, (Eq, Hole)):
        return set()
    if isinstance(f, Not):
        return bound_vars(f.body)
    if isinstance(f, (And, Or, Implies)):
        return bound_vars(f.left) | bound_vars(f.right)
    if isinstance(f, (Exists, Forall)):
        return {f.var} | bound_vars(f.body)
    raise TypeError(f"not a formula: {f!r}")


def holes(f: Formula) -> dict:
    """Placeholder name -> arity; raises on inconsistent arities."""
    out: dict[str, int] = {}

    def walk(g):
        if isinstance(g, Hole):
            arity = len(g.args)
            if out.setdefault(g.name, arity) != arity:
                raise ValueError(f"hole {g.name} used with inconsistent arities")
        elif isinstance(g, Not):
            walk(g.body)
        elif isinstance(g, (And, Or, Implies)):
            walk(g.left)
            walk(g.right)
        elif isinstance(g, (Exists, Forall)):
            walk(g.body)

    walk(f)
    return out


def quantifier_counts(f: Formula) -> tuple[int, int]:
    """(number of universal, number of existential) quantifier nodes."""
    if isinstance(f, (Eq, Hole)):
        return (0, 0)
    if isinstance(f, Not):
        return quantifier_counts(f.body)
    if isinstance(f, (And, Or, Implies)):
        a = quantifier_counts(f.left)
        b = quantifier_counts(f.right)
        return (a[0] + b[0], a[1] + b[1])
    if isinstance(f, Forall):
        a = quantifier_counts(f.body)
        return (a[0] + 1, a[1])
    if isinstance(f, Exists):
        a = quantifier_counts(f.body)
        return (a[0], a[1] + 1)
    raise TypeError(f"not a formula: {f!r}")


def rename_free(f: Formula, mapping: dict) -> Formula:
    """Rename free variables; raises if a renaming would be captured."""

    def sub_term(t, env):
        if isinstance(t, Var):
            new = env.get(t.name, t.name)
            return Var(new)
        if isinstance(t, Add):
            return Add(sub_term(t.left, env), sub_term(t.right, env))
        if isinstance(t, Sub):
            return Sub(sub_term(t.left, env), sub_term(t.right, env))
        if isinstance(t, Mul):
            return Mul(sub_term(t.left, env), sub_term(t.right, env))
        return t

    def walk(g, env):
        if isinstance(g, Eq):
            return Eq(sub_term(g.left, env), sub_term(g.right, env))
        if isinstance(g, Not):
            return Not(walk(g.body, env))
        if isinstance(g, And):
            return And(walk(g.left, env), walk(g.right, env))
        if isinstance(g, Or):
            return Or(walk(g.left, env), walk(g.right, env))
        if isinstance(g, Implies):
            return Implies(walk(g.left, env), walk(g.right, env))
        if isinstance(g, (Exists, Forall)):
            inner = {k: v for k, v in env.items() if k != g.var}
            if g.var in inner.values():
                raise ValueError(f"renaming captured by bound variable {g.var}")
            body = walk(g.body, inner)
            return type(g)(g.var, body)
        if isinstance(g, Hole):
            return Hole(g.name, tuple(env.get(a, a) for a in g.args))
        raise TypeError(f"not a formula: {g!r}")

    return walk(f, dict(mapping))


def alpha_rename(f: Formula, taken: set, prefix: str = "v") -> Formula:
    """Rename every bound variable to a fresh name avoiding `taken`."""
    counter = [0]

    def fresh():
        while True:
            name = f"{prefix}{counter[0]}"
            counter[0] += 1
            if name not in taken:
                taken.add(name)
                return name

    def sub_term(t, env):
        if isinstance(t, Var):
            return Var(env.get(t.name, t.name))
        if isinstance(t, Add):
            return Add(sub_term(t.left, env), sub_term(t.right, env))
        if isinstance(t, Sub):
            return Sub(sub_term(t.left, env), sub_term(t.right, env))
        if isinstance(t, Mul):
            return Mul(sub_term(t.left, env), sub_term(t.right, env))
        return t

    def walk(g, env):
        if isinstance(g, Eq):
            return Eq(sub_term(g.left, env), sub_term(g.right, env))
        if isinstance(g, Not):
            return Not(walk(g.body, env))
        if isinstance(g, And):
            return And(walk(g.left, env), walk(g.right, env))
        if isinstance(g, Or):
            return Or(walk(g.left, env), walk(g.right, env))
        if isinstance(g, Implies):
            return Implies(walk(g.left, env), walk(g.right, env))
        if isinstance(g, (Exists, Forall)):
            name = fresh()
            body = walk(g.body, {**env, g.var: name})
            return type(g)(name, body)
        if isinstance(g, Hole):
            return Hole(g.name, tuple(env.get(a, a) for a in g.args))
        raise TypeError(f"not a formula: {g!r}")

    return walk(f, {})


# ---------------------------------------------------------------------------
# evaluation


class _EvalContext:
    def __init__(self, field, bindings, budget, materialize_cap):
        self.field = field
        self.T = tables_for(field)
        self.q = field.order
        self.bindings = bindings or {}
        self.budget = budget
        self.materialize_cap = materialize_cap
        self.visits = 0
        self.materialized: dict[str, set] = {}

    def tick(self, amount=1):
        self.visits += amount
        if self.visits > self.budget:
            raise BudgetExceeded(
                f"evaluation exceeded {self.budget} assignment visits"
            )


def _compile_term(t: Term, ctx: _EvalContext, scope: set):
    T = ctx.T
    if isinstance(t, Zero):
        return lambda env: 0
    if isinstance(t, One):
        one = T.one
        return lambda env: one
    if isinstance(t, Var):
        if t.name not in scope:
            raise UnassignedVariable(f"variable {t.name} is not in scope")
        name = t.name
        return lambda env: env[name]
    left = _compile_term(t.left, ctx, scope)
    right = _compile_term(t.right, ctx, scope)
    if isinstance(t, Add):
        return lambda env: T.add(left(env), right(env))
    if isinstance(t, Sub):
        return lambda env: T.sub(left(env), right(env))
    if isinstance(t, Mul):
        return lambda env: T.mul(left(env), right(env))
    raise TypeError(f"not a term: {t!r}")


def _materialize_hole(name: str, ctx: _EvalContext):
    params, body = ctx.bindings[name]
    extra = free_vars(body) - set(params)
    if extra:
        raise UnassignedVariable(
            f"binding for {name} has unbound free variables {sorted(extra)}"
        )
    fn = _compile_formula(body, ctx, set(params))
    table = set()
    ctx.tick(ctx.q ** len(params))
    env = {}
    for codes in _tuple_iter(ctx.q, len(params)):
        for p, c in zip(params, codes):
            env[p] = c
        if fn(env):
            table.add(codes)
    ctx.materialized[name] = table
    return table


def _tuple_iter(q, k):
    if k == 0:
        yield ()
        return
    for head in range(q):
        for rest in _tuple_iter(q, k - 1):
            yield (head,) + rest


def _compile_formula(f: Formula, ctx: _EvalContext, scope: set):
    if isinstance(f, Eq):
        lt = _compile_term(f.left, ctx, scope)
        rt = _compile_term(f.right, ctx, scope)
        return lambda env: lt(env) == rt(env)
    if isinstance(f, Not):
        body = _compile_formula(f.body, ctx, scope)
        return lambda env: not body(env)
    if isinstance(f, And):
        left = _compile_formula(f.left, ctx, scope)
        right = _compile_formula(f.right, ctx, scope)
        return lambda env: left(env) and right(env)
    if isinstance(f, Or):
        left = _compile_formula(f.left, ctx, scope)
        right = _compile_formula(f.right, ctx, scope)
        return lambda env: left(env) or right(env)
    if isinstance(f, Implies):
        left = _compile_formula(f.left, ctx, scope)
        right = _compile_formula(f.right, ctx, scope)
        return lambda env: (not left(env)) or right(env)
    if isinstance(f, (Exists, Forall)):
        var = f.var
        body = _compile_formula(f.body, ctx, scope | {var})
        q = ctx.q
        tick = ctx.tick
        if isinstance(f, Exists):

            def ex(env):
                saved = env.get(var)
                try:
                    for c in range(q):
                        tick()
                        env[var] = c
                        if body(env):
                            return True
                    return False
                finally:
                    if saved is None:
                        env.pop(var, None)
                    else:
                        env[var] = saved

            return ex

        def fa(env):
            saved = env.get(var)
            try:
                for c in range(q):
                    tick()
                    env[var] = c
                    if not body(env):
                        return False
                return True
            finally:
                if saved is None:
                    env.pop(var, None)
                else:
                    env[var] = saved

        return fa
    if isinstance(f, Hole):
        if f.name not in ctx.bindings:
            raise UnboundPlaceholder(f"no binding for placeholder {f.name}")
        params, body = ctx.bindings[f.name]
        if len(params) != len(f.args):
            raise UnboundPlaceholder(
                f"placeholder {f.name} bound with arity {len(params)}, used with {len(f.args)}"
            )
        for a in f.args:
            if a not in scope:
                raise UnassignedVariable(f"hole argument {a} is not in scope")
        args = f.args
        if ctx.q ** len(params) <= ctx.materialize_cap:
            name = f.name

            def lookup(env):
                table = ctx.materialized.get(name)
                if table is None:
                    table = _materialize_hole(name, ctx)
                return tuple(env[a] for a in args) in table

            return lookup
        # too large to materialize: inline the body on each call
        inner = _compile_formula(body, ctx, set(params))

        def inline(env):
            sub_env = {p: env[a] for p, a in zip(params, args)}
            return inner(sub_env)

        return inline
    raise TypeError(f"not a formula: {f!r}")


def eval_formula(
    formula: Formula,
    field: FieldDesc,
    assignment: dict | None = None,
    bindings: dict | None = None,
    budget: int = DEFAULT_EVAL_BUDGET,
    materialize_cap: int = DEFAULT_MATERIALIZE_CAP,
) -> bool:
    """Tarskian truth of the formula over the finite field.

    assignment maps free variable names to field elements (or ints);
    bindings maps each placeholder name to (params, formula).  Quantifier
    iterations count against the visit budget; the enumeration order is
    the field's code order, so budget failures are reproducible.
    """
    holes(formula)  # arity consistency
    ctx = _EvalContext(field, bindings, budget, materialize_cap)
    assignment = assignment or {}
    env = {}
    for name, value in assignment.items():
        env[name] = field.to_code(field.elem(value))
    missing = free_vars(formula) - set(env)
    if missing:
        raise UnassignedVariable(f"free variables {sorted(missing)} unassigned")
    fn = _compile_formula(formula, ctx, set(env))
    return fn(env)


# ---------------------------------------------------------------------------
# term-building helpers


def power(t: Term, d: int) -> Term:
    """t^d as repeated multiplication (d >= 1)."""
    if d < 1:
        raise ValueError("power expects d >= 1")
    out = t
    for _ in range(d - 1):
        out = Mul(out, t)
    return out


def tsum(terms) -> Term:
    terms = list(terms)
    if not terms:
        return Zero()
    out = terms[0]
    for t in terms[1:]:
        out = Add(out, t)
    return out


def _and_all(fs) -> Formula:
    fs = list(fs)
    out = fs[0]
    for g in fs[1:]:
        out = And(out, g)
    return out


def times_int(t: Term, k: int) -> Term:
    """k*t via repeated addition (k >= 1)."""
    out = t
    for _ in range(k - 1):
        out = Add(out, t)
    return out


def _mul_t(a: Term, b: Term) -> Term:
    if isinstance(a, One):
        return b
    if isinstance(b, One):
        return a
    return Mul(a, b)


def _pfister_coeff_terms(d: int, gens: list) -> list:
    """Coefficient terms of <1,g,...,g^(d-1)> tensored over gens (lex order)."""
    coeffs = [One()]
    for g in gens:
        slot = [One()] + [power(g, i) for i in range(1, d)]
        coeffs = [_mul_t(a, b) for a in coeffs for b in slot]
    return coeffs


def represents_zero_terms(coeff_terms, d: int, var_prefix: str = "x") -> Formula:
    """Exists x_1..x_n: sum coeff_i * x_i^d = 0 and not all x_i = 0.

    With some coefficient instantiated to zero the formula is satisfied
    outright (put 1 in that slot), which is the intended convention for
    degenerate slots of quantified coefficient terms.
    """
    n = len(coeff_terms)
    names = [f"{var_prefix}{i+1}" for i in range(n)]
    total = tsum(Mul(c, power(Var(x), d)) for c, x in zip(coeff_terms, names))
    nontrivial = Not(_and_all(Eq(Var(x), Zero()) for x in names))
    body = And(Eq(total, Zero()), nontrivial)
    for x in reversed(names):
        body = Exists(x, body)
    return body


def emit_represents_zero(d: int, n: int, coeff_prefix: str = "c") -> Formula:
    """Represents-zero formula with free coefficient variables c1..cn."""
    coeffs = [Var(f"{coeff_prefix}{i+1}") for i in range(n)]
    return represents_zero_terms(coeffs, d)


def represents_zero_pair_terms(coeff_terms, var_prefix: str = "x") -> Formula:
    """Represents-zero for a quadratic form over the pair ring K[i]/(i^2+1).

    Each witness coordinate is encoded as a pair (re, im); the form value
    must vanish in both components.  Over fields where -1 is already a
    square the pair ring splits, so this tests zero-representation in the
    etale algebra rather than a quadratic field extension.
    """
    n = len(coeff_terms)
    re = [Var(f"{var_prefix}r{i+1}") for i in range(n)]
    im = [Var(f"{var_prefix}i{i+1}") for i in range(n)]
    # (a+bi)^2 = (a^2 - b^2) + (2ab) i
    real_part = tsum(
        Mul(c, Sub(Mul(r, r), Mul(m, m))) for c, r, m in zip(coeff_terms, re, im)
    )
    imag_part = tsum(
        Mul(c, Add(Mul(r, m), Mul(r, m))) for c, r, m in zip(coeff_terms, re, im)
    )
    nontrivial = Not(
        _and_all(Eq(v, Zero()) for v in [x for pair in zip(re, im) for x in pair])
    )
    body = And(And(Eq(real_part, Zero()), Eq(imag_part, Zero())), nontrivial)
    for v in reversed([x.name for pair in zip(re, im) for x in pair]):
        body = Exists(v, body)
    return body


# ---------------------------------------------------------------------------
# formula families


def emit_slope_set() -> Formula:
    """Free (s, a, b): s is a slope x/y of an affine point with y != 0 on
    y^2 = x^3 + ax + b."""
    x, y, s, a, b = Var("x"), Var("y"), Var("s"), Var("a"), Var("b")
    curve = Eq(Mul(y, y), Add(Add(Mul(x, Mul(x, x)), Mul(a, x)), b))
    return Exists(
        "x",
        Exists(
            "y",
            And(And(curve, Not(Eq(y, Zero()))), Eq(Mul(s, y), x)),
        ),
    )


def emit_slope_ratio_set() -> Formula:
    """Free (t, a, b): t is a ratio of two nonzero slope-set members."""
    s_formula = emit_slope_set()
    s1 = rename_free(alpha_rename(s_formula, {"s", "a", "b", "s1", "s2", "t"}), {"s": "s1"})
    s2 = rename_free(alpha_rename(s_formula, {"s", "a", "b", "s1", "s2", "t"}), {"s": "s2"})
    t = Var("t")
    body = _and_all(
        [
            s1,
            s2,
            Not(Eq(Var("s1"), Zero())),
            Not(Eq(Var("s2"), Zero())),
            Eq(Mul(t, Var("s2")), Var("s1")),
        ]
    )
    return Exists("s1", Exists("s2", body))


def emit_pfister_membership(s_formula: Formula, s_var: str = "s", t_var: str = "t") -> Formula:
    """Free (t_var plus the parameters of s_formula): all t such that for
    all s1,s2,s3 in the set defined by s_formula, the 8-coefficient form
    <<s1,s2,t-s3>>_2 represents zero over the pair ring K[i].

    s_formula must have s_var free; its other free variables pass through.
    """
    params = free_vars(s_formula) - {s_var}
    taken = set(params) | {s_var, t_var, "s1", "s2", "s3"}
    safe = alpha_rename(s_formula, set(taken), prefix="q")
    members = []
    for i in (1, 2, 3):
        members.append(rename_free(safe, {s_var: f"s{i}"}))
    coeffs = _pfister_coeff_terms(
        2, [Var("s1"), Var("s2"), Sub(Var(t_var), Var("s3"))]
    )
    rep = represents_zero_pair_terms(coeffs, var_prefix="z")
    body = Implies(_and_all(members), rep)
    out = body
    for v in ("s3", "s2", "s1"):
        out = Forall(v, out)
    return out


def emit_char0_sentence(hole_name: str = "Z") -> Formula:
    """Closed sentence: the set named by the hole is closed under addition,
    differs from its own doubling, and 1+1 != 0.  True for the integers
    inside a characteristic-0 field; false over every finite field for
    every unary binding of the hole."""
    x, y = Var("x"), Var("y")
    # the hole takes variables only, so the sum is named via an existential
    closed = Forall(
        "x",
        Forall(
            "y",
            Implies(
                And(Hole(hole_name, ("x",)), Hole(hole_name, ("y",))),
                Exists(
                    "z",
                    And(Eq(Var("z"), Add(x, y)), Hole(hole_name, ("z",))),
                ),
            ),
        ),
    )
    not_double = Exists(
        "x",
        And(
            Hole(hole_name, ("x",)),
            Forall("y", Implies(Hole(hole_name, ("y",)), Not(Eq(x, Add(y, y))))),
        ),
    )
    two_nonzero = Not(Eq(Add(One(), One()), Zero()))
    return And(And(closed, not_double), two_nonzero)


def emit_anisotropy_membership(d: int = 2) -> Formula:
    """Free (t, a, b, u, c): the twisted-curve membership template.

    u1 ranges over nonzero x-coordinates of the twist f(u)y^2 = f(x) of
    y^2 = f(x) = x^3 + ax + b; u2 over sums z(Q1)+z(Q2) of z = y/x at twist
    points whose x-coordinates are such values; membership requires
    <<t-u2, u1^(-1)>>_2 tensor <1,-c>_2 to represent zero.  Fully explicit:
    no placeholders remain.
    """
    if d != 2:
        raise UnsupportedDegree("the membership template is emitted for d = 2 only")

    a, b, u, c, t = Var("a"), Var("b"), Var("u"), Var("c"), Var("t")

    def f_of(term: Term) -> Term:
        return Add(Add(Mul(term, Mul(term, term)), Mul(a, term)), b)

    def twist_eq(xv: Term, yv: Term) -> Formula:
        return Eq(Mul(f_of(u), Mul(yv, yv)), f_of(xv))

    def u1_pred(v: Term, witness: str) -> Formula:
        return And(
            Not(Eq(v, Zero())),
            Exists(witness, twist_eq(v, Var(witness))),
        )

    # u2 = z(Q1) + z(Q2) with denominators cleared: u2*x1*x2 = y1*x2 + y2*x1
    zsum_eq = Eq(
        Mul(Var("u2"), Mul(Var("x1"), Var("x2"))),
        Add(Mul(Var("y1"), Var("x2")), Mul(Var("y2"), Var("x1"))),
    )
    u2_pred = Exists(
        "x1",
        Exists(
            "y1",
            Exists(
                "x2",
                Exists(
                    "y2",
                    _and_all(
                        [
                            twist_eq(Var("x1"), Var("y1")),
                            twist_eq(Var("x2"), Var("y2")),
                            u1_pred(Var("x1"), "w1"),
                            u1_pred(Var("x2"), "w2"),
                            zsum_eq,
                        ]
                    ),
                ),
            ),
        ),
    )

    # <<t-u2, w>>_2 tensor <1,-c>_2 where w is the inverse of u1
    pf = _pfister_coeff_terms(2, [Sub(t, Var("u2")), Var("w")])
    coeffs = []
    for g in pf:
        coeffs.append(g)
        coeffs.append(_mul_t(g, Sub(Zero(), c)))
    rep = represents_zero_terms(coeffs, 2, var_prefix="z")
    conclusion = Exists("w", And(Eq(Mul(Var("u1"), Var("w")), One()), rep))
    body = Implies(And(u1_pred(Var("u1"), "w0"), u2_pred), conclusion)
    return Forall("u1", Forall("u2", body))


def emit_algdep_template(n: int, d: int, hole_name: str = "L") -> Formula:
    """Free (t1..tn) with a unary placeholder: for all a, b, c_1..c_n in the
    named set, <<t1-c1,...,tn-cn,a>>_d tensor <1,-b>_d represents zero."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if d not in (2, 3):
        raise UnsupportedDegree("the template is emitted for d in {2, 3}")
    cs = [f"c{i+1}" for i in range(n)]
    gens = [Sub(Var(f"t{i+1}"), Var(cn)) for i, cn in enumerate(cs)] + [Var("a")]
    pf = _pfister_coeff_terms(d, gens)
    coeffs = []
    for g in pf:
        coeffs.append(g)
        coeffs.append(_mul_t(g, Sub(Zero(), Var("b"))))
    rep = represents_zero_terms(coeffs, d, var_prefix="z")
    membership = _and_all(
        [Hole(hole_name, ("a",)), Hole(hole_name, ("b",))]
        + [Hole(hole_name, (cn,)) for cn in cs]
    )
    body = Implies(membership, rep)
    for v in reversed(["a", "b"] + cs):
        body = Forall(v, body)
    return body
