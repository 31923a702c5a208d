"""Oracles and random generators shared across the test suite.

The evaluators here are deliberately written from the definitions, not
by calling into the package, so they can sit on the other side of an
equality from the code under test.
"""

import random
from itertools import islice
from typing import Callable, Optional, Union

from polycert.core import (
    AFS,
    App,
    Arrow,
    BaseType,
    Lam,
    RewriteRule,
    RuleStep,
    Signature,
    SimpleType,
    Symbol,
    Term,
    Var,
    domains,
    enumerate_steps,
    result_base,
)
from polycert.interp import (
    Assignment,
    Const,
    FromBase,
    FromPoly,
    Interpretation,
    LinearFn,
    Monomial,
    Mult,
    NormalPoly,
    PApp,
    Plus,
    PVar,
    ZERO,
    atom_poly,
    base_of,
    const_poly,
    eval_normal,
    interpret_term,
    make_poly,
    normal_poly_to_expr,
    normalize,
    p_add,
    p_mul,
    plam_chain,
    sample_assignment,
    var_poly,
)
from polycert.synth import SearchBounds, template_space

# --------------------------------------------------- independent evaluation

Num = int
FunEnv = dict[int, LinearFn]
BaseEnv = dict[int, int]


def apply_linear(f: LinearFn, args: tuple[int, ...]) -> int:
    # The family applied by hand; LinearFn.__call__ stays untrusted.
    assert len(args) == len(f.coeffs)
    return f.const + sum(c * a for c, a in zip(f.coeffs, args))


def eval_normal_oracle(p: NormalPoly, base: BaseEnv, fun: FunEnv) -> int:
    """Value of a canonical polynomial, recomputed from its definition."""
    total = 0
    for m in p.monomials:
        term = m.coeff
        for v, e in m.powers:
            term *= base[v] ** e
        for a in m.atoms:
            args = tuple(eval_normal_oracle(q, base, fun) for q in a.args)
            term *= apply_linear(fun[a.head], args)
        total += term
    return total


def envs_of(a: Assignment) -> tuple[BaseEnv, FunEnv]:
    return dict(a.base), dict(a.fun)


def _curry(f: LinearFn, acc: tuple[int, ...] = ()):
    if len(acc) == len(f.coeffs):
        return apply_linear(f, acc)
    return lambda x: _curry(f, acc + (x,))


def eval_expr_oracle(e, env: tuple):
    """Direct evaluation of polynomial syntax with ints and closures.

    env is innermost first; entries are ints (base) or curried callables.
    """
    match e:
        case Const(value):
            return value
        case Plus(left, right):
            return eval_expr_oracle(left, env) + eval_expr_oracle(right, env)
        case Mult(left, right):
            return eval_expr_oracle(left, env) * eval_expr_oracle(right, env)
        case FromBase(bp) | FromPoly(bp):
            return eval_expr_oracle(bp, env)
        case PVar(index):
            return env[index]
        case PApp(fun, arg):
            return eval_expr_oracle(fun, env)(eval_expr_oracle(arg, env))
    raise TypeError(f"unexpected node: {e!r}")


def expr_env(ctx, a: Assignment) -> tuple:
    """An eval_expr_oracle env matching an Assignment over ctx."""
    base, fun = envs_of(a)
    return tuple(base[i] if i in base else _curry(fun[i])
                 for i in range(len(ctx)))


# -------------------------------------------------------- random poly data

O = BaseType("o")


def gen_ctx(rng: random.Random, max_base: int = 2, max_fun: int = 1,
            fun_arity: int = 1):
    """A context with up to max_base base and max_fun function slots,
    function slots over base arguments only, shuffled."""
    slots: list[SimpleType] = [O] * rng.randint(0, max_base)
    fn = O
    for _ in range(fun_arity):
        fn = Arrow(O, fn)
    slots += [fn] * rng.randint(0, max_fun)
    rng.shuffle(slots)
    return tuple(slots)


def gen_poly(rng: random.Random, ctx, depth: int = 2,
             max_coeff: int = 3) -> NormalPoly:
    """A random canonical polynomial over ctx, built compositionally."""
    bases = [i for i, t in enumerate(ctx) if isinstance(t, BaseType)]
    funs = [i for i, t in enumerate(ctx) if isinstance(t, Arrow)]
    p = ZERO
    for _ in range(rng.randint(1, 4)):
        m = const_poly(rng.randint(0, max_coeff))
        for _ in range(rng.randint(0, 2)):
            if bases and rng.random() < 0.7:
                m = p_mul(m, var_poly(rng.choice(bases)))
            elif funs and depth > 0:
                head = rng.choice(funs)
                n_args = len(domains(ctx[head]))
                args = tuple(gen_poly(rng, ctx, depth - 1, max_coeff)
                             for _ in range(n_args))
                m = p_mul(m, atom_poly(head, args))
        p = p_add(p, m)
    return p


def gen_base_expr(rng: random.Random, ctx, depth: int = 3):
    """Random polynomial syntax over ctx (innermost-first indices)."""
    bases = [i for i, t in enumerate(ctx) if isinstance(t, BaseType)]
    funs = [i for i, t in enumerate(ctx) if isinstance(t, Arrow)]
    leafs = ["const"] + (["var"] if bases else [])
    nodes = leafs + ["plus", "plus", "mult"] + (["app"] if funs else [])
    pick = rng.choice(leafs if depth == 0 else nodes)
    match pick:
        case "const":
            return Const(rng.randint(0, 4))
        case "var":
            return FromPoly(PVar(rng.choice(bases)))
        case "plus":
            return Plus(gen_base_expr(rng, ctx, depth - 1),
                        gen_base_expr(rng, ctx, depth - 1))
        case "mult":
            return Mult(gen_base_expr(rng, ctx, depth - 1),
                        gen_base_expr(rng, ctx, depth - 1))
        case "app":
            head = rng.choice(funs)
            expr = PVar(head)
            for _ in domains(ctx[head]):
                expr = PApp(expr, FromBase(gen_base_expr(rng, ctx, depth - 1)))
            return FromPoly(expr)
    raise AssertionError


# ------------------------------------------------- closed terms (map sig)

LIST = BaseType("list")
A = BaseType("a")
AA = Arrow(A, A)

CONS = Symbol("cons")
MAP = Symbol("map")
NIL = Symbol("nil")


def gen_closed_term(rng: random.Random, fuel: int = 6) -> Term:
    """A closed term of type list over the map signature, biased toward
    rule redexes and beta redexes."""
    return _go(rng, (), LIST, fuel)


def _vars_of(ctx, ty) -> list[Term]:
    return [Var(i) for i, t in enumerate(ctx) if t == ty]


def _go(rng: random.Random, ctx, ty: SimpleType, fuel: int) -> Term:
    hits = _vars_of(ctx, ty)
    if fuel <= 0:
        if ty == LIST:
            return rng.choice(hits + [NIL]) if hits else NIL
        if isinstance(ty, Arrow):
            return Lam(ty.dom, _go(rng, (ty.dom,) + ctx, ty.cod, 0))
        if hits:
            return rng.choice(hits)
        raise ValueError(f"no closed inhabitant of {ty}")

    options: list[Callable[[], Term]] = []
    options += [(lambda v=v: v) for v in hits]
    if ty == LIST:
        options.append(lambda: NIL)
        options += [lambda: App(App(MAP, _go(rng, ctx, LIST, fuel - 1)),
                                _go(rng, ctx, AA, fuel - 1))] * 3
        if _vars_of(ctx, A):
            options.append(lambda: App(App(CONS, _go(rng, ctx, A, fuel - 1)),
                                       _go(rng, ctx, LIST, fuel - 1)))
    elif isinstance(ty, Arrow):
        options += [lambda: Lam(ty.dom,
                                _go(rng, (ty.dom,) + ctx, ty.cod, fuel - 1))] * 3
    elif ty == A:
        # only reachable when an `a` is in scope
        if _vars_of(ctx, AA) and hits:
            options.append(lambda: App(rng.choice(_vars_of(ctx, AA)),
                                       _go(rng, ctx, A, fuel - 1)))
    # a beta redex at any type whose argument is constructible
    for arg_ty in (LIST, AA):
        options.append(
            lambda arg_ty=arg_ty: App(
                Lam(arg_ty, _go(rng, (arg_ty,) + ctx, ty, fuel - 1)),
                _go(rng, ctx, arg_ty, fuel - 1)))
    return rng.choice(options)()


# ----------------------------------------------- random (AFS, J) instances

_SYM_NAMES = ("f", "g", "h", "c", "d", "k")


def gen_afs_interp(rng: random.Random) -> tuple[AFS, Interpretation]:
    """A small random system with an interpretation from the template
    space, shaped so elaboration conventions hold (rule variables appear
    left to right in the lhs)."""
    bases = ("o",) if rng.random() < 0.6 else ("o", "b")
    base_tys = [BaseType(b) for b in bases]

    def rand_type(allow_fun: bool) -> SimpleType:
        res = rng.choice(base_tys)
        n = rng.randint(0, 2)
        for _ in range(n):
            if allow_fun and rng.random() < 0.3:
                res = Arrow(Arrow(rng.choice(base_tys), rng.choice(base_tys)), res)
            else:
                res = Arrow(rng.choice(base_tys), res)
        return res

    symbols: list[tuple[str, SimpleType]] = []
    for b in base_tys:
        symbols.append((f"c{b.name}", b))  # a constant per base type
    for name in _SYM_NAMES[:rng.randint(1, 3)]:
        symbols.append((name, rand_type(allow_fun=True)))
    sig = Signature(tuple(symbols), bases)

    def rand_rhs(ctx, ty: SimpleType, fuel: int) -> Term:
        opts: list[Callable[[], Term]] = []
        opts += [(lambda v=v: v) for v in _vars_of(ctx, ty)]
        for name, sty in symbols:
            if result_base(sty) == ty and (fuel > 0 or not domains(sty)):
                def full(name=name, sty=sty):
                    t: Term = Symbol(name)
                    for d in domains(sty):
                        t = App(t, rand_rhs(ctx, d, fuel - 1))
                    return t
                opts.append(full)
        if isinstance(ty, Arrow):
            opts.append(lambda: Lam(ty.dom,
                                    rand_rhs((ty.dom,) + ctx, ty.cod, fuel - 1)))
        if not opts:
            raise ValueError(f"cannot inhabit {ty}")
        return rng.choice(opts)()

    rules = []
    heads = [(n, t) for n, t in symbols if domains(t) and
             all(not isinstance(d, Arrow) or
                 all(isinstance(x, BaseType) for x in domains(d))
                 for d in domains(t))]
    for i in range(rng.randint(1, 2)):
        if not heads:
            break
        name, sty = rng.choice(heads)
        doms = domains(sty)
        lhs: Term = Symbol(name)
        for j in range(len(doms)):
            lhs = App(lhs, Var(j))
        rules.append(RewriteRule(tuple(doms), result_base(sty), lhs,
                                 rand_rhs(tuple(doms), result_base(sty), 2)))
    if not rules:
        # degenerate signature: fall back to a ground rule c => c
        b = base_tys[0]
        rules.append(RewriteRule((), b, Symbol(f"c{b.name}"), Symbol(f"c{b.name}")))
    afs = AFS(sig, tuple(rules))
    afs.check()

    bounds = SearchBounds(max_coeff=2)
    entries = []
    for name, sty in symbols:
        pool = list(islice(template_space(sty, bounds), 30))
        entries.append((name, rng.choice(pool)))
    return afs, Interpretation(tuple(entries))


# ------------------------------------------------ decrease coherence checks

def decrease_coherence(afs: AFS, interp: Interpretation, rng: random.Random,
                       n_terms: int = 500, samples: int = 50) -> tuple[int, int]:
    """Numerically confirm what certification promises: on random closed
    terms, every rule step strictly lowers the interpretation and every
    beta step weakly lowers it.  Returns (rule checks, beta checks)."""
    rule_checks = beta_checks = 0
    for _ in range(n_terms):
        t = gen_closed_term(rng)
        before = base_of(interpret_term(afs.signature, interp, (), t))
        for step in enumerate_steps(afs, (), t):
            after = base_of(interpret_term(afs.signature, interp, (), step.reduct))
            strict = isinstance(step.kind, RuleStep)
            for _ in range(samples):
                a = sample_assignment((), rng)
                x, y = eval_normal(before, a), eval_normal(after, a)
                if strict:
                    assert x > y, f"rule step failed to decrease: {step.kind}"
                    rule_checks += 1
                else:
                    assert x >= y, f"beta step increased: {step.kind}"
                    beta_checks += 1
    return rule_checks, beta_checks


# ------------------------------------------------------ interpretation edits

def entry_body_poly(afs: AFS, interp: Interpretation, name: str) -> NormalPoly:
    """Canonical body of one interpretation entry over its parameter context
    (innermost binder first, matching PVar indices)."""
    doms = domains(afs.signature.type_of(name))
    body = interp.poly_of(name)
    for _ in doms:
        body = body.body
    return normalize(tuple(reversed(doms)), body)


def with_entry_body(afs: AFS, interp: Interpretation, name: str,
                    poly: NormalPoly) -> Interpretation:
    doms = domains(afs.signature.type_of(name))
    expr = plam_chain(doms, FromBase(normal_poly_to_expr(poly)))
    return Interpretation(tuple(
        (n, expr if n == name else p) for n, p in interp.entries))


def interp_mutations(afs: AFS, interp: Interpretation):
    """One coefficient decrement and one deletion per monomial of every
    entry, each as a whole mutated interpretation."""
    for name, _ in interp.entries:
        poly = entry_body_poly(afs, interp, name)
        for k, m in enumerate(poly.monomials):
            for kind in ("decrement", "delete"):
                if kind == "decrement":
                    changed = Monomial(m.coeff - 1, m.powers, m.atoms)
                    rest = poly.monomials[:k] + (changed,) + poly.monomials[k + 1:]
                else:
                    rest = poly.monomials[:k] + poly.monomials[k + 1:]
                mutated = with_entry_body(afs, interp, name, make_poly(rest))
                yield name, m, kind, mutated
