"""Weakly monotonic polynomial interpretations over the naturals.

Every base type is interpreted as the naturals; an Arrow type as the
weakly monotone functions between its interpretations, ordered pointwise.
Interpretation stays symbolic throughout: semantic values carry canonical
polynomials (NormalPoly) over the ambient variable context, so rule
constraints come out as exact polynomial comparisons rather than sampled
numbers.  Numeric evaluation of a NormalPoly under an Assignment exists
as a diagnostic and testing device, not as the certification route.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence, Union

from .core import (
    Arrow,
    BaseType,
    Context,
    Lam,
    App,
    Symbol,
    Signature,
    SimpleType,
    Term,
    Var,
    VarIndex,
    arity,
    domains,
    infer_type,
)


class InterpError(ValueError):
    pass


class NonBaseResult(InterpError):
    """A base-typed polynomial was required but a function value arose."""


class UnsupportedShape(InterpError):
    """A higher-order variable was applied to a functional argument.

    Canonical form only represents atoms G(p1,...,pn) whose arguments are
    base-typed polynomials.
    """


class MissingBinding(InterpError):
    """Numeric evaluation hit a variable the assignment does not cover."""


class InterpretationTypeError(InterpError):
    """An interpretation entry does not fit its symbol's declared type."""


# ---------------------------------------------------------------- syntax

@dataclass(frozen=True)
class Const:
    """Natural number literal."""
    value: int


@dataclass(frozen=True)
class Plus:
    left: "BasePolyExpr"
    right: "BasePolyExpr"


@dataclass(frozen=True)
class Mult:
    left: "BasePolyExpr"
    right: "BasePolyExpr"


@dataclass(frozen=True)
class FromPoly:
    """Inject a base-typed polynomial expression into base-polynomial syntax."""
    poly: "PolyExpr"


@dataclass(frozen=True)
class FromBase:
    """View a base polynomial as a polynomial of (any) base type."""
    base: "BasePolyExpr"


@dataclass(frozen=True)
class PVar:
    """de Bruijn parameter reference."""
    index: VarIndex


@dataclass(frozen=True)
class PApp:
    fun: "PolyExpr"
    arg: "PolyExpr"


@dataclass(frozen=True)
class PLam:
    """Parameter abstraction with an explicit binder type."""
    binder: SimpleType
    body: "PolyExpr"


BasePolyExpr = Union[Const, Plus, Mult, FromPoly]
PolyExpr = Union[FromBase, PVar, PApp, PLam]


def plam_chain(binders: Sequence[SimpleType], body: PolyExpr) -> PolyExpr:
    """Wrap body in PLams; binders listed outermost first."""
    for b in reversed(binders):
        body = PLam(b, body)
    return body


# ------------------------------------------------------- polynomial typing

class _AnyBase:
    """Wildcard for 'some base type'; base polynomials are parametric in it."""

    def __repr__(self) -> str:
        return "AnyBase"


ANY_BASE = _AnyBase()

PolyType = Union[SimpleType, _AnyBase]


def types_compat(a: PolyType, b: PolyType) -> bool:
    if isinstance(a, _AnyBase):
        return isinstance(b, (BaseType, _AnyBase))
    if isinstance(b, _AnyBase):
        return isinstance(a, BaseType)
    if isinstance(a, Arrow) and isinstance(b, Arrow):
        return types_compat(a.dom, b.dom) and types_compat(a.cod, b.cod)
    return a == b


def infer_poly_type(ctx: Sequence[PolyType], p: PolyExpr) -> PolyType:
    match p:
        case FromBase(bp):
            _check_base(ctx, bp)
            return ANY_BASE
        case PVar(index):
            if not 0 <= index < len(ctx):
                raise InterpretationTypeError(f"unbound parameter index {index}")
            return ctx[index]
        case PApp(fun, arg):
            fun_ty = infer_poly_type(ctx, fun)
            if not isinstance(fun_ty, Arrow):
                raise InterpretationTypeError(
                    f"applied a polynomial of non-function type {fun_ty}")
            arg_ty = infer_poly_type(ctx, arg)
            if not types_compat(arg_ty, fun_ty.dom):
                raise InterpretationTypeError(
                    f"polynomial argument type {arg_ty} does not fit {fun_ty.dom}")
            return fun_ty.cod
        case PLam(binder, body):
            # The Arrow here may carry the wildcard in its codomain; it only
            # ever meets types_compat, never a real term.
            return Arrow(binder, infer_poly_type((binder,) + tuple(ctx), body))
    raise TypeError(f"not a polynomial expression: {p!r}")


def _check_base(ctx: Sequence[PolyType], bp: BasePolyExpr) -> None:
    match bp:
        case Const(value):
            if value < 0:
                raise InterpretationTypeError("polynomial constants are naturals")
        case Plus(left, right) | Mult(left, right):
            _check_base(ctx, left)
            _check_base(ctx, right)
        case FromPoly(poly):
            ty = infer_poly_type(ctx, poly)
            if not isinstance(ty, (BaseType, _AnyBase)):
                raise NonBaseResult(
                    f"base polynomial position holds a value of type {ty}")
        case _:
            raise TypeError(f"not a base polynomial expression: {bp!r}")


def check_poly_type(p: PolyExpr, expected: SimpleType) -> None:
    got = infer_poly_type((), p)
    if not types_compat(got, expected):
        raise InterpretationTypeError(
            f"interpretation has shape {got}, symbol declares {expected}")


# ---------------------------------------------------------- canonical form

@dataclass(frozen=True)
class Atom:
    """A fully applied higher-order variable G(p1,...,pn) of base type."""
    head: VarIndex
    args: tuple["NormalPoly", ...]

    def key(self) -> tuple:
        return (self.head, tuple(a.key() for a in self.args))


@dataclass(frozen=True)
class Monomial:
    """coeff * (product of first-order variable powers) * (product of atoms)."""
    coeff: int
    powers: tuple[tuple[VarIndex, int], ...]
    atoms: tuple[Atom, ...]

    def degree(self) -> int:
        return sum(e for _, e in self.powers) + len(self.atoms)

    def shape(self) -> tuple:
        return (self.powers, self.atoms)

    def shape_key(self) -> tuple:
        return (self.degree(), self.powers, tuple(a.key() for a in self.atoms))

    def is_constant(self) -> bool:
        return not self.powers and not self.atoms


@dataclass(frozen=True)
class NormalPoly:
    """Canonical sum of monomials: merged shapes, positive coefficients,
    fixed total order.  The zero polynomial is the empty sum."""
    monomials: tuple[Monomial, ...]

    def key(self) -> tuple:
        return tuple(m.shape_key() + (m.coeff,) for m in self.monomials)

    def is_zero(self) -> bool:
        return not self.monomials

    def constant_part(self) -> int:
        for m in self.monomials:
            if m.is_constant():
                return m.coeff
        return 0

    def non_constant(self) -> "NormalPoly":
        return NormalPoly(tuple(m for m in self.monomials if not m.is_constant()))


ZERO = NormalPoly(())
ONE = NormalPoly((Monomial(1, (), ()),))


def make_poly(monomials: Iterable[Monomial]) -> NormalPoly:
    """Canonicalize: merge equal shapes, drop zero coefficients, sort."""
    acc: dict[tuple, Monomial] = {}
    for m in monomials:
        shape = m.shape()
        prev = acc.get(shape)
        if prev is None:
            acc[shape] = m
        else:
            acc[shape] = Monomial(prev.coeff + m.coeff, m.powers, m.atoms)
    kept = [m for m in acc.values() if m.coeff != 0]
    if any(m.coeff < 0 for m in kept):
        raise ValueError("negative coefficient in polynomial over the naturals")
    kept.sort(key=Monomial.shape_key)
    return NormalPoly(tuple(kept))


def const_poly(n: int) -> NormalPoly:
    return make_poly([Monomial(n, (), ())]) if n else ZERO


def var_poly(index: VarIndex) -> NormalPoly:
    return NormalPoly((Monomial(1, ((index, 1),), ()),))


def atom_poly(head: VarIndex, args: tuple[NormalPoly, ...]) -> NormalPoly:
    return NormalPoly((Monomial(1, (), (Atom(head, args),)),))


def p_add(a: NormalPoly, b: NormalPoly) -> NormalPoly:
    return make_poly(a.monomials + b.monomials)


def p_mul(a: NormalPoly, b: NormalPoly) -> NormalPoly:
    out = []
    for m in a.monomials:
        for n in b.monomials:
            powers: dict[VarIndex, int] = dict(m.powers)
            for v, e in n.powers:
                powers[v] = powers.get(v, 0) + e
            out.append(Monomial(
                m.coeff * n.coeff,
                tuple(sorted(powers.items())),
                tuple(sorted(m.atoms + n.atoms, key=Atom.key))))
    return make_poly(out)


def shift_poly_vars(p: NormalPoly, by: int) -> NormalPoly:
    """Renumber every variable reference (first-order and atom heads)."""
    return make_poly(
        Monomial(m.coeff,
                 tuple(sorted((v + by, e) for v, e in m.powers)),
                 tuple(Atom(a.head + by, tuple(shift_poly_vars(q, by) for q in a.args))
                       for a in m.atoms))
        for m in p.monomials)


# ------------------------------------------------------------- values

@dataclass(frozen=True)
class BaseVal:
    """Semantic value at a base type: a canonical polynomial."""
    poly: NormalPoly


@dataclass(frozen=True)
class FunVal:
    """Semantic value at an Arrow type: a suspended symbolic function."""
    fn: Callable[["Value"], "Value"]


Value = Union[BaseVal, FunVal]


def apply_value(f: Value, x: Value) -> Value:
    if not isinstance(f, FunVal):
        raise NonBaseResult("applied a base-typed value")
    return f.fn(x)


def base_of(v: Value) -> NormalPoly:
    if not isinstance(v, BaseVal):
        raise NonBaseResult("function value where a base-typed one was required")
    return v.poly


def var_value(index: VarIndex, ty: SimpleType) -> Value:
    """The symbolic value of context variable `index` of type ty.

    Base-typed variables are degree-one polynomials; function-typed ones
    collect arguments until fully applied and then form an atom.  An atom
    argument that is itself a function has no canonical representation.
    """
    if isinstance(ty, BaseType):
        return BaseVal(var_poly(index))
    doms = domains(ty)

    def collect(args: tuple[Value, ...]) -> Value:
        if len(args) == len(doms):
            arg_polys = []
            for a in args:
                if not isinstance(a, BaseVal):
                    raise UnsupportedShape(
                        f"variable {index} applied to a functional argument")
                arg_polys.append(a.poly)
            return BaseVal(atom_poly(index, tuple(arg_polys)))
        return FunVal(lambda v: collect(args + (v,)))

    return collect(())


# ------------------------------------------------ evaluation of polynomials

def eval_poly_expr(p: PolyExpr, env: tuple[Value, ...]) -> Value:
    """Evaluate polynomial syntax to a semantic value (env: innermost first)."""
    match p:
        case FromBase(bp):
            return BaseVal(eval_base_expr(bp, env))
        case PVar(index):
            return env[index]
        case PApp(fun, arg):
            return apply_value(eval_poly_expr(fun, env), eval_poly_expr(arg, env))
        case PLam(_, body):
            return FunVal(lambda v: eval_poly_expr(body, (v,) + env))
    raise TypeError(f"not a polynomial expression: {p!r}")


def eval_base_expr(bp: BasePolyExpr, env: tuple[Value, ...]) -> NormalPoly:
    match bp:
        case Const(value):
            return const_poly(value)
        case Plus(left, right):
            return p_add(eval_base_expr(left, env), eval_base_expr(right, env))
        case Mult(left, right):
            return p_mul(eval_base_expr(left, env), eval_base_expr(right, env))
        case FromPoly(poly):
            return base_of(eval_poly_expr(poly, env))
    raise TypeError(f"not a base polynomial expression: {bp!r}")


def context_values(ctx: Context) -> tuple[Value, ...]:
    return tuple(var_value(i, ty) for i, ty in enumerate(ctx))


def normalize(ctx: Context, p: PolyExpr) -> NormalPoly:
    """Canonical form of a base-typed polynomial expression over ctx.

    Beta-reduces all PApp/PLam pairs and distributes products over sums.
    Raises NonBaseResult if p is function-typed, UnsupportedShape if a
    higher-order variable ends up applied to a functional argument.
    """
    return base_of(eval_poly_expr(p, context_values(ctx)))


# ------------------------------------------- the ordered-algebra operations

def minimal_element(ty: SimpleType) -> Value:
    """Least value of the type: 0 at base, constant function under Arrow."""
    if isinstance(ty, BaseType):
        return BaseVal(ZERO)
    return FunVal(lambda _: minimal_element(ty.cod))


def lower_value(ty: SimpleType, v: Value) -> NormalPoly:
    """Base-typed floor of v: apply to minimal elements until base."""
    if isinstance(ty, BaseType):
        return base_of(v)
    return lower_value(ty.cod, apply_value(v, minimal_element(ty.dom)))


def add_nat_at_type(ty: SimpleType, v: Value, n: NormalPoly) -> Value:
    """Add a base-typed amount pointwise through any number of Arrows."""
    if isinstance(ty, BaseType):
        return BaseVal(p_add(base_of(v), n))
    return FunVal(lambda x: add_nat_at_type(ty.cod, apply_value(v, x), n))


def papp(arg_ty: SimpleType, res_ty: SimpleType, f: Value, x: Value) -> Value:
    """Application in the algebra: f(x) plus the floor of x.

    The extra summand makes application strictly monotone in the function
    position and keeps it at least plain application; at base/base this
    is exactly f(x) + x.
    """
    return add_nat_at_type(res_ty, apply_value(f, x), lower_value(arg_ty, x))


# --------------------------------------------------------- interpretations

@dataclass(frozen=True)
class Interpretation:
    """Closed polynomial expression for each signature symbol."""
    entries: tuple[tuple[str, PolyExpr], ...]

    def __post_init__(self) -> None:
        names = [n for n, _ in self.entries]
        if len(set(names)) != len(names):
            raise InterpretationTypeError("duplicate interpretation entry")

    def poly_of(self, name: str) -> PolyExpr:
        for n, p in self.entries:
            if n == name:
                return p
        raise KeyError(name)

    def __contains__(self, name: str) -> bool:
        return any(n == name for n, _ in self.entries)

    def validate(self, sig: Signature) -> None:
        for name, ty in sig.symbols:
            if name not in self:
                raise InterpretationTypeError(f"no interpretation for symbol {name}")
            try:
                check_poly_type(self.poly_of(name), ty)
            except InterpError as e:
                raise InterpretationTypeError(f"J({name}): {e}") from e


def interpret_term(sig: Signature, interp: Interpretation, ctx: Context, t: Term) -> Value:
    """Symbolic interpretation of a well-typed term over ctx."""
    return _interp(sig, interp, t, context_values(ctx), ctx)[0]


def _interp(sig: Signature, interp: Interpretation, t: Term,
            env: tuple[Value, ...], tyctx: Context) -> tuple[Value, SimpleType]:
    match t:
        case Symbol(name):
            return eval_poly_expr(interp.poly_of(name), ()), sig.type_of(name)
        case Var(index):
            return env[index], tyctx[index]
        case Lam(binder, body):
            body_ty = infer_type(sig, (binder,) + tyctx, body)
            fn = FunVal(lambda v: _interp(sig, interp, body,
                                          (v,) + env, (binder,) + tyctx)[0])
            return fn, Arrow(binder, body_ty)
        case App(fun, arg):
            fv, fty = _interp(sig, interp, fun, env, tyctx)
            xv, _ = _interp(sig, interp, arg, env, tyctx)
            assert isinstance(fty, Arrow)
            return papp(fty.dom, fty.cod, fv, xv), fty.cod
    raise TypeError(f"not a term: {t!r}")


# ---------------------------------------------------- numeric assignments

@dataclass(frozen=True)
class LinearFn:
    """A weakly monotone function (x1..xk) -> const + sum coeffs[i]*x(i+1).

    The sampling family for higher-order variables: all coefficients are
    naturals, so monotonicity holds by construction.
    """
    const: int
    coeffs: tuple[int, ...]

    def __call__(self, *args: int) -> int:
        if len(args) != len(self.coeffs):
            raise MissingBinding(
                f"function of {len(self.coeffs)} arguments applied to {len(args)}")
        return self.const + sum(c * a for c, a in zip(self.coeffs, args))

    def __str__(self) -> str:
        parts = [str(self.const)] if self.const or not any(self.coeffs) else []
        parts += [f"{c}*x{i + 1}" if c != 1 else f"x{i + 1}"
                  for i, c in enumerate(self.coeffs) if c]
        binder = ",".join(f"x{i + 1}" for i in range(len(self.coeffs)))
        return f"\\({binder}). " + " + ".join(parts)


@dataclass(frozen=True)
class Assignment:
    """Numeric valuation of a context: naturals for base-typed variables,
    sampling-family functions for Arrow-typed ones."""
    base: tuple[tuple[VarIndex, int], ...]
    fun: tuple[tuple[VarIndex, LinearFn], ...]

    def base_value(self, v: VarIndex) -> int:
        for i, n in self.base:
            if i == v:
                return n
        raise MissingBinding(f"no value for variable {v}")

    def fun_value(self, v: VarIndex) -> LinearFn:
        for i, f in self.fun:
            if i == v:
                return f
        raise MissingBinding(f"no function for variable {v}")

    def __str__(self) -> str:
        parts = [f"y{i}={n}" for i, n in self.base]
        parts += [f"G{i}={f}" for i, f in self.fun]
        return ", ".join(parts)

    def render(self, namer: "VarNamer") -> str:
        """Like str, but with the names a constraint was printed under."""
        parts = [f"{namer.name(i)}={n}" for i, n in self.base]
        parts += [f"{namer.name(i)}={f}" for i, f in self.fun]
        return ", ".join(parts)


def eval_normal(p: NormalPoly, a: Assignment) -> int:
    """Numeric value of a canonical polynomial under an assignment."""
    total = 0
    for m in p.monomials:
        term = m.coeff
        for v, e in m.powers:
            term *= a.base_value(v) ** e
        for atom in m.atoms:
            fn = a.fun_value(atom.head)
            term *= fn(*(eval_normal(q, a) for q in atom.args))
        total += term
    return total


def sample_linear_fn(rng: random.Random, n_args: int, max_coeff: int = 3) -> LinearFn:
    """Draw from the sampling family: mostly random small-coefficient linear
    functions, plus the constant-zero and projection members."""
    roll = rng.random()
    if roll < 0.15:
        return LinearFn(0, (0,) * n_args)
    if roll < 0.30 and n_args:
        coeffs = [0] * n_args
        coeffs[rng.randrange(n_args)] = 1
        return LinearFn(0, tuple(coeffs))
    return LinearFn(rng.randint(0, max_coeff),
                    tuple(rng.randint(0, max_coeff) for _ in range(n_args)))


def sample_assignment(ctx: Context, rng: random.Random,
                      max_base: int = 4, max_coeff: int = 3) -> Assignment:
    base = []
    fun = []
    for i, ty in enumerate(ctx):
        if isinstance(ty, BaseType):
            base.append((i, rng.randint(0, max_base)))
        else:
            fun.append((i, sample_linear_fn(rng, arity(ty), max_coeff)))
    return Assignment(tuple(base), tuple(fun))


def enumerate_assignments(ctx: Context, base_values: Sequence[int],
                          coeff_values: Sequence[int]) -> Iterable[Assignment]:
    """Every assignment with base variables over base_values and linear
    functions whose coefficients range over coeff_values (exhaustive)."""
    slots: list[list] = []
    kinds: list[tuple[str, int]] = []
    for i, ty in enumerate(ctx):
        if isinstance(ty, BaseType):
            kinds.append(("base", i))
            slots.append(list(base_values))
        else:
            k = arity(ty)
            kinds.append(("fun", i))
            slots.append([LinearFn(c[0], tuple(c[1:]))
                          for c in itertools.product(coeff_values, repeat=k + 1)])
    for combo in itertools.product(*slots):
        base = tuple((i, v) for (kind, i), v in zip(kinds, combo) if kind == "base")
        fun = tuple((i, v) for (kind, i), v in zip(kinds, combo) if kind == "fun")
        yield Assignment(base, fun)


# ------------------------------------------------------------- rendering

class VarNamer:
    """Display names for context variables.

    scheme "per-kind": base variables y0,y1,... and function variables
    G0,G1,... each numbered within their own kind (constraint reports).
    scheme "positional": parameter at position i is yi or Gi (binder
    lists of interpretation entries).
    """

    def __init__(self, ctx: Context, scheme: str = "per-kind"):
        self.names: list[str] = []
        y = g = 0
        for pos, ty in enumerate(ctx):
            if isinstance(ty, BaseType):
                self.names.append(f"y{pos if scheme == 'positional' else y}")
                y += 1
            else:
                self.names.append(f"G{pos if scheme == 'positional' else g}")
                g += 1

    def name(self, index: VarIndex) -> str:
        return self.names[index]


def render_poly(p: NormalPoly, namer: VarNamer) -> str:
    """Render in the trace expression grammar, grouping monomials that share
    an atom multiset: e.g. 12 + 4*y0 + G0(0) + (9 + 3*y0)*G0(3 + y0)."""
    if p.is_zero():
        return "0"
    groups: dict[tuple, tuple[tuple[Atom, ...], list[Monomial]]] = {}
    for m in p.monomials:
        k = tuple(a.key() for a in m.atoms)
        groups.setdefault(k, (m.atoms, []))[1].append(m)
    parts = []
    for k in sorted(groups):
        atoms, monos = groups[k]
        coeff_poly = make_poly(Monomial(m.coeff, m.powers, ()) for m in monos)
        parts.append(_render_group(coeff_poly, atoms, namer))
    return " + ".join(parts)


def _render_group(coeff_poly: NormalPoly, atoms: tuple[Atom, ...], namer: VarNamer) -> str:
    atom_str = "*".join(
        f"{namer.name(a.head)}({','.join(render_poly(q, namer) for q in a.args)})"
        for a in atoms)
    if not atoms:
        return _render_first_order(coeff_poly, namer)
    if coeff_poly == ONE:
        return atom_str
    if len(coeff_poly.monomials) == 1:
        return _render_monomial(coeff_poly.monomials[0], namer) + "*" + atom_str
    return "(" + _render_first_order(coeff_poly, namer) + ")*" + atom_str


def _render_first_order(p: NormalPoly, namer: VarNamer) -> str:
    return " + ".join(_render_monomial(m, namer) for m in p.monomials)


def _render_monomial(m: Monomial, namer: VarNamer) -> str:
    factors = [namer.name(v) for v, e in m.powers for _ in range(e)]
    if m.coeff != 1 or not factors:
        factors.insert(0, str(m.coeff))
    return "*".join(factors)


def normal_poly_to_expr(p: NormalPoly) -> BasePolyExpr:
    """Canonical base-polynomial syntax for a NormalPoly, mirroring the
    grouped layout of render_poly (so rendering and reparsing agree)."""
    if p.is_zero():
        return Const(0)
    groups: dict[tuple, tuple[tuple[Atom, ...], list[Monomial]]] = {}
    for m in p.monomials:
        k = tuple(a.key() for a in m.atoms)
        groups.setdefault(k, (m.atoms, []))[1].append(m)
    out: Optional[BasePolyExpr] = None
    for k in sorted(groups):
        atoms, monos = groups[k]
        coeff_poly = make_poly(Monomial(m.coeff, m.powers, ()) for m in monos)
        expr = _group_to_expr(coeff_poly, atoms)
        out = expr if out is None else Plus(out, expr)
    return out


def _atom_to_expr(a: Atom) -> BasePolyExpr:
    fun: PolyExpr = PVar(a.head)
    for q in a.args:
        fun = PApp(fun, FromBase(normal_poly_to_expr(q)))
    return FromPoly(fun)


def _group_to_expr(coeff_poly: NormalPoly, atoms: tuple[Atom, ...]) -> BasePolyExpr:
    atom_exprs = [_atom_to_expr(a) for a in atoms]
    if not atom_exprs:
        return _first_order_to_expr(coeff_poly)
    expr: Optional[BasePolyExpr] = None
    if coeff_poly != ONE:
        expr = _first_order_to_expr(coeff_poly)
    for ae in atom_exprs:
        expr = ae if expr is None else Mult(expr, ae)
    return expr


def _first_order_to_expr(p: NormalPoly) -> BasePolyExpr:
    out: Optional[BasePolyExpr] = None
    for m in p.monomials:
        factors: list[BasePolyExpr] = []
        if m.coeff != 1 or not m.powers:
            factors.append(Const(m.coeff))
        factors += [FromPoly(PVar(v)) for v, e in m.powers for _ in range(e)]
        expr = factors[0]
        for f in factors[1:]:
            expr = Mult(expr, f)
        out = expr if out is None else Plus(out, expr)
    return out
