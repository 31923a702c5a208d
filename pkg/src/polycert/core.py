"""Simply-typed higher-order rewriting: terms, typing, matching, one-step reduction.

Terms use de Bruijn indices.  A Context is an ordered sequence of simple
types with the innermost binder at position 0; free variables of an open
term index into it.  Rewriting is rule application plus beta, closed under
the three congruence positions (App-left, App-right, Lam-body).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Union


# ---------------------------------------------------------------- types

@dataclass(frozen=True)
class BaseType:
    """Named base type (sort)."""
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Arrow:
    """Function type: dom -> cod (right-associative)."""
    dom: "SimpleType"
    cod: "SimpleType"

    def __str__(self) -> str:
        if isinstance(self.dom, Arrow):
            return f"({self.dom}) -> {self.cod}"
        return f"{self.dom} -> {self.cod}"


SimpleType = Union[BaseType, Arrow]

# A typing context; position 0 is the innermost binder.
Context = tuple[SimpleType, ...]

VarIndex = int


def domains(ty: SimpleType) -> tuple[SimpleType, ...]:
    """The argument types A1..An of A1 -> ... -> An -> b."""
    out: list[SimpleType] = []
    while isinstance(ty, Arrow):
        out.append(ty.dom)
        ty = ty.cod
    return tuple(out)


def result_base(ty: SimpleType) -> BaseType:
    while isinstance(ty, Arrow):
        ty = ty.cod
    return ty


def arity(ty: SimpleType) -> int:
    return len(domains(ty))


# ---------------------------------------------------------------- signature

class SignatureError(ValueError):
    pass


@dataclass(frozen=True)
class Signature:
    """Typed function symbols plus the declared base types.

    Symbol names are unique; every base type mentioned in a symbol's
    type must be declared.
    """
    symbols: tuple[tuple[str, SimpleType], ...]
    base_types: tuple[str, ...]

    def __post_init__(self) -> None:
        names = [n for n, _ in self.symbols]
        if len(set(names)) != len(names):
            dup = sorted({n for n in names if names.count(n) > 1})
            raise SignatureError(f"duplicate symbol name(s): {', '.join(dup)}")
        declared = set(self.base_types)
        for name, ty in self.symbols:
            for b in _base_names(ty):
                if b not in declared:
                    raise SignatureError(
                        f"symbol {name} uses undeclared base type {b}")

    def type_of(self, name: str) -> SimpleType:
        for n, ty in self.symbols:
            if n == name:
                return ty
        raise KeyError(name)

    def __contains__(self, name: str) -> bool:
        return any(n == name for n, _ in self.symbols)


def _base_names(ty: SimpleType) -> Iterator[str]:
    match ty:
        case BaseType(name):
            yield name
        case Arrow(dom, cod):
            yield from _base_names(dom)
            yield from _base_names(cod)


# ---------------------------------------------------------------- terms

@dataclass(frozen=True)
class Symbol:
    """Occurrence of a signature symbol."""
    name: str


@dataclass(frozen=True)
class Var:
    """de Bruijn variable; index 0 is the innermost binder."""
    index: VarIndex


@dataclass(frozen=True)
class Lam:
    """Abstraction with an explicit binder type annotation."""
    binder: SimpleType
    body: "Term"


@dataclass(frozen=True)
class App:
    fun: "Term"
    arg: "Term"


Term = Union[Symbol, Var, Lam, App]


def app_spine(head: Term, *args: Term) -> Term:
    """Left-nested application head a1 ... an."""
    t = head
    for a in args:
        t = App(t, a)
    return t


# A position is the root-to-leaf path to a subterm: 'f'/'a' descend an
# application, 'b' descends a lambda body.
Position = tuple[str, ...]


def position_str(pos: Position) -> str:
    return ".".join(pos) if pos else "root"


def subterm_at(t: Term, pos: Position) -> Term:
    for step in pos:
        match step, t:
            case "f", App(fun, _):
                t = fun
            case "a", App(_, arg):
                t = arg
            case "b", Lam(_, body):
                t = body
            case _:
                raise ValueError(f"position {position_str(pos)} invalid in term")
    return t


def replace_at(t: Term, pos: Position, new: Term) -> Term:
    if not pos:
        return new
    step, rest = pos[0], pos[1:]
    match step, t:
        case "f", App(fun, arg):
            return App(replace_at(fun, rest, new), arg)
        case "a", App(fun, arg):
            return App(fun, replace_at(arg, rest, new))
        case "b", Lam(binder, body):
            return Lam(binder, replace_at(body, rest, new))
    raise ValueError(f"position {position_str(pos)} invalid in term")


# ---------------------------------------------------------------- typing

class TypeInferenceError(ValueError):
    """Ill-typed term; carries the offending subterm."""

    def __init__(self, message: str, subterm: Term):
        super().__init__(message)
        self.subterm = subterm


class UnboundVariable(TypeInferenceError):
    def __init__(self, index: VarIndex, subterm: Term):
        super().__init__(f"unbound variable index {index}", subterm)
        self.index = index


class UnknownSymbol(TypeInferenceError):
    def __init__(self, name: str, subterm: Term):
        super().__init__(f"unknown symbol {name!r}", subterm)
        self.name = name


class ApplicationMismatch(TypeInferenceError):
    def __init__(self, expected: SimpleType, got: Optional[SimpleType], subterm: Term):
        if got is None:
            msg = f"applied term of base type {expected}"
        else:
            msg = f"argument type mismatch: expected {expected}, got {got}"
        super().__init__(msg, subterm)
        self.expected = expected
        self.got = got


def infer_type(sig: Signature, ctx: Context, t: Term) -> SimpleType:
    """Type of t over ctx, or a TypeInferenceError pinpointing the fault."""
    match t:
        case Symbol(name):
            if name not in sig:
                raise UnknownSymbol(name, t)
            return sig.type_of(name)
        case Var(index):
            if not 0 <= index < len(ctx):
                raise UnboundVariable(index, t)
            return ctx[index]
        case Lam(binder, body):
            return Arrow(binder, infer_type(sig, (binder,) + ctx, body))
        case App(fun, arg):
            fun_ty = infer_type(sig, ctx, fun)
            arg_ty = infer_type(sig, ctx, arg)
            if not isinstance(fun_ty, Arrow):
                raise ApplicationMismatch(fun_ty, None, t)
            if fun_ty.dom != arg_ty:
                raise ApplicationMismatch(fun_ty.dom, arg_ty, t)
            return fun_ty.cod
    raise TypeError(f"not a term: {t!r}")


# ---------------------------------------------------------------- substitution

# A substitution for a source context is one replacement term per position,
# all over a common target context.
Substitution = tuple[Term, ...]


def shift(t: Term, by: int, cutoff: int = 0) -> Term:
    """Add `by` to every variable index >= cutoff."""
    match t:
        case Var(index):
            return Var(index + by) if index >= cutoff else t
        case Lam(binder, body):
            return Lam(binder, shift(body, by, cutoff + 1))
        case App(fun, arg):
            return App(shift(fun, by, cutoff), shift(arg, by, cutoff))
        case _:
            return t


def substitute(t: Term, sub: Sequence[Term], depth: int = 0) -> Term:
    """Capture-avoiding simultaneous substitution.

    Variables below `depth` are binder-local and untouched; variable
    depth+i is replaced by sub[i] shifted past the binders crossed.
    The substitution must cover every free variable of t.
    """
    match t:
        case Var(index):
            if index < depth:
                return t
            j = index - depth
            if j >= len(sub):
                raise UnboundVariable(index, t)
            return shift(sub[j], depth)
        case Lam(binder, body):
            return Lam(binder, substitute(body, sub, depth + 1))
        case App(fun, arg):
            return App(substitute(fun, sub, depth), substitute(arg, sub, depth))
        case _:
            return t


def beta_reduce(body: Term, arg: Term) -> Term:
    """Contract (Lam(_, body)) arg: substitute arg for index 0."""
    return _subst_one(body, arg, 0)


def _subst_one(t: Term, arg: Term, depth: int) -> Term:
    match t:
        case Var(index):
            if index == depth:
                return shift(arg, depth)
            return Var(index - 1) if index > depth else t
        case Lam(binder, body):
            return Lam(binder, _subst_one(body, arg, depth + 1))
        case App(fun, a):
            return App(_subst_one(fun, arg, depth), _subst_one(a, arg, depth))
        case _:
            return t


# ---------------------------------------------------------------- rules

@dataclass(frozen=True)
class RewriteRule:
    """lhs => rhs over the rule's variable context.

    No pattern restriction is imposed: lhs may be any term, and rhs may
    use variables that never occur in lhs (such rules type-check and are
    certified, but the step enumerator cannot instantiate them).
    """
    vars: Context
    target: SimpleType
    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class AFS:
    """An algebraic functional system: signature plus rewrite rules."""
    signature: Signature
    rules: tuple[RewriteRule, ...]

    def check(self) -> None:
        """Re-infer both sides of every rule against the declared target."""
        for i, rule in enumerate(self.rules):
            for side, term in (("lhs", rule.lhs), ("rhs", rule.rhs)):
                ty = infer_type(self.signature, rule.vars, term)
                if ty != rule.target:
                    raise TypeInferenceError(
                        f"rule {i} {side} has type {ty}, declared {rule.target}",
                        term)


# ---------------------------------------------------------------- matching

def match_term(pattern: Term, subject: Term, n_vars: int) -> Optional[dict[VarIndex, Term]]:
    """First-order syntactic matching of subject against pattern.

    Pattern variables are the free indices 0..n_vars-1 of the pattern;
    each may match any subterm of its type, but a candidate that refers
    to binders opened inside the pattern is rejected (no capture).
    Lambdas and applications match only structurally; a non-linear
    pattern requires syntactically equal bindings.  Returns None on
    mismatch; bindings may be partial if some pattern variable never
    occurs.
    """
    binding: dict[VarIndex, Term] = {}
    if _match(pattern, subject, 0, binding):
        return binding
    return None


def _match(pattern: Term, subject: Term, depth: int, binding: dict[VarIndex, Term]) -> bool:
    match pattern:
        case Var(index) if index >= depth:
            v = index - depth
            if _uses_low_vars(subject, depth):
                return False
            candidate = shift(subject, -depth) if depth else subject
            if v in binding:
                return binding[v] == candidate
            binding[v] = candidate
            return True
        case Var(index):
            return subject == Var(index)
        case Symbol(name):
            return subject == Symbol(name)
        case Lam(binder, body):
            return (isinstance(subject, Lam) and subject.binder == binder
                    and _match(body, subject.body, depth + 1, binding))
        case App(fun, arg):
            return (isinstance(subject, App)
                    and _match(fun, subject.fun, depth, binding)
                    and _match(arg, subject.arg, depth, binding))
    return False


def _uses_low_vars(t: Term, depth: int, cutoff: int = 0) -> bool:
    """Does t mention a variable index in [cutoff, cutoff+depth)?"""
    match t:
        case Var(index):
            return cutoff <= index < cutoff + depth
        case Lam(_, body):
            return _uses_low_vars(body, depth, cutoff + 1)
        case App(fun, arg):
            return _uses_low_vars(fun, depth, cutoff) or _uses_low_vars(arg, depth, cutoff)
        case _:
            return False


# ---------------------------------------------------------------- steps

@dataclass(frozen=True)
class RuleStep:
    """Rewrite by rules[rule] at the given position."""
    rule: int
    position: Position


@dataclass(frozen=True)
class BetaStep:
    position: Position


StepKind = Union[RuleStep, BetaStep]


@dataclass(frozen=True)
class Step:
    kind: StepKind
    reduct: Term


def enumerate_steps(afs: AFS, ctx: Context, t: Term) -> list[Step]:
    """All one-step reducts of t, in a fixed deterministic order.

    Positions are visited pre-order; at each position rule steps come in
    rule-index order, then beta.  A rule fires only if matching binds
    its full variable context (rules with rhs-only variables never do).
    """
    steps: list[Step] = []
    for pos, sub in _positions(t, ()):
        for i, rule in enumerate(afs.rules):
            binding = match_term(rule.lhs, sub, len(rule.vars))
            if binding is None or len(binding) != len(rule.vars):
                continue
            sub_terms = tuple(binding[v] for v in range(len(rule.vars)))
            reduct = substitute(rule.rhs, sub_terms)
            steps.append(Step(RuleStep(i, pos), replace_at(t, pos, reduct)))
        if isinstance(sub, App) and isinstance(sub.fun, Lam):
            reduct = beta_reduce(sub.fun.body, sub.arg)
            steps.append(Step(BetaStep(pos), replace_at(t, pos, reduct)))
    return steps


def _positions(t: Term, here: Position) -> Iterator[tuple[Position, Term]]:
    yield here, t
    match t:
        case App(fun, arg):
            yield from _positions(fun, here + ("f",))
            yield from _positions(arg, here + ("a",))
        case Lam(_, body):
            yield from _positions(body, here + ("b",))
