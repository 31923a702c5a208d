"""The .onijn proof-trace format: parsing, elaboration, rendering.

A trace is plain text:

    YES
    Signature: [ cons : a -> list -> list ; nil : list ]
    Rules: [ map nil F => nil ]
    Interpretation: [ J(nil) = 3 ; J(map) = Lam[y0;G1].3*y0 + 3*y0*G1(y0) ]

Whitespace is insignificant; list items are ';'-separated (a trailing ';'
is tolerated, never emitted).  '->' is right-associative, application is
juxtaposition (left-associative), '*' binds tighter than '+', lambda is
written "\\x. term".  Identifiers are an ASCII letter followed by letters,
digits or underscores.  An identifier is a symbol occurrence iff it is
declared in the signature (capitalization carries no meaning); remaining
identifiers are rule variables whose types are inferred by first-order
unification.  Rule contexts are ordered by first occurrence in the lhs,
then the rhs.
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from typing import Iterator, Mapping, Optional, Sequence, Union

from .core import (
    AFS,
    App,
    Arrow,
    BaseType,
    Context,
    Lam,
    RewriteRule,
    Signature,
    SignatureError,
    SimpleType,
    Symbol,
    Term,
    Var,
    domains,
)
from .interp import (
    BasePolyExpr,
    Const,
    FromBase,
    FromPoly,
    Interpretation,
    InterpretationTypeError,
    Mult,
    NormalPoly,
    PApp,
    PLam,
    Plus,
    PolyExpr,
    PVar,
    VarNamer,
    apply_value,
    base_of,
    eval_poly_expr,
    normalize,
    plam_chain,
    render_poly,
    var_value,
)


# ------------------------------------------------------------------ errors

class TraceError(ValueError):
    pass


class TraceSyntaxError(TraceError):
    """Syntax fault with position and the tokens that would have been legal."""

    def __init__(self, line: int, col: int, expected: Sequence[str], found: str):
        self.line = line
        self.col = col
        self.expected = tuple(expected)
        self.found = found
        alts = " or ".join(expected)
        super().__init__(f"{line}:{col}: expected {alts}, found {found}")


class ElaborationError(TraceError):
    pass


class UnknownSymbolInInterpretation(ElaborationError):
    def __init__(self, name: str, line: int, col: int):
        super().__init__(f"{line}:{col}: J({name}) interprets an undeclared symbol")
        self.symbol = name


class DuplicateInterpretation(ElaborationError):
    def __init__(self, name: str, line: int, col: int):
        super().__init__(f"{line}:{col}: duplicate interpretation for {name}")
        self.symbol = name


class MissingInterpretation(ElaborationError):
    def __init__(self, names: Sequence[str]):
        super().__init__("no interpretation for symbol(s): " + ", ".join(names))
        self.symbols = tuple(names)


class ArityMismatch(ElaborationError):
    def __init__(self, symbol: str, expected: int, got: int):
        super().__init__(
            f"J({symbol}) declares {got} parameter(s), its type takes {expected}")
        self.symbol = symbol
        self.expected = expected
        self.got = got


class UnificationFailure(ElaborationError):
    def __init__(self, rule: int, variable: Optional[str], detail: str):
        where = f" at variable {variable}" if variable else ""
        super().__init__(f"rule {rule}: cannot infer types{where}: {detail}")
        self.rule = rule
        self.variable = variable


# ------------------------------------------------------------------- lexing

_PUNCT = ("=>", "->", "(", ")", "[", "]", ";", ",", ":", "=", "+", "*", ".", "\\")
_IDENT_START = set(string.ascii_letters)
_IDENT_CONT = set(string.ascii_letters + string.digits + "_")


@dataclass(frozen=True)
class Token:
    kind: str  # "ident", "nat", "punct", "eof"
    text: str
    line: int
    col: int

    def describe(self) -> str:
        if self.kind == "eof":
            return "end of input"
        return repr(self.text)


def _lex(text: str) -> list[Token]:
    tokens = []
    line, col, i = 1, 1, 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        start_line, start_col = line, col
        if ch in _IDENT_START:
            j = i + 1
            while j < n and text[j] in _IDENT_CONT:
                j += 1
            tokens.append(Token("ident", text[i:j], start_line, start_col))
            col += j - i
            i = j
            continue
        if ch.isdigit():
            j = i + 1
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(Token("nat", text[i:j], start_line, start_col))
            col += j - i
            i = j
            continue
        for p in _PUNCT:
            if text.startswith(p, i):
                tokens.append(Token("punct", p, start_line, start_col))
                col += len(p)
                i += len(p)
                break
        else:
            raise TraceSyntaxError(line, col, ["a token"], repr(ch))
    tokens.append(Token("eof", "", line, col))
    return tokens


# ---------------------------------------------------------------- raw trees

@dataclass(frozen=True)
class RawIdent:
    name: str
    line: int
    col: int


@dataclass(frozen=True)
class RawApply:
    fun: "RawTerm"
    arg: "RawTerm"


@dataclass(frozen=True)
class RawLambda:
    binder: str
    body: "RawTerm"


RawTerm = Union[RawIdent, RawApply, RawLambda]


@dataclass(frozen=True)
class RawRule:
    lhs: RawTerm
    rhs: RawTerm


@dataclass(frozen=True)
class RNat:
    value: int


@dataclass(frozen=True)
class RName:
    name: str
    line: int
    col: int


@dataclass(frozen=True)
class RAdd:
    left: "RawPoly"
    right: "RawPoly"


@dataclass(frozen=True)
class RMul:
    left: "RawPoly"
    right: "RawPoly"


@dataclass(frozen=True)
class RCall:
    name: str
    args: tuple["RawPoly", ...]
    line: int
    col: int


RawPoly = Union[RNat, RName, RAdd, RMul, RCall]


@dataclass(frozen=True)
class RawEntry:
    symbol: str
    line: int
    col: int
    binders: tuple[str, ...]
    body: RawPoly


@dataclass(frozen=True)
class RawTrace:
    decls: tuple[tuple[str, SimpleType], ...]
    rules: tuple[RawRule, ...]
    entries: Optional[tuple[RawEntry, ...]]


# ------------------------------------------------------------------ parser

class _Parser:
    def __init__(self, text: str):
        self.tokens = _lex(text)
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def accept(self, text: str) -> Optional[Token]:
        tok = self.peek()
        if tok.kind in ("punct", "ident") and tok.text == text:
            return self.advance()
        return None

    def expect(self, text: str) -> Token:
        tok = self.accept(text)
        if tok is None:
            self.fail([repr(text)])
        return tok

    def expect_ident(self, label: str = "an identifier") -> Token:
        tok = self.peek()
        if tok.kind != "ident":
            self.fail([label])
        return self.advance()

    def fail(self, expected: Sequence[str]) -> None:
        tok = self.peek()
        raise TraceSyntaxError(tok.line, tok.col, expected, tok.describe())

    # trace := "YES" sig rules interp
    def parse_trace(self, allow_missing_interpretation: bool) -> RawTrace:
        tok = self.peek()
        if not (tok.kind == "ident" and tok.text == "YES"):
            self.fail(["'YES'"])
        self.advance()
        decls = self.parse_signature()
        rules = self.parse_rules()
        entries: Optional[tuple[RawEntry, ...]] = None
        if self.peek().kind != "eof" or not allow_missing_interpretation:
            entries = self.parse_interpretation()
        if self.peek().kind != "eof":
            self.fail(["end of input"])
        return RawTrace(decls, rules, entries)

    def _section(self, keyword: str) -> None:
        tok = self.peek()
        if not (tok.kind == "ident" and tok.text == keyword):
            self.fail([f"'{keyword}:'"])
        self.advance()
        self.expect(":")
        self.expect("[")

    def _items(self, parse_item) -> list:
        """';'-separated items up to ']'; tolerates one trailing ';'."""
        items = []
        if self.accept("]"):
            return items
        items.append(parse_item())
        while self.accept(";"):
            if self.accept("]"):
                return items
            items.append(parse_item())
        self.expect("]")
        return items

    # sig := "Signature:" "[" decl {";" decl} "]"
    def parse_signature(self) -> tuple[tuple[str, SimpleType], ...]:
        self._section("Signature")
        return tuple(self._items(self.parse_decl))

    # decl := ident ":" type
    def parse_decl(self) -> tuple[str, SimpleType]:
        name = self.expect_ident("a symbol name")
        self.expect(":")
        return name.text, self.parse_type()

    # type := atom | atom "->" type
    def parse_type(self) -> SimpleType:
        left = self.parse_type_atom()
        if self.accept("->"):
            return Arrow(left, self.parse_type())
        return left

    def parse_type_atom(self) -> SimpleType:
        if self.accept("("):
            ty = self.parse_type()
            self.expect(")")
            return ty
        tok = self.peek()
        if tok.kind != "ident":
            self.fail(["a base type", "'('"])
        self.advance()
        return BaseType(tok.text)

    # rules := "Rules:" "[" rule {";" rule} "]"
    def parse_rules(self) -> tuple[RawRule, ...]:
        self._section("Rules")
        return tuple(self._items(self.parse_rule))

    # rule := term "=>" term
    def parse_rule(self) -> RawRule:
        lhs = self.parse_term()
        self.expect("=>")
        return RawRule(lhs, self.parse_term())

    # term := lambda | appterm ; lambda := "\" ident "." term
    def parse_term(self) -> RawTerm:
        if self.accept("\\"):
            binder = self.expect_ident("a binder name")
            self.expect(".")
            return RawLambda(binder.text, self.parse_term())
        return self.parse_appterm()

    # appterm := atomterm {atomterm}
    def parse_appterm(self) -> RawTerm:
        term = self.parse_atomterm()
        while True:
            tok = self.peek()
            if tok.kind == "ident" or (tok.kind == "punct" and tok.text == "("):
                term = RawApply(term, self.parse_atomterm())
            else:
                return term

    def parse_atomterm(self) -> RawTerm:
        if self.accept("("):
            term = self.parse_term()
            self.expect(")")
            return term
        tok = self.peek()
        if tok.kind != "ident":
            self.fail(["a term"])
        self.advance()
        return RawIdent(tok.text, tok.line, tok.col)

    # interp := "Interpretation:" "[" entry {";" entry} "]"
    def parse_interpretation(self) -> tuple[RawEntry, ...]:
        self._section("Interpretation")
        return tuple(self._items(self.parse_entry))

    # entry := "J" "(" ident ")" "=" rawpoly
    def parse_entry(self) -> RawEntry:
        tok = self.peek()
        if not (tok.kind == "ident" and tok.text == "J"):
            self.fail(["'J('"])
        self.advance()
        self.expect("(")
        sym = self.expect_ident("a symbol name")
        self.expect(")")
        self.expect("=")
        binders: tuple[str, ...] = ()
        tok = self.peek()
        if tok.kind == "ident" and tok.text == "Lam":
            self.advance()
            self.expect("[")
            names = [self.expect_ident("a parameter name").text]
            while self.accept(";"):
                names.append(self.expect_ident("a parameter name").text)
            self.expect("]")
            self.expect(".")
            binders = tuple(names)
        return RawEntry(sym.text, sym.line, sym.col, binders, self.parse_poly())

    # polyexpr := polyterm {"+" polyterm}
    def parse_poly(self) -> RawPoly:
        left = self.parse_poly_term()
        while self.accept("+"):
            left = RAdd(left, self.parse_poly_term())
        return left

    # polyterm := polyfactor {"*" polyfactor}
    def parse_poly_term(self) -> RawPoly:
        left = self.parse_poly_factor()
        while self.accept("*"):
            left = RMul(left, self.parse_poly_factor())
        return left

    # polyfactor := nat | ident | ident "(" polyexpr {"," polyexpr} ")" | "(" polyexpr ")"
    def parse_poly_factor(self) -> RawPoly:
        tok = self.peek()
        if tok.kind == "nat":
            self.advance()
            return RNat(int(tok.text))
        if tok.kind == "ident":
            self.advance()
            if self.accept("("):
                args = [self.parse_poly()]
                while self.accept(","):
                    args.append(self.parse_poly())
                self.expect(")")
                return RCall(tok.text, tuple(args), tok.line, tok.col)
            return RName(tok.text, tok.line, tok.col)
        if self.accept("("):
            inner = self.parse_poly()
            self.expect(")")
            return inner
        self.fail(["a number", "a parameter", "'('"])
        raise AssertionError  # fail always raises


def parse_trace(text: str, allow_missing_interpretation: bool = False) -> RawTrace:
    """Parse trace text to raw trees; TraceSyntaxError carries line/column
    and the tokens that would have been accepted."""
    return _Parser(text).parse_trace(allow_missing_interpretation)


# ------------------------------------------------------- type unification

class _TVar:
    __slots__ = ("instance",)

    def __init__(self) -> None:
        self.instance: Optional[object] = None


def _resolve(t):
    while isinstance(t, _TVar) and t.instance is not None:
        t = t.instance
    return t


def _occurs(v: _TVar, t) -> bool:
    t = _resolve(t)
    if t is v:
        return True
    if isinstance(t, Arrow):
        return _occurs(v, t.dom) or _occurs(v, t.cod)
    return False


class _UnifyClash(Exception):
    def __init__(self, left, right):
        self.left = left
        self.right = right
        super().__init__(f"{_show_type(left)} vs {_show_type(right)}")


def _unify(a, b) -> None:
    a, b = _resolve(a), _resolve(b)
    if a is b:
        return
    if isinstance(a, _TVar):
        if _occurs(a, b):
            raise _UnifyClash(a, b)
        a.instance = b
        return
    if isinstance(b, _TVar):
        _unify(b, a)
        return
    if isinstance(a, BaseType) and isinstance(b, BaseType) and a == b:
        return
    if isinstance(a, Arrow) and isinstance(b, Arrow):
        _unify(a.dom, b.dom)
        _unify(a.cod, b.cod)
        return
    raise _UnifyClash(a, b)


def _show_type(t) -> str:
    t = _resolve(t)
    if isinstance(t, _TVar):
        return "?"
    if isinstance(t, Arrow):
        return f"({_show_type(t.dom)} -> {_show_type(t.cod)})"
    return str(t)


def _ground(t) -> Optional[SimpleType]:
    t = _resolve(t)
    if isinstance(t, _TVar):
        return None
    if isinstance(t, Arrow):
        dom = _ground(t.dom)
        cod = _ground(t.cod)
        return Arrow(dom, cod) if dom is not None and cod is not None else None
    return t


# -------------------------------------------------------------- elaboration

def elaborate(raw: RawTrace) -> tuple[AFS, Optional[Interpretation]]:
    """Raw trees to a typed AFS and (when present) its interpretation.

    Symbol/variable discrimination is by signature membership.  Rule
    variable types come from unification; every variable and binder must
    end up with a ground type.  Interpretation entries are type-checked
    against their symbol's declared type.
    """
    sig = _elaborate_signature(raw.decls)
    rules = tuple(_elaborate_rule(sig, r, i) for i, r in enumerate(raw.rules))
    afs = AFS(sig, rules)
    interp = None if raw.entries is None else _elaborate_interp(sig, raw.entries)
    return afs, interp


def _elaborate_signature(decls: Sequence[tuple[str, SimpleType]]) -> Signature:
    bases: list[str] = []
    for _, ty in decls:
        for b in _type_bases(ty):
            if b not in bases:
                bases.append(b)
    try:
        return Signature(tuple(decls), tuple(bases))
    except SignatureError as e:
        raise ElaborationError(str(e)) from e


def _type_bases(ty: SimpleType) -> Iterator[str]:
    if isinstance(ty, BaseType):
        yield ty.name
    else:
        yield from _type_bases(ty.dom)
        yield from _type_bases(ty.cod)


def _elaborate_rule(sig: Signature, raw: RawRule, index: int) -> RewriteRule:
    var_types: dict[str, _TVar] = {}
    var_order: list[str] = []
    binder_types: dict[int, _TVar] = {}

    def infer(t: RawTerm, bound: tuple[tuple[str, _TVar], ...]):
        match t:
            case RawIdent(name, _, _):
                for bname, bty in bound:
                    if bname == name:
                        return bty
                if name in sig:
                    return sig.type_of(name)
                if name not in var_types:
                    var_types[name] = _TVar()
                    var_order.append(name)
                return var_types[name]
            case RawApply(fun, arg):
                fun_ty = infer(fun, bound)
                arg_ty = infer(arg, bound)
                res = _TVar()
                try:
                    _unify(fun_ty, Arrow(arg_ty, res))
                except _UnifyClash as e:
                    blame = fun.name if isinstance(fun, RawIdent) else None
                    raise UnificationFailure(index, blame, str(e)) from e
                return res
            case RawLambda(binder, body):
                bty = _TVar()
                binder_types[id(t)] = bty
                return Arrow(bty, infer(body, ((binder, bty),) + bound))
        raise TypeError(f"not a raw term: {t!r}")

    lhs_ty = infer(raw.lhs, ())
    rhs_ty = infer(raw.rhs, ())
    try:
        _unify(lhs_ty, rhs_ty)
    except _UnifyClash as e:
        raise UnificationFailure(index, None, f"rule sides disagree: {e}") from e

    ctx_types = []
    for name in var_order:
        g = _ground(var_types[name])
        if g is None:
            raise UnificationFailure(index, name, "type is not fully determined")
        ctx_types.append(g)
    target = _ground(lhs_ty)
    if target is None:
        raise UnificationFailure(index, None, "rule type is not fully determined")

    positions = {name: i for i, name in enumerate(var_order)}

    def build(t: RawTerm, bound: tuple[str, ...]) -> Term:
        match t:
            case RawIdent(name, _, _):
                for i, bname in enumerate(bound):
                    if bname == name:
                        return Var(i)
                if name in sig:
                    return Symbol(name)
                return Var(len(bound) + positions[name])
            case RawApply(fun, arg):
                return App(build(fun, bound), build(arg, bound))
            case RawLambda(binder, body):
                bty = _ground(binder_types[id(t)])
                if bty is None:
                    raise UnificationFailure(index, binder,
                                             "binder type is not fully determined")
                return Lam(bty, build(body, (binder,) + bound))
        raise TypeError(f"not a raw term: {t!r}")

    return RewriteRule(tuple(ctx_types), target,
                       build(raw.lhs, ()), build(raw.rhs, ()))


def _elaborate_interp(sig: Signature, entries: Sequence[RawEntry]) -> Interpretation:
    out: list[tuple[str, PolyExpr]] = []
    seen: set[str] = set()
    for e in entries:
        if e.symbol not in sig:
            raise UnknownSymbolInInterpretation(e.symbol, e.line, e.col)
        if e.symbol in seen:
            raise DuplicateInterpretation(e.symbol, e.line, e.col)
        seen.add(e.symbol)
        ty = sig.type_of(e.symbol)
        doms = domains(ty)
        if len(e.binders) != len(doms):
            raise ArityMismatch(e.symbol, len(doms), len(e.binders))
        if len(set(e.binders)) != len(e.binders):
            raise ElaborationError(f"J({e.symbol}) repeats a parameter name")
        k = len(e.binders)
        scope = {name: k - 1 - j for j, name in enumerate(e.binders)}
        body = elaborate_poly_body(e.body, scope)
        out.append((e.symbol, plam_chain(doms, FromBase(body))))
    missing = [n for n, _ in sig.symbols if n not in seen]
    if missing:
        raise MissingInterpretation(missing)
    interp = Interpretation(tuple(out))
    try:
        interp.validate(sig)
    except InterpretationTypeError as e:
        raise ElaborationError(str(e)) from e
    return interp


def elaborate_poly_body(e: RawPoly, scope: Mapping[str, int]) -> BasePolyExpr:
    """Polynomial syntax to a base expression; names resolve through scope."""
    match e:
        case RNat(value):
            return Const(value)
        case RAdd(left, right):
            return Plus(elaborate_poly_body(left, scope),
                        elaborate_poly_body(right, scope))
        case RMul(left, right):
            return Mult(elaborate_poly_body(left, scope),
                        elaborate_poly_body(right, scope))
        case RName(name, line, col):
            if name not in scope:
                raise ElaborationError(f"{line}:{col}: unknown parameter {name}")
            return FromPoly(PVar(scope[name]))
        case RCall(name, args, line, col):
            if name not in scope:
                raise ElaborationError(f"{line}:{col}: unknown parameter {name}")
            fun: PolyExpr = PVar(scope[name])
            for a in args:
                fun = PApp(fun, FromBase(elaborate_poly_body(a, scope)))
            return FromPoly(fun)
    raise TypeError(f"not a raw polynomial: {e!r}")


def parse_poly_text(text: str, ctx: Context, scheme: str = "per-kind") -> NormalPoly:
    """Parse one polynomial in the trace grammar against a variable context
    (names per VarNamer) and return its canonical form."""
    parser = _Parser(text)
    raw = parser.parse_poly()
    if parser.peek().kind != "eof":
        parser.fail(["end of input"])
    names = VarNamer(ctx, scheme).names
    scope = {name: i for i, name in enumerate(names)}
    return normalize(ctx, FromBase(elaborate_poly_body(raw, scope)))


# --------------------------------------------------------------- rendering

def render_trace(afs: AFS, interp: Interpretation) -> str:
    """Canonical textual form; parse/elaborate of the output reproduces
    (afs, interp) up to variable naming."""
    taken = {name for name, _ in afs.signature.symbols}
    lines = ["YES", "Signature: ["]
    decls = [f"  {name} : {ty}" for name, ty in afs.signature.symbols]
    lines += _join_items(decls)
    lines.append("]")
    lines.append("Rules: [")
    rules = [f"  {render_rule(rule, taken)}" for rule in afs.rules]
    lines += _join_items(rules)
    lines.append("]")
    lines.append("Interpretation: [")
    entries = [f"  J({name}) = {render_entry(interp.poly_of(name), ty)}"
               for name, ty in afs.signature.symbols]
    lines += _join_items(entries)
    lines.append("]")
    return "\n".join(lines) + "\n"


def _join_items(items: list[str]) -> list[str]:
    return [item + (" ;" if i < len(items) - 1 else "")
            for i, item in enumerate(items)]


def _fresh_names(prefix: str, count: int, taken: set[str]) -> list[str]:
    names = []
    i = 0
    while len(names) < count:
        cand = f"{prefix}{i}"
        if cand not in taken:
            names.append(cand)
        i += 1
    return names


def render_rule(rule: RewriteRule, taken: set[str]) -> str:
    var_names = _fresh_names("X", len(rule.vars), taken)
    return (f"{render_term(rule.lhs, var_names, taken)} => "
            f"{render_term(rule.rhs, var_names, taken)}")


def render_term(t: Term, var_names: Sequence[str], taken: set[str]) -> str:
    binder_pool = _fresh_names("x", _lam_depth(t), taken | set(var_names))

    def go(t: Term, bound: tuple[str, ...], atomic: bool) -> str:
        match t:
            case Symbol(name):
                return name
            case Var(index):
                if index < len(bound):
                    return bound[index]
                return var_names[index - len(bound)]
            case Lam(_, body):
                name = binder_pool[len(bound)]
                s = f"\\{name}. {go(body, (name,) + bound, False)}"
                return f"({s})" if atomic else s
            case App(_, _):
                parts = []
                head = t
                while isinstance(head, App):
                    parts.append(go(head.arg, bound, True))
                    head = head.fun
                parts.append(go(head, bound, True))
                s = " ".join(reversed(parts))
                return f"({s})" if atomic else s
        raise TypeError(f"not a term: {t!r}")

    return go(t, (), False)


def _lam_depth(t: Term) -> int:
    match t:
        case Lam(_, body):
            return 1 + _lam_depth(body)
        case App(fun, arg):
            return max(_lam_depth(fun), _lam_depth(arg))
        case _:
            return 0


def render_entry(p: PolyExpr, ty: SimpleType) -> str:
    """One interpretation right-hand side, binder names positional."""
    doms = domains(ty)
    namer = VarNamer(doms, scheme="positional")
    body = _strip_plams(p, len(doms))
    if body is not None:
        rendered = _render_body(body, namer, len(doms))
        if rendered is not None:
            return _with_binders(rendered, doms, namer)
    # Not in the grammar's image (stray redexes, odd nesting): render the
    # canonical form instead, which denotes the same function.
    v = eval_poly_expr(p, ())
    for pos, dom in enumerate(doms):
        v = apply_value(v, var_value(pos, dom))
    return _with_binders(render_poly(base_of(v), namer), doms, namer)


def _with_binders(body: str, doms: Sequence[SimpleType], namer: VarNamer) -> str:
    if not doms:
        return body
    binders = ";".join(namer.name(i) for i in range(len(doms)))
    return f"Lam[{binders}].{body}"


def _strip_plams(p: PolyExpr, count: int) -> Optional[BasePolyExpr]:
    for _ in range(count):
        if not isinstance(p, PLam):
            return None
        p = p.body
    return p.base if isinstance(p, FromBase) else None


def _render_body(b: BasePolyExpr, namer: VarNamer, n_binders: int) -> Optional[str]:
    # Precedence levels: 0 sums, 1 products, 2 atoms.  Parenthesize right
    # operands of their own level so rendering inverts left-associated
    # parsing exactly.  Parameter references are de Bruijn (innermost
    # first); display names are positional, hence the index flip.
    def name_of(index: int) -> Optional[str]:
        pos = n_binders - 1 - index
        return namer.name(pos) if 0 <= pos < n_binders else None

    def go(b: BasePolyExpr, level: int) -> Optional[str]:
        match b:
            case Const(value):
                return str(value)
            case Plus(left, right):
                l = go(left, 0)
                r = go(right, 1)
                if l is None or r is None:
                    return None
                s = f"{l} + {r}"
                return f"({s})" if level > 0 else s
            case Mult(left, right):
                l = go(left, 1)
                r = go(right, 2)
                if l is None or r is None:
                    return None
                s = f"{l}*{r}"
                return f"({s})" if level > 1 else s
            case FromPoly(PVar(index)):
                return name_of(index)
            case FromPoly(papp_chain):
                head = papp_chain
                args: list[str] = []
                while isinstance(head, PApp):
                    if not isinstance(head.arg, FromBase):
                        return None
                    arg = go(head.arg.base, 0)
                    if arg is None:
                        return None
                    args.append(arg)
                    head = head.fun
                if not isinstance(head, PVar) or not args:
                    return None
                fn = name_of(head.index)
                if fn is None:
                    return None
                return f"{fn}({','.join(reversed(args))})"
        return None

    return go(b, 0)
