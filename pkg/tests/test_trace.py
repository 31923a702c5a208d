"""Tests for the trace format: lexing, parsing, elaboration, rendering,
and the parse/render round trip."""

import random

import pytest

from polycert.core import (
    App,
    Arrow,
    BaseType,
    Lam,
    Symbol,
    Var,
)
from polycert.interp import (
    Const,
    FromBase,
    FromPoly,
    Mult,
    PApp,
    PLam,
    PVar,
    Plus,
    const_poly,
    p_add,
    p_mul,
    render_poly,
    var_poly,
    VarNamer,
)
from polycert.trace import (
    ArityMismatch,
    DuplicateInterpretation,
    ElaborationError,
    MissingInterpretation,
    TraceSyntaxError,
    UnificationFailure,
    UnknownSymbolInInterpretation,
    elaborate,
    parse_poly_text,
    parse_trace,
    render_entry,
    render_rule,
    render_term,
    render_trace,
)

from support import gen_afs_interp, gen_ctx, gen_poly

O = BaseType("o")


def elab(text, allow_missing=False):
    return elaborate(parse_trace(text, allow_missing_interpretation=allow_missing))


# ------------- Lexing and syntax errors -------------

def test_empty_input_wants_yes():
    with pytest.raises(TraceSyntaxError) as exc:
        parse_trace("")
    assert str(exc.value) == "1:1: expected 'YES', found end of input"


def test_unlexable_character_is_positioned():
    with pytest.raises(TraceSyntaxError) as exc:
        parse_trace("YES\nSignature: [#]")
    e = exc.value
    assert (e.line, e.col) == (2, 13)
    assert str(e) == "2:13: expected a token, found '#'"


def test_wrong_section_keyword():
    with pytest.raises(TraceSyntaxError) as exc:
        parse_trace("YES\nRules: [ ]")
    assert str(exc.value) == "2:1: expected 'Signature:', found 'Rules'"


def test_rule_missing_arrow():
    text = "YES\nSignature: [ f : o ]\nRules: [ f f ]"
    with pytest.raises(TraceSyntaxError) as exc:
        parse_trace(text)
    e = exc.value
    assert e.expected == ("'=>'",)
    assert e.found == "']'"


def test_trailing_garbage_rejected(map_text):
    with pytest.raises(TraceSyntaxError) as exc:
        parse_trace(map_text + "extra\n")
    e = exc.value
    assert e.expected == ("end of input",)
    assert e.found == "'extra'"


def test_poly_text_truncated():
    with pytest.raises(TraceSyntaxError) as exc:
        parse_poly_text("1 +", (O,))
    assert str(exc.value).endswith(
        "expected a number or a parameter or '(', found end of input")


# ------------- Grammar corners -------------

def test_arrow_is_right_associative():
    raw = parse_trace("YES\nSignature: [ f : a -> b -> c ]\nRules: [ ]\n",
                      allow_missing_interpretation=True)
    a, b, c = BaseType("a"), BaseType("b"), BaseType("c")
    assert raw.decls == (("f", Arrow(a, Arrow(b, c))),)


def test_parenthesized_domain():
    raw = parse_trace("YES\nSignature: [ f : (a -> a) -> a ]\nRules: [ ]\n",
                      allow_missing_interpretation=True)
    a = BaseType("a")
    assert raw.decls == (("f", Arrow(Arrow(a, a), a)),)


def test_application_is_left_associative():
    afs, interp = elab(
        "YES\nSignature: [ f : o -> o -> o ]\nRules: [ f X Y => f Y X ]\n",
        allow_missing=True)
    assert interp is None
    (rule,) = afs.rules
    assert rule.vars == (O, O)
    assert rule.lhs == App(App(Symbol("f"), Var(0)), Var(1))
    assert rule.rhs == App(App(Symbol("f"), Var(1)), Var(0))


def test_lambda_binds_innermost():
    text = ("YES\nSignature: [ g : (o -> o) -> o ; h : o -> o ]\n"
            "Rules: [ g (\\z. h z) => h X ]\n")
    afs, _ = elab(text, allow_missing=True)
    (rule,) = afs.rules
    assert rule.vars == (O,)
    assert rule.lhs == App(Symbol("g"), Lam(O, App(Symbol("h"), Var(0))))
    assert rule.rhs == App(Symbol("h"), Var(0))


def test_empty_rules_section():
    afs, _ = elab("YES\nSignature: [ f : o ]\nRules: [ ]\n", allow_missing=True)
    assert afs.rules == ()


def test_trailing_semicolons_tolerated(map_text, map_system):
    text = (map_text
            .replace("nil : list\n", "nil : list ;\n")
            .replace("map (cons X Y) G => cons (G X) (map Y G)\n",
                     "map (cons X Y) G => cons (G X) (map Y G) ;\n")
            .replace("J(nil)  = 3\n", "J(nil)  = 3 ;\n"))
    assert elab(text) == map_system


def test_poly_precedence_and_parens():
    ctx = (O,)
    two_y = p_mul(const_poly(2), var_poly(0))
    assert parse_poly_text("1 + 2*y0", ctx) == p_add(const_poly(1), two_y)
    assert parse_poly_text("2*(1 + y0)", ctx) == p_add(const_poly(2), two_y)
    sq = parse_poly_text("(1 + y0)*(1 + y0)", ctx)
    assert sq == parse_poly_text("1 + 2*y0 + y0*y0", ctx)


def test_multi_argument_call_round_trips():
    ctx = (O, Arrow(O, Arrow(O, O)))
    p = parse_poly_text("G0(y0, 1)", ctx)
    (m,) = p.monomials
    assert m.atoms[0].args == (var_poly(0), const_poly(1))
    rendered = render_poly(p, VarNamer(ctx))
    assert rendered == "G0(y0,1)"
    assert parse_poly_text(rendered, ctx) == p


# ------------- Elaboration of the map trace -------------

def test_map_signature(map_system):
    afs, _ = map_system
    assert [n for n, _ in afs.signature.symbols] == ["cons", "map", "nil"]
    assert afs.signature.base_types == ("a", "list")


def test_map_rules(map_system):
    afs, _ = map_system
    a, lst = BaseType("a"), BaseType("list")
    aa = Arrow(a, a)
    r0, r1 = afs.rules
    assert r0.vars == (aa,)
    assert r0.target == lst
    assert r0.lhs == App(App(Symbol("map"), Symbol("nil")), Var(0))
    assert r0.rhs == Symbol("nil")
    assert r1.vars == (a, lst, aa)
    assert r1.lhs == App(App(Symbol("map"),
                             App(App(Symbol("cons"), Var(0)), Var(1))), Var(2))


def test_map_entries_keep_file_order_and_scope(map_system):
    _, interp = map_system
    assert [n for n, _ in interp.entries] == ["cons", "map", "nil"]
    a, lst = BaseType("a"), BaseType("list")
    # Binders are de Bruijn, innermost last in the Lam[...] list: y1 is
    # PVar(0) inside J(cons).
    expected_cons = PLam(a, PLam(lst, FromBase(
        Plus(Const(3), Mult(Const(2), FromPoly(PVar(0)))))))
    assert interp.poly_of("cons") == expected_cons
    assert interp.poly_of("nil") == FromBase(Const(3))


# ------------- Elaboration errors -------------

def test_unknown_symbol_in_interpretation(map_text):
    text = map_text.replace("J(nil)  = 3", "J(bogus) = 3")
    with pytest.raises(UnknownSymbolInInterpretation) as exc:
        elab(text)
    assert exc.value.symbol == "bogus"
    assert "undeclared symbol" in str(exc.value)


def test_duplicate_interpretation(map_text):
    text = map_text.replace("J(nil)  = 3", "J(nil)  = 3 ;\n  J(nil) = 4")
    with pytest.raises(DuplicateInterpretation) as exc:
        elab(text)
    assert exc.value.symbol == "nil"


def test_missing_interpretation(map_text):
    text = map_text.replace("J(nil)  = 3\n", "")
    with pytest.raises(MissingInterpretation) as exc:
        elab(text)
    assert exc.value.symbols == ("nil",)
    assert str(exc.value) == "no interpretation for symbol(s): nil"


def test_interpretation_arity_mismatch(map_text):
    text = map_text.replace("J(nil)  = 3", "J(nil)  = Lam[y0].3")
    with pytest.raises(ArityMismatch) as exc:
        elab(text)
    e = exc.value
    assert (e.symbol, e.expected, e.got) == ("nil", 0, 1)
    assert str(e) == "J(nil) declares 1 parameter(s), its type takes 0"


def test_repeated_parameter_name(map_text):
    text = map_text.replace("Lam[y0;y1].3 + 2*y1", "Lam[y0;y0].3 + 2*y0")
    with pytest.raises(ElaborationError, match="repeats a parameter name"):
        elab(text)


def test_unknown_parameter_in_body(map_text):
    text = map_text.replace("J(nil)  = 3", "J(nil)  = z")
    with pytest.raises(ElaborationError, match="unknown parameter z"):
        elab(text)


def test_function_parameter_used_as_base(map_text):
    text = map_text.replace("Lam[y0;G1].3*y0 + 3*y0 * G1(y0)", "Lam[y0;G1].3*G1")
    with pytest.raises(ElaborationError, match=r"J\(map\)"):
        elab(text)


def test_duplicate_signature_declaration():
    text = ("YES\nSignature: [ f : o ; f : o -> o ]\nRules: [ ]\n")
    with pytest.raises(ElaborationError, match="f"):
        elab(text, allow_missing=True)


def test_underdetermined_variable_type():
    text = ("YES\nSignature: [ f : o -> o ]\nRules: [ X => X ]\n"
            "Interpretation: [ J(f) = Lam[y0].y0 ]\n")
    with pytest.raises(UnificationFailure) as exc:
        elab(text)
    e = exc.value
    assert (e.rule, e.variable) == (0, "X")
    assert str(e) == "rule 0: cannot infer types at variable X: type is not fully determined"


def test_rule_sides_must_unify():
    text = ("YES\nSignature: [ f : o -> o ; g : b -> b ]\n"
            "Rules: [ f X => g Y ]\n")
    with pytest.raises(UnificationFailure, match="rule sides disagree"):
        elab(text, allow_missing=True)


def test_application_clash_blames_the_head():
    text = "YES\nSignature: [ f : o -> o ]\nRules: [ f f => f f ]\n"
    with pytest.raises(UnificationFailure) as exc:
        elab(text, allow_missing=True)
    assert exc.value.rule == 0


# ------------- Rendering -------------

def test_render_rule_golden(map_system):
    afs, _ = map_system
    taken = {n for n, _ in afs.signature.symbols}
    assert render_rule(afs.rules[0], taken) == "map nil X0 => nil"
    assert render_rule(afs.rules[1], taken) == \
        "map (cons X0 X1) X2 => cons (X2 X0) (map X1 X2)"


def test_render_term_lambda():
    # Var(1) reaches past the inner binder to x0.
    t = Lam(O, Lam(O, App(Var(1), Var(0))))
    assert render_term(t, (), set()) == "\\x0. \\x1. x0 x1"


def test_render_entry_goldens(map_system):
    afs, interp = map_system
    sig = afs.signature
    assert render_entry(interp.poly_of("nil"), sig.type_of("nil")) == "3"
    assert render_entry(interp.poly_of("cons"), sig.type_of("cons")) == \
        "Lam[y0;y1].3 + 2*y1"
    assert render_entry(interp.poly_of("map"), sig.type_of("map")) == \
        "Lam[y0;G1].3*y0 + 3*y0*G1(y0)"


def test_render_entry_falls_back_to_canonical_form():
    # A beta redex is outside the grammar's image; the renderer prints
    # the normalized polynomial, which denotes the same function.
    redex = PLam(O, FromBase(FromPoly(PApp(PLam(O, PVar(0)), PVar(0)))))
    assert render_entry(redex, Arrow(O, O)) == "Lam[y0].y0"


def test_render_poly_inverts_parse_on_random_polys():
    rng = random.Random(31)
    for _ in range(100):
        ctx = gen_ctx(rng)
        p = gen_poly(rng, ctx)
        rendered = render_poly(p, VarNamer(ctx))
        assert parse_poly_text(rendered, ctx) == p


# ------------- Round trips -------------

def test_map_round_trip_is_identity(map_text, map_system):
    afs, interp = map_system
    rendered = render_trace(afs, interp)
    assert elab(rendered) == (afs, interp)
    afs2, interp2 = elab(rendered)
    assert render_trace(afs2, interp2) == rendered


def test_entry_order_stabilizes_after_one_render(map_text):
    # File order is preserved by elaboration; rendering always emits
    # signature order, after which the round trip is the identity.
    perm = map_text.replace(
        "J(cons) = Lam[y0;y1].3 + 2*y1;\n", "").replace(
        "J(nil)  = 3",
        "J(nil)  = 3;\n  J(cons) = Lam[y0;y1].3 + 2*y1")
    afs, interp = elab(perm)
    assert [n for n, _ in interp.entries] == ["map", "nil", "cons"]
    rendered = render_trace(afs, interp)
    afs2, interp2 = elab(rendered)
    assert [n for n, _ in interp2.entries] == ["cons", "map", "nil"]
    assert render_trace(afs2, interp2) == rendered


def test_random_systems_round_trip():
    rng = random.Random(47)
    for _ in range(60):
        afs, interp = gen_afs_interp(rng)
        rendered = render_trace(afs, interp)
        assert elab(rendered) == (afs, interp)
