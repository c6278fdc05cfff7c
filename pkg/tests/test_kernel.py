import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dnelim.kernel import (
    Const, FormulaSyntaxError, Impl, Neg, Substitution, Var, dn_occurrences,
    erase_double_negations, freeze, has_double_negation, is_alphabetic_variant,
    letter_count, match_instance, normalize_variables, parse_formula, rename_apart,
    substitute, thaw, unify, variables, variant_key,
)
from dnelim.systems import named

from strategies import formulas, substitutions

P = parse_formula


# -- an independent textbook unifier, used as the oracle -----------------------

def _tuple(f):
    if isinstance(f, Var):
        return ("var", f.name)
    if isinstance(f, Neg):
        return ("n", _tuple(f.arg))
    return ("i", _tuple(f.ante), _tuple(f.cons))


def _apply(t, s):
    if t[0] == "var":
        return _apply(s[t[1]], s) if t[1] in s else t
    return (t[0],) + tuple(_apply(c, s) for c in t[1:])


def _occurs(name, t):
    if t[0] == "var":
        return t[1] == name
    return any(_occurs(name, c) for c in t[1:])


def robinson(a, b):
    s = {}
    work = [(a, b)]
    while work:
        x, y = work.pop()
        x, y = _apply(x, s), _apply(y, s)
        if x == y:
            continue
        if x[0] != "var" and y[0] == "var":
            x, y = y, x
        if x[0] == "var":
            if _occurs(x[1], y):
                return None
            s[x[1]] = y
            continue
        if x[0] != y[0]:
            return None
        work.extend(zip(x[1:], y[1:]))
    return {k: _apply(v, s) for k, v in s.items()}


# -- parsing and printing ------------------------------------------------------

def test_parse_example():
    assert P("i(x,i(n(x),y))") == Impl(Var("x"), Impl(Neg(Var("x")), Var("y")))


def test_parse_atom_and_whitespace():
    assert P("x") == Var("x")
    assert P(" i( x , n (y) ) ") == Impl(Var("x"), Neg(Var("y")))


@pytest.mark.parametrize("text", ["i(x,y", "i(x,y))", "n()", "i(x)", "", "i(x,,y)", "1x"])
def test_parse_errors(text):
    with pytest.raises(FormulaSyntaxError):
        P(text)


def test_unbalanced_message_mentions_parentheses():
    with pytest.raises(FormulaSyntaxError, match="parenthes"):
        P("i(x,y")


def test_constants_are_declared():
    f = P("i(a,x)", constants=["a"])
    assert f.ante == Const("a") and f.cons == Var("x")
    assert variables(f) == ["x"]


@given(formulas())
def test_print_parse_roundtrip(f):
    assert P(str(f)) == f


def test_deep_formula_parses_without_recursion_limit():
    text = "n(" * 5000 + "x" + ")" * 5000
    f = P(text)
    assert letter_count(f) == 5001
    assert str(f) == text


def test_letter_counts():
    assert letter_count(named("M")) == 21
    assert letter_count(P("x")) == 1
    assert letter_count(P("i(x,x)")) == 3


@given(formulas(), formulas())
def test_letter_count_is_additive(a, b):
    assert letter_count(Impl(a, b)) == letter_count(a) + letter_count(b) + 1


def test_freeze_thaw():
    f = P("i(x,n(y))")
    g = freeze(f, ["x"])
    assert g == Impl(Const("x"), Neg(Var("y")))
    assert thaw(g) == f


def test_formulas_are_immutable():
    with pytest.raises(AttributeError):
        P("x").name = "y"


# -- unification and matching ----------------------------------------------------

def test_unify_example():
    s = unify(P("i(x,y)"), P("i(u,i(n(u),v))"))
    oracle = robinson(_tuple(P("i(x,y)")), _tuple(P("i(u,i(n(u),v))")))
    assert oracle == {"x": ("var", "u"), "y": ("i", ("n", ("var", "u")), ("var", "v"))}
    assert dict(s) == {"x": Var("u"), "y": P("i(n(u),v)")}


def test_unify_identical_is_empty():
    assert dict(unify(P("x"), P("x"))) == {}


def test_unify_clash_and_occurs_check():
    assert unify(P("n(x)"), P("i(y,z)")) is None
    assert unify(P("x"), P("n(x)")) is None


@settings(max_examples=1000)
@given(formulas(max_leaves=8), formulas(max_leaves=8))
def test_unifier_soundness_and_idempotence(a, b):
    s = unify(a, b)
    oracle = robinson(_tuple(a), _tuple(b))
    assert (s is None) == (oracle is None)
    if s is not None:
        assert s.apply(a) == s.apply(b)
        assert s.is_idempotent()
        assert s.apply(s.apply(a)) == s.apply(a)
        for name in s:
            assert all(name not in variables(t) for t in s.values())


@settings(max_examples=300)
@given(formulas(max_leaves=8), substitutions())
def test_unifier_is_most_general(pattern, sigma0):
    target = rename_apart(pattern, substitute(pattern, sigma0))
    s = unify(pattern, target)
    assert s is not None
    assert match_instance(s.apply(pattern), target) is not None


def test_match_examples():
    consts = ["a", "b"]
    s = match_instance(P("i(x,i(y,x))"), P("i(a,i(b,a))", consts))
    assert dict(s) == {"x": Const("a"), "y": Const("b")}
    assert match_instance(P("i(x,x)"), P("i(a,b)", consts)) is None
    assert dict(match_instance(P("x"), P("n(n(a))", consts))) == {"x": P("n(n(a))", consts)}


@given(formulas(), substitutions())
def test_match_finds_the_instance(p, sigma):
    t = substitute(p, sigma)
    s = match_instance(p, t)
    assert s is not None and s.apply(p) == t
    assert set(s) <= set(variables(p))


def test_substitution_compose_is_sequential():
    s = Substitution({"x": P("y")})
    t = Substitution({"y": P("n(z)")})
    assert s.compose(t).apply(P("i(x,y)")) == t.apply(s.apply(P("i(x,y)")))


# -- renaming and variants ---------------------------------------------------------

def test_rename_apart_examples():
    r = rename_apart(P("i(x,y)"), P("i(x,z)"))
    assert not set(variables(r)) & {"x", "y"}
    assert is_alphabetic_variant(r, P("i(x,z)"))
    keep = P("a", constants=["a"])
    assert rename_apart(keep, P("i(x,x)")) == P("i(x,x)")
    c = P("i(a,b)", constants=["a", "b"])
    assert rename_apart(P("x"), c) is c


def test_rename_apart_is_deterministic():
    assert rename_apart(P("i(x,y)"), P("i(x,z)")) == rename_apart(P("i(x,y)"), P("i(x,z)"))


def test_variant_examples():
    assert is_alphabetic_variant(P("i(x,x)"), P("i(y,y)"))
    assert not is_alphabetic_variant(P("n(n(i(x,y)))"), P("n(n(i(z,z)))"))
    assert is_alphabetic_variant(P("i(x,y)"), P("i(y,x)"))


@given(formulas(), formulas(), formulas())
def test_variant_is_an_equivalence(a, b, c):
    assert is_alphabetic_variant(a, a)
    assert is_alphabetic_variant(a, b) == is_alphabetic_variant(b, a)
    if is_alphabetic_variant(a, b) and is_alphabetic_variant(b, c):
        assert is_alphabetic_variant(a, c)


@given(formulas(), st.permutations(["x", "y", "z", "u", "v", "w"]))
def test_bijective_renaming_gives_variant(f, perm):
    ren = dict(zip(["x", "y", "z", "u", "v", "w"], map(Var, perm)))
    g = substitute(f, ren)
    assert is_alphabetic_variant(f, g)
    assert variant_key(f) == variant_key(g)
    assert normalize_variables(f) == normalize_variables(g)


# -- double negations ----------------------------------------------------------------

def test_dn_occurrence_examples():
    occ = dn_occurrences(P("i(n(n(x)),x)"))
    assert [(o.subformula, o.positions) for o in occ] == [(P("x"), ((0,),))]
    assert dn_occurrences(P("i(i(n(x),x),x)")) == []
    occ = dn_occurrences(P("n(n(n(x)))"))
    assert [(o.subformula, o.positions) for o in occ] == [(P("n(x)"), ((),)), (P("x"), ((0,),))]


def _at(f, path):
    for k in path:
        f = f.arg if isinstance(f, Neg) else (f.ante if k == 0 else f.cons)
    return f


@given(formulas())
def test_dn_positions_point_at_double_negations(f):
    occ = dn_occurrences(f)
    assert (occ == []) == (not has_double_negation(f))
    for o in occ:
        for path in o.positions:
            assert _at(f, path) == Neg(Neg(o.subformula))


def test_erase_examples():
    assert erase_double_negations(P("n(n(x))"), [P("x")]) == P("x")
    f = P("i(i(n(y),n(n(y))),n(n(y)))")
    assert erase_double_negations(f, [P("y")]) == P("i(i(n(y),y),y)")
    g = P("i(n(n(p)),n(n(q)))")
    assert erase_double_negations(g, [P("p")]) == P("i(p,n(n(q)))")
    assert erase_double_negations(P("n(n(n(n(x))))"), [P("x")]) == P("x")


def test_erase_rejects_absent_selection():
    with pytest.raises(ValueError):
        erase_double_negations(P("i(x,y)"), [P("x")])


@given(formulas(names=("x", "y")))
def test_erase_removes_selected(f):
    occ = dn_occurrences(f)
    if not occ:
        return
    q = occ[0].subformula
    out = erase_double_negations(f, [q])
    assert all(o.subformula != q for o in dn_occurrences(out))
