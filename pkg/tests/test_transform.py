import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dnelim import corpus
from dnelim.derive import prove_identity
from dnelim.kernel import (
    Impl, Neg, Substitution, dn_occurrences, has_double_negation, is_alphabetic_variant,
    match_instance, parse_formula, subformulas, variables, variant_key,
)
from dnelim.proofs import (
    CD, Axiom, CDLine, CDProof, Instance, MP, MPProof, _postorder_unique,
    check_cd_proof, check_mp_proof, dn_report, parse_proof_listing,
)
from dnelim.systems import get_system, named
from dnelim.transform import (
    Selection, StarKit, dn_eliminate, erase_in_mp, lift_proof, pushback, star_closure,
    star_system, substitute_mp,
)

from generated import dn_step_proofs
from strategies import formulas

P = parse_formula
L = get_system("L")
STAR_L = corpus.star_kit("L")
KIT_L = corpus.dkit("L")


def _keys(fs):
    return {variant_key(f) for f in fs}


def _nodes(tree):
    return list(_postorder_unique(tree.root))


# -- star closure ----------------------------------------------------------------

def test_star_closure_of_l():
    added = star_closure(L)[3:]
    assert _keys(added) == _keys([named("L4"), named("L5")])
    assert _keys(added) == _keys([P("i(i(x,n(x)),n(x))"), P("i(n(x),i(x,y))")])


def test_star_closure_of_single_axiom():
    added = star_closure([named("A4")])[1:]
    assert _keys(added) == _keys([named("A6"), named("A7"), named("A8")])


def test_star_closure_without_negated_variables():
    assert star_closure([named("L1")]) == [named("L1")]


def test_star_closure_is_a_fixed_point():
    for name in ("L", "A", "H", "frege"):
        closed = star_closure(get_system(name))
        assert _keys(star_closure(closed)) == _keys(closed)


def test_star_axioms_are_sound():
    from dnelim.semantics import is_two_valued_tautology
    for name in ("L", "A", "frege"):
        assert all(is_two_valued_tautology(f) for f in star_closure(get_system(name)))


@pytest.mark.parametrize("system", ["L", "A"])
def test_star_kits_validate(system):
    kit = corpus.star_kit(system)
    assert kit.validate() == []
    assert _keys(f for _, f in kit.star_axioms) == _keys(star_closure(kit.base)[len(kit.base.axioms):])


def test_star_kit_reports_missing_proof():
    with pytest.raises(ValueError, match="no proof"):
        StarKit.build(L, {"L4": corpus.base_proof("l_l4")})


# -- pushback ----------------------------------------------------------------------

def test_pushback_d1():
    p = parse_proof_listing("31 [L1,L3] i(i(i(n(x),y),z),i(x,z))\n54 [31,L2] i(x,x)", L)
    t = pushback(p)
    assert check_mp_proof(t)
    root = t.root
    assert isinstance(root, MP) and isinstance(root.major, MP)
    l1, l3, l2 = root.major.major, root.major.minor, root.minor
    assert (l1.label, l3.label, l2.label) == ("L1", "L3", "L2")
    # worked by hand: the second step binds x, y, z of line 31 all to u
    assert is_alphabetic_variant(l1.formula, P("i(i(u,i(n(u),u)),i(i(i(n(u),u),u),i(u,u)))"))
    assert is_alphabetic_variant(l3.formula, P("i(u,i(n(u),u))"))
    assert is_alphabetic_variant(l2.formula, named("L2"))
    assert is_alphabetic_variant(t.conclusion, P("i(x,x)"))


def test_pushback_of_axiom_alone():
    p = CDProof(L, (CDLine(1, Axiom("L2"), named("L2")),))
    t = pushback(p)
    assert isinstance(t.root, Instance) and t.root.label == "L2"
    assert t.root.formula == named("L2")
    assert all(k == v.name for k, v in t.root.subst.items() if hasattr(v, "name"))


@pytest.mark.parametrize("entry_id", ["l_d1", "l_d3", "l_d4", "l_d5", "l_l4", "l_l5",
                                      "l_d2_ulrich", "h_d2", "a_a7", "ulrich"])
def test_pushback_preserves_conclusion(entry_id):
    p = corpus.proof(entry_id)
    t = pushback(p)
    assert check_mp_proof(t)
    assert t.system is p.system or t.system.axioms == p.system.axioms
    assert is_alphabetic_variant(t.conclusion, p.conclusion)
    assert t.node_count() >= t.dag_size()


def test_tree_blowup_is_strict_with_shared_lines():
    p = parse_proof_listing("1 [L1,L1] i(i(i(i(x,y),i(z,y)),u),i(i(z,x),u))\n"
                            "2 [1,1] i(i(x,i(y,z)),i(i(u,y),i(x,i(u,z))))", L, orient=False)
    assert check_cd_proof(p)
    t = pushback(p)
    assert check_mp_proof(t)
    assert t.node_count() > len(p.lines)
    q = corpus.proof("l_d3")
    refs = [r for ln in q.lines if isinstance(ln.justification, CD)
            for r in (ln.justification.major, ln.justification.minor) if isinstance(r, int)]
    assert len(refs) > len(set(refs))
    assert pushback(q).node_count() > len(q.lines)


# -- erasure -------------------------------------------------------------------------

def test_erase_leaf_example():
    # x := n(n(y)) in L2; erasing n(n(y)) leaves the plain L2 instance with x := y
    inst = P("i(i(n(n(n(y))),n(n(y))),n(n(y)))")
    leaf = Instance("L2", match_instance(named("L2"), inst), inst)
    out = erase_in_mp(MPProof(L, leaf), [P("y")])
    assert out.root.formula == P("i(i(n(y),y),y)")
    assert out.root.label == "L2"
    assert match_instance(out.system[out.root.label], out.root.formula) is not None
    assert check_mp_proof(out)


def test_erase_empty_selection_is_identity():
    t = pushback(corpus.proof("l_d1"))
    assert erase_in_mp(t, []) is t


def test_erase_internal_node():
    p, sel = _identity_with("n(n(a))", ["a"])
    t = pushback(p)
    assert any(has_double_negation(n.formula) for n in _nodes(t))
    out = erase_in_mp(t, sel)
    assert check_mp_proof(out)
    assert not any(o.subformula == sel[0] for n in _nodes(out) for o in dn_occurrences(n.formula))
    assert is_alphabetic_variant(out.conclusion, P("i(a,a)"))


_SOURCES = ["l_d1", "l_d2_ulrich", "l_d4", "l_d5", "l_l4", "l_l5"]


@st.composite
def _erasure_case(draw):
    p = corpus.base_proof(draw(st.sampled_from(_SOURCES)))
    tree = pushback(p)
    names = sorted({v for n in _nodes(tree) for v in variables(n.formula)} or {"x"})[:4]
    sigma = Substitution({n: draw(formulas(names=("u", "v"), max_leaves=3)) for n in names
                          if draw(st.booleans())})
    tree = substitute_mp(tree, sigma)
    dns = sorted({o.subformula for n in _nodes(tree) for o in dn_occurrences(n.formula)}, key=str)
    chosen = draw(st.lists(st.sampled_from(dns), unique=True, max_size=3)) if dns else []
    return tree, chosen


@settings(max_examples=200, deadline=None)
@given(_erasure_case())
def test_erasure_preserves_validity(case):
    tree, chosen = case
    assert check_mp_proof(tree)
    out = erase_in_mp(tree, chosen)
    assert check_mp_proof(out)
    star = _keys(star_closure(tree.system))
    for n in _nodes(out):
        assert not any(o.subformula in chosen for o in dn_occurrences(n.formula))
        if isinstance(n, Instance):
            assert variant_key(out.system[n.label]) in star


# -- the whole construction --------------------------------------------------------

def _identity_with(alpha_text, chosen_texts):
    """A proof of i(α,α) and the selection renamed to match its variables."""
    alpha = P(alpha_text)
    p = prove_identity(alpha, KIT_L)
    s = match_instance(Impl(alpha, alpha), p.conclusion)
    return p, [s.apply(P(c)) for c in chosen_texts]


def _dn_budget(b_star):
    return [Neg(Neg(o.subformula)) for o in dn_occurrences(b_star)]


def test_eliminate_selected_double_negation():
    p, sel = _identity_with("n(n(a))", ["a"])
    assert is_alphabetic_variant(p.conclusion, P("i(n(n(a)),n(n(a)))"))
    q = dn_eliminate(p, sel, STAR_L, KIT_L)
    assert check_cd_proof(q) and q.system.axioms == L.axioms
    assert is_alphabetic_variant(q.conclusion, P("i(a,a)"))
    assert dn_report(q).dn_free


def test_eliminate_keeps_unselected():
    p, sel = _identity_with("i(n(n(a)),n(n(b)))", ["a"])
    q = dn_eliminate(p, sel, STAR_L, KIT_L)
    b_star = P("i(i(a,n(n(b))),i(a,n(n(b))))")
    assert check_cd_proof(q) and is_alphabetic_variant(q.conclusion, b_star)
    assert dn_report(q, allowed=_dn_budget(b_star)).ok


def test_eliminate_rejects_bad_selection():
    with pytest.raises(ValueError, match="not doubly negated"):
        dn_eliminate(corpus.base_proof("l_d1"), [P("x")], STAR_L, KIT_L)
    with pytest.raises(ValueError, match="kit"):
        dn_eliminate(corpus.base_proof("h_d1"), [], STAR_L, KIT_L)


def test_eliminate_on_dn_free_proof_stays_free():
    p = corpus.base_proof("l_l5")
    assert dn_report(p).dn_free
    q = dn_eliminate(p, [], STAR_L, KIT_L)
    assert check_cd_proof(q) and dn_report(q).dn_free
    assert is_alphabetic_variant(q.conclusion, p.conclusion)


def test_eliminate_removes_intermediate_double_negations():
    proofs = dn_step_proofs()
    assert proofs
    for p in proofs[:5]:
        q = dn_eliminate(p, [], STAR_L, KIT_L)
        assert check_cd_proof(q) and dn_report(q).dn_free
        assert is_alphabetic_variant(q.conclusion, p.conclusion)


def _has_triple(f):
    return any(type(g) is Neg and type(g.arg) is Neg and type(g.arg.arg) is Neg
               for g in subformulas(f))


@pytest.mark.parametrize("alpha,chosen", [("n(n(a))", ["a"]), ("i(n(n(a)),n(b))", []),
                                          ("n(n(n(n(a))))", ["n(n(a))"])])
def test_no_triple_negations_appear(alpha, chosen):
    p, sel = _identity_with(alpha, chosen)
    q = dn_eliminate(p, sel, STAR_L, KIT_L)
    b_star = Selection(sel).apply(p.conclusion)
    assert check_cd_proof(q) and dn_report(q, allowed=_dn_budget(b_star)).ok
    if not _has_triple(b_star):
        assert not any(_has_triple(ln.formula) for ln in q.deduced)


def test_selection_validation():
    b = P("i(n(n(a)),n(n(i(a,b))))")
    Selection([P("a"), P("i(a,b)")]).validate(b)
    with pytest.raises(ValueError):
        Selection([P("b")]).validate(b)
    assert Selection([P("a")]).apply(b) == P("i(a,n(n(i(a,b))))")


# -- moving to another axiom system ---------------------------------------------------

def test_lift_proof_onto_star_system():
    star = star_system(L)
    d1 = corpus.base_proof("l_d1")
    p = CDProof(star, d1.lines, name="D1")
    lifted = lift_proof(p, L, {})
    assert lifted.system.axioms == L.axioms and check_cd_proof(lifted)


def test_lift_proof_splices_axiom_proofs():
    sys = get_system("L").extend([("L5", named("L5"))], name="L+L5")
    p = parse_proof_listing("1 [L1,L5] i(i(i(x,y),z),i(n(x),z))", sys)
    assert check_cd_proof(p)
    lifted = lift_proof(p, L, {"L5": corpus.base_proof("l_l5")})
    assert check_cd_proof(lifted) and lifted.system.axioms == L.axioms
    assert is_alphabetic_variant(lifted.conclusion, p.conclusion)
    with pytest.raises(ValueError, match="L5"):
        lift_proof(p, L, {})
