import pytest

from dnelim.kernel import Const, parse_formula
from dnelim.proofs import (
    CD, Axiom, Assumption, CDLine, CDProof, Hyp, ListingError, MP, MPProof,
    check_cd_proof, check_mp_proof, dn_report, dumps, instance, loads, mp,
    parse_proof_listing,
)
from dnelim.rule import CDError, condensed_detach, detach
from dnelim.systems import AxiomSystem, get_system, named
from dnelim.transform import pushback

P = parse_formula
L = get_system("L")
H = get_system("H")

D1_LISTING = """
31 [L1,L3] i(i(i(n(x),y),z),i(x,z))
54 [31,L2] i(x,x)
"""


# -- the rule -------------------------------------------------------------------

def test_detach_examples():
    line31 = condensed_detach(named("L1"), named("L3"))
    assert line31 == P("i(i(i(n(x),y),z),i(x,z))")
    assert condensed_detach(line31, named("L2")) == P("i(x,x)")


def test_detach_failure():
    # antecedent i(n(x),x) cannot absorb L1's n-versus-i head
    assert detach(named("L2"), named("L1")) is None
    with pytest.raises(CDError):
        condensed_detach(named("L2"), named("L1"))
    with pytest.raises(CDError):
        condensed_detach(P("n(x)"), P("x"))


def test_detach_renames_minor_apart():
    # without renaming, x would have to unify with i(x,x)
    assert detach(P("i(x,x)"), P("i(x,x)")) == P("i(x,x)")


# -- checking condensed-detachment proofs -------------------------------------------

def test_d1_listing_checks():
    p = parse_proof_listing(D1_LISTING, L)
    assert check_cd_proof(p)
    assert p.conclusion == P("i(x,x)")
    assert [ln.id for ln in p.lines] == [31, 54]


def test_tampered_line_is_reported():
    p = parse_proof_listing(D1_LISTING.replace("54 [31,L2] i(x,x)", "54 [31,L2] i(x,y)"), L)
    v = check_cd_proof(p)
    assert not v and v.line == 54
    assert v.expected == P("i(x,x)")


def test_variants_are_accepted():
    p = parse_proof_listing(D1_LISTING.replace("i(x,x)", "i(z,z)"), L)
    assert check_cd_proof(p)


def test_axiom_and_assumption_lines():
    a = P("a", constants=["a"])
    lines = (CDLine(1, Axiom("H1"), named("H1")), CDLine(2, Assumption(0), a),
             CDLine(3, CD(1, 2), P("i(x,a)", constants=["a"])))
    assert check_cd_proof(CDProof(H, lines, (a,)))
    bad = lines[:1] + (CDLine(2, Assumption(0), P("b", constants=["b"])),) + lines[2:]
    assert not check_cd_proof(CDProof(H, bad, (a,)))


def test_ids_must_increase():
    lines = (CDLine(2, Axiom("L1"), named("L1")), CDLine(1, Axiom("L2"), named("L2")))
    assert not check_cd_proof(CDProof(L, lines))


def test_listing_errors():
    with pytest.raises(ListingError, match="duplicate"):
        parse_proof_listing("1 [L1,L3] i(i(i(n(x),y),z),i(x,z))\n1 [1,L2] i(x,x)", L)
    with pytest.raises(ListingError, match="unknown reference"):
        parse_proof_listing("1 [L9,L3] i(x,x)", L)
    with pytest.raises(ListingError):
        parse_proof_listing("1 [L1,L3] i(x,x", L)
    with pytest.raises(ListingError):
        parse_proof_listing("this is not a listing", L)


def test_listing_premiss_order_is_normalized():
    p = parse_proof_listing("31 [L3,L1] i(i(i(n(x),y),z),i(x,z))", L)
    assert p.lines[0].justification == CD("L1", "L3")
    q = parse_proof_listing("31 [L3,L1] i(i(i(n(x),y),z),i(x,z))", L, orient=False)
    assert not check_cd_proof(q)


# -- modus ponens proofs --------------------------------------------------------------

def test_mp_deduction_base_case():
    consts = ["a", "b"]
    a, b = P("a", consts), P("b", consts)
    leaf = instance(H, "H1", {"x": a, "y": b})
    assert leaf.formula == P("i(a,i(b,a))", consts)
    p = MPProof(H, mp(leaf, Hyp(a)), (a,))
    assert check_mp_proof(p)
    assert p.conclusion == P("i(b,a)", consts)


def test_mp_checker_rejects_mismatch():
    a = P("a", constants=["a"])
    leaf = instance(H, "H1", {"x": a, "y": a})
    bogus = MP(leaf, Hyp(P("i(a,a)", constants=["a"])), a)
    assert not check_mp_proof(MPProof(H, bogus, (a, P("i(a,a)", constants=["a"]))))
    wrong = type(leaf)("H1", leaf.subst, P("i(a,a)", constants=["a"]))
    v = check_mp_proof(MPProof(H, wrong))
    assert not v and "instance" in v.reason
    with pytest.raises(ValueError):
        mp(leaf, Hyp(P("b", constants=["b"])))


def test_mp_checker_is_exact():
    leaf = instance(H, "H1", {})
    renamed = type(leaf)("H1", leaf.subst, P("i(u,i(v,u))"))
    assert not check_mp_proof(MPProof(H, renamed))


def test_tree_size_counts_shared_nodes_once_per_use():
    p = pushback(parse_proof_listing(D1_LISTING, L))
    assert p.node_count() >= p.dag_size()


# -- double-negation reports ----------------------------------------------------------

def test_dn_report_footnote_allowance():
    sys = AxiomSystem("T", (("T1", P("i(i(y,y),n(n(i(x,x))))")), ("T2", P("i(z,z)"))))
    p = CDProof(sys, (CDLine(1, CD("T1", "T2"), P("n(n(i(x,x)))")),))
    assert check_cd_proof(p)
    assert dn_report(p).aggregate == (P("n(n(i(x,x)))"),)
    assert dn_report(p, allowed=[P("n(n(i(u,u)))")]).ok
    assert not dn_report(p, allowed=[P("n(n(i(u,v)))")]).ok


def test_dn_report_ignores_axiom_lines():
    p = CDProof(get_system("frege"), (CDLine(1, Axiom("F2"), named("F2")),))
    assert dn_report(p).dn_free
    assert not dn_report(p, include_leaves=True).dn_free


# -- serialization -----------------------------------------------------------------

def test_roundtrip_cd_and_mp():
    p = parse_proof_listing(D1_LISTING, L)
    q = loads(dumps(p))
    assert dumps(q) == dumps(p)
    assert bool(check_cd_proof(q)) and dn_report(q).summary() == dn_report(p).summary()
    t = pushback(p)
    u = loads(dumps(t))
    assert dumps(u) == dumps(t)
    assert check_mp_proof(u) and u.conclusion == t.conclusion


def test_roundtrip_keeps_constants():
    a = P("a", constants=["a"])
    p = CDProof(H, (CDLine(1, Assumption(0), a),), (a,))
    q = loads(dumps(p))
    assert q.assumptions == (Const("a"),) and check_cd_proof(q)
