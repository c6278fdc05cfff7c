"""Condensed detachment and the constructive lemmas built on it.

* :func:`prove_identity` proves ``i(α,α)`` from D1--D3 (plus, for formulas
  with repeated variables, a handful of double-negation-free helper lemmas;
  see :class:`DKit`).
* :func:`prove_instance` proves a substitution instance of an axiom.
* :func:`mp_to_cd` turns a modus ponens proof into a condensed-detachment
  proof, and :func:`close_under_substitution` uses it to prove ``A·σ``
  from a proof of ``A``.
"""
from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field

from .kernel import (
    Formula, Impl, Neg, Substitution, Var, constants, match_instance,
    normalize_variables, parse_formula, variables, variant_key,
)
from .proofs import (
    CD, Axiom, Assumption, CDLine, CDProof, Hyp, Instance, MPProof, Ref,
    _postorder_unique,
)
from .rule import CDError, condensed_detach, detach
from .systems import AxiomSystem, named

__all__ = [
    "CDError", "condensed_detach", "DKit", "ProofBuilder", "prove_identity",
    "prove_instance", "close_under_substitution", "mp_to_cd", "splice_lemmas",
    "GADGETS",
]

# Helper lemmas used to prove i(α,α) exactly when α repeats a variable.
# Condensed detachment renames its premisses apart, so the D3 step of the
# plain construction cannot make the two sides of an implication share a
# variable; these lemmas carry a common context x through the induction
# instead.  All of them are double-negation free.
GADGETS: dict[str, Formula] = {
    "SYL": named("L1"),
    "D2H": parse_formula("i(i(x,i(y,y)),i(x,i(n(y),n(y))))"),
    "D3H": parse_formula("i(i(x,i(y,y)),i(i(x,i(z,z)),i(x,i(i(y,z),i(y,z)))))"),
    "P1": parse_formula("i(i(i(x,y),i(x,y)),i(x,x))"),
    "P2": parse_formula("i(i(i(x,y),i(x,y)),i(y,y))"),
}

KIT_LEMMAS = ("D1", "D2", "D3")


@dataclass
class DKit:
    """Double-negation-free proofs of D1--D3 (and optional helper lemmas)
    in one axiom system."""
    system: AxiomSystem
    proofs: dict[str, CDProof] = field(default_factory=dict)

    def __post_init__(self):
        for name in KIT_LEMMAS:
            if name not in self.proofs:
                raise ValueError(f"DKit for {self.system.name} lacks a proof of {name}")

    @property
    def has_gadgets(self) -> bool:
        return all(g in self.proofs for g in GADGETS)

    def lemma_formula(self, name: str) -> Formula:
        return named(name) if name in KIT_LEMMAS else GADGETS[name]


class ProofBuilder:
    """Incrementally assemble a :class:`CDProof`.

    Deduced lines are memoized by alphabetic-variant class, so repeated
    sub-constructions cost nothing; :meth:`finish` drops lines the chosen
    conclusion does not depend on and renumbers the rest 1, 2, 3, ...
    """

    def __init__(self, system: AxiomSystem, assumptions=(), kit: DKit | None = None):
        self.system = system
        self.assumptions = tuple(assumptions)
        self.kit = kit
        self.lines: list[CDLine] = []
        self._formula: dict[Ref, Formula] = {}
        self._by_key: dict[tuple, int] = {}
        self._by_pair: dict[tuple[Ref, Ref], Ref] = {}
        self._lemmas: dict[str, Ref] = {}
        self._splice_memo: dict[int, Ref] = {}
        # variable universe and per-subformula lemmas of the shared-context
        # identity construction; see _identity_shared
        self._ctx_names: list[str] = []
        self._ctx_memo: dict[Formula, Ref] = {}

    def reserve_variables(self, names) -> None:
        """Fix the variables later identity proofs may mention, so their
        shared-context lemmas can be reused across formulas."""
        new = [n for n in dict.fromkeys(names) if n not in self._ctx_names]
        if new:
            self._ctx_names.extend(new)
            self._ctx_memo.clear()

    def formula(self, ref: Ref) -> Formula:
        if isinstance(ref, str):
            return self.system[ref]
        return self._formula[ref]

    def _add(self, just, f: Formula) -> int:
        line_id = len(self.lines) + 1
        self.lines.append(CDLine(line_id, just, f))
        self._formula[line_id] = f
        return line_id

    def axiom(self, label: str) -> Ref:
        self.system[label]  # raises on unknown labels
        return label

    def assumption(self, index: int) -> Ref:
        f = self.assumptions[index]
        key = ("assumption", index)
        if key in self._by_key:
            return self._by_key[key]
        ref = self._add(Assumption(index), f)
        self._by_key[key] = ref
        return ref

    def assumption_for(self, f: Formula) -> Ref:
        try:
            return self.assumption(self.assumptions.index(f))
        except ValueError:
            raise ValueError(f"{f} is not an assumption") from None

    def cd(self, major: Ref, minor: Ref) -> Ref:
        pair = (major, minor)
        hit = self._by_pair.get(pair)
        if hit is not None:
            return hit
        out = detach(self.formula(major), self.formula(minor))
        if out is None:
            raise CDError(f"cannot detach {self.formula(minor)} from {self.formula(major)}")
        key = variant_key(out)
        ref = self._by_key.get(key)
        if ref is None:
            ref = self._add(CD(major, minor), out)
            self._by_key[key] = ref
        self._by_pair[pair] = ref
        return ref

    def known(self, f: Formula) -> Ref | None:
        """An existing line proving a variant of ``f``."""
        return self._by_key.get(variant_key(f))

    def splice(self, proof: CDProof, lemma_refs: Mapping[str, Ref] | None = None) -> Ref:
        """Replay ``proof`` inside this builder and return its conclusion.

        Axiom labels of ``proof`` that are not axioms here must be supplied
        in ``lemma_refs`` (already proved lines).
        """
        memo_key = id(proof)
        if memo_key in self._splice_memo and not lemma_refs:
            return self._splice_memo[memo_key]
        lemma_refs = dict(lemma_refs or {})
        refs: dict[int, Ref] = {}

        def mapref(r: Ref) -> Ref:
            if isinstance(r, int):
                return refs[r]
            if r in lemma_refs:
                return lemma_refs[r]
            return self.axiom(r)
        last: Ref | None = None
        for ln in proof.lines:
            j = ln.justification
            if isinstance(j, Axiom):
                r = mapref(j.label)
            elif isinstance(j, Assumption):
                r = self.assumption_for(proof.assumptions[j.index])
            else:
                r = self.cd(mapref(j.major), mapref(j.minor))
            refs[ln.id] = r
            last = r
        if last is None:
            raise ValueError("cannot splice an empty proof")
        if not lemma_refs:
            self._splice_memo[memo_key] = last
        return last

    def lemma(self, name: str) -> Ref:
        """Reference to a kit lemma, splicing its proof on first use."""
        if name not in self._lemmas:
            if self.kit is None or name not in self.kit.proofs:
                raise ValueError(f"no proof of lemma {name} available")
            self._lemmas[name] = self.splice(self.kit.proofs[name])
        return self._lemmas[name]

    def finish(self, conclusion: Ref, name: str = "") -> CDProof:
        """The proof of ``conclusion`` restricted to the lines it needs."""
        if isinstance(conclusion, str):
            # a bare axiom: a one-line proof
            return CDProof(self.system, (CDLine(1, Axiom(conclusion), self.system[conclusion]),),
                           self.assumptions, name)
        needed: set[int] = set()
        stack = [conclusion]
        while stack:
            r = stack.pop()
            if not isinstance(r, int) or r in needed:
                continue
            needed.add(r)
            j = self.lines[r - 1].justification
            if isinstance(j, CD):
                stack.extend((j.major, j.minor))
        renum: dict[int, int] = {}
        out: list[CDLine] = []
        for ln in self.lines:
            if ln.id not in needed or ln.id == conclusion:
                continue
            renum[ln.id] = len(out) + 1
            out.append(CDLine(len(out) + 1, _renumber(ln.justification, renum), ln.formula))
        last = self.lines[conclusion - 1]
        renum[conclusion] = len(out) + 1
        out.append(CDLine(len(out) + 1, _renumber(last.justification, renum), last.formula))
        return CDProof(self.system, tuple(out), self.assumptions, name)


def _renumber(j, renum: dict[int, int]):
    if isinstance(j, CD):
        return CD(renum.get(j.major, j.major) if isinstance(j.major, int) else j.major,
                  renum.get(j.minor, j.minor) if isinstance(j.minor, int) else j.minor)
    return j


# -- identities and instances ------------------------------------------------

def _is_linear(alpha: Formula) -> bool:
    names = [g.name for g in _leaves(alpha) if type(g) is Var]
    return len(names) == len(set(names))


def _leaves(f: Formula):
    stack = [f]
    while stack:
        g = stack.pop()
        if type(g) is Impl:
            stack.append(g.cons)
            stack.append(g.ante)
        elif type(g) is Neg:
            stack.append(g.arg)
        else:
            yield g


def _identity_plain(b: ProofBuilder, alpha: Formula) -> Ref:
    """D1 for letters, D2 for negations, D3 for implications.  Exact only
    when no variable is repeated in ``alpha``."""
    t = type(alpha)
    if t is Var:
        return b.lemma("D1")
    if t is Neg:
        return b.cd(b.lemma("D2"), _identity_plain(b, alpha.arg))
    if t is Impl:
        first = b.cd(b.lemma("D3"), _identity_plain(b, alpha.ante))
        return b.cd(first, _identity_plain(b, alpha.cons))
    raise ValueError(f"cannot prove i(α,α) for constant {alpha}")


def _compose(b: ProofBuilder, f: Ref, g: Ref) -> Ref:
    """From i(a,b) and i(b',c) obtain i(a,c)·mgu(b,b') by syllogism."""
    return b.cd(b.cd(b.lemma("SYL"), f), g)


def _identity_shared(b: ProofBuilder, alpha: Formula) -> Ref:
    """Exact i(α,α) for arbitrary α.

    Let v1..vk be the builder's reserved variables (those of α at least)
    and ε = i(v1,i(v2,...i(vk,d)...)) with a fresh d.  Each subformula β
    gets a proof of i(E,i(β,β)) where E = i(ε,ε) is one shared context; the
    context makes equal variables in different branches unify.  Finally the
    context is discharged with a proof of E itself, which the plain
    construction gives exactly since ε repeats no variable.  The lemmas for
    subformulas are kept in the builder, so later formulas over the same
    variables reuse them.
    """
    b.reserve_variables(variables(alpha))
    names = b._ctx_names
    index = {n: k for k, n in enumerate(names)}
    memo = b._ctx_memo

    def j_of(beta: Formula) -> Ref:
        hit = memo.get(beta)
        if hit is not None:
            return hit
        t = type(beta)
        if t is Var:
            r = _project(b, index[beta.name])
        elif t is Neg:
            r = b.cd(b.lemma("D2H"), j_of(beta.arg))
        elif t is Impl:
            r = b.cd(b.cd(b.lemma("D3H"), j_of(beta.ante)), j_of(beta.cons))
        else:
            raise ValueError(f"cannot prove i(α,α) for constant {beta}")
        memo[beta] = r
        return r

    body = j_of(alpha)
    eps: Formula = Var("d_")
    for n in reversed(names):
        eps = Impl(Var(n), eps)
    eps = normalize_variables(eps)
    return b.cd(body, _identity_plain(b, eps))


def _project(b: ProofBuilder, k: int) -> Ref:
    """i(E, i(v_k, v_k)): drop k components of ε with P2, then take the head."""
    r = b.lemma("P1")
    for _ in range(k):
        r = _compose(b, b.lemma("P2"), r)
    return r


def identity_ref(b: ProofBuilder, alpha: Formula) -> Ref:
    if constants(alpha):
        raise ValueError(
            f"i(α,α) is not derivable by condensed detachment for {alpha}: "
            "it contains constant letters")
    hit = b.known(Impl(alpha, alpha))
    if hit is not None:
        return hit
    if _is_linear(alpha):
        return _identity_plain(b, alpha)
    if b.kit is None or not b.kit.has_gadgets:
        raise ValueError(f"{alpha} repeats a variable and the kit has no helper lemmas")
    return _identity_shared(b, alpha)


def instance_ref(b: ProofBuilder, axiom: Ref, inst: Formula) -> Ref:
    """Prove ``inst``, an instance of the formula at ``axiom``."""
    if match_instance(b.formula(axiom), inst) is None:
        raise ValueError(f"{inst} is not an instance of {b.formula(axiom)}")
    if variant_key(b.formula(axiom)) == variant_key(inst):
        return axiom
    hit = b.known(inst)
    if hit is not None:
        return hit
    return b.cd(identity_ref(b, inst), axiom)


def prove_identity(alpha: Formula, kit: DKit) -> CDProof:
    """A condensed-detachment proof of ``i(α,α)`` up to alphabetic variants.

    Its doubly negated subformulas are those of ``α``.  Formulas with
    constant letters are rejected: without assumptions no line of a
    condensed-detachment proof mentions a constant.
    """
    b = ProofBuilder(kit.system, kit=kit)
    return b.finish(identity_ref(b, alpha), name=f"i({alpha},{alpha})")


def prove_instance(axiom: Formula | str, inst: Formula, kit: DKit,
                   axiom_proof: CDProof | None = None) -> CDProof:
    """Prove the substitution instance ``inst`` of ``axiom``.

    ``axiom`` is an axiom label or formula of ``kit.system``; any other
    formula needs ``axiom_proof``, a proof of it to splice in first.
    """
    b = ProofBuilder(kit.system, kit=kit)
    if axiom_proof is not None:
        ref = b.splice(axiom_proof)
    elif isinstance(axiom, str):
        ref = b.axiom(axiom)
    else:
        label = kit.system.label_of(axiom)
        if label is None:
            raise ValueError(f"{axiom} is not an axiom of {kit.system.name}")
        ref = label
    return b.finish(instance_ref(b, ref, inst), name=str(inst))


def mp_to_cd(p: MPProof, kit: DKit, axiom_proofs: Mapping[str, CDProof] | None = None,
             name: str = "") -> CDProof:
    """Turn a modus ponens proof into a condensed-detachment proof.

    Every leaf instance is proved by :func:`instance_ref`; every MP node
    becomes one CD step, which reproduces its conclusion up to variants.
    Leaves labelled with something other than an axiom of ``kit.system``
    use the proof given in ``axiom_proofs``.
    """
    axiom_proofs = dict(axiom_proofs or {})
    b = ProofBuilder(kit.system, p.assumptions, kit=kit)
    b.reserve_variables(v for node in _postorder_unique(p.root)
                        if isinstance(node, Instance) for v in variables(node.formula))
    refs: dict[int, Ref] = {}
    ax_refs: dict[str, Ref] = {}

    def axiom_ref(label: str) -> Ref:
        if label not in ax_refs:
            if label in axiom_proofs:
                ax_refs[label] = b.splice(axiom_proofs[label])
            else:
                ax_refs[label] = b.axiom(label)
        return ax_refs[label]

    for node in _postorder_unique(p.root):
        if isinstance(node, Instance):
            refs[id(node)] = instance_ref(b, axiom_ref(node.label), node.formula)
        elif isinstance(node, Hyp):
            refs[id(node)] = b.assumption_for(node.formula)
        else:
            refs[id(node)] = b.cd(refs[id(node.major)], refs[id(node.minor)])
    return b.finish(refs[id(p.root)], name=name)


def close_under_substitution(p: CDProof, sigma: Mapping[str, Formula], kit: DKit) -> CDProof:
    """From a proof of ``A`` build a proof of ``A·σ``.

    The proof is pushed back to a modus ponens tree, ``σ`` is applied to
    every node (leaf substitutions are composed with it), and the tree is
    converted back with :func:`mp_to_cd`.
    """
    from .transform import pushback, substitute_mp
    s = sigma if isinstance(sigma, Substitution) else Substitution(sigma)
    tree = substitute_mp(pushback(p), s)
    return mp_to_cd(tree, kit, name=str(tree.conclusion))


def splice_lemmas(p: CDProof, base: AxiomSystem, lemmas: Mapping[str, CDProof]) -> CDProof:
    """Inline the proofs of lemma labels cited by ``p`` to get a proof over
    ``base`` alone."""
    b = ProofBuilder(base, p.assumptions)
    refs = {label: b.splice(q) for label, q in lemmas.items()}
    return b.finish(b.splice(p, refs), name=p.name)
