"""Proof transformations behind double-negation elimination.

* :func:`pushback` turns a condensed-detachment proof into a modus ponens
  tree whose leaves are axiom instances.
* :func:`erase_in_mp` erases chosen double negations throughout such a tree;
  leaves become instances of the star-closed axiom set.
* :func:`dn_eliminate` assembles the whole construction: from a proof of
  ``B`` it builds a proof of ``B*`` whose only double negations are those of
  ``B*``.
"""
from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

from .derive import DKit, mp_to_cd, splice_lemmas
from .kernel import (
    Formula, Impl, Neg, Substitution, Var, dn_occurrences, erase_where,
    match_instance, normalize_variables, rename_apart, subformulas,
    unify_bindings, variables, variant_key,
)
from .proofs import (
    CD, Assumption, Axiom, CDProof, Hyp, Instance, MP, MPProof, Node, Ref,
    _postorder_unique, check_cd_proof, dn_report,
)
from .systems import FORMULAS, AxiomSystem

__all__ = [
    "star_closure", "StarKit", "Selection", "pushback", "substitute_mp",
    "erase_in_mp", "dn_eliminate", "lift_proof", "star_system",
]


# -- star closure ------------------------------------------------------------

def negated_variables(f: Formula) -> list[str]:
    seen: dict[str, None] = {}
    for g in subformulas(f):
        if type(g) is Neg and type(g.arg) is Var:
            seen.setdefault(g.arg.name)
    return list(seen)


def flip_variable(f: Formula, name: str) -> Formula:
    """Replace ``name`` by its negation and cancel the double negations that
    creates: ``n(x)`` becomes ``x`` and a bare ``x`` becomes ``n(x)``."""
    def go(g: Formula) -> Formula:
        t = type(g)
        if t is Var:
            return Neg(g) if g.name == name else g
        if t is Neg:
            if type(g.arg) is Var and g.arg.name == name:
                return g.arg
            return Neg(go(g.arg))
        if t is Impl:
            return Impl(go(g.ante), go(g.cons))
        return g
    return go(f)


def star_closure(system: AxiomSystem | Iterable[Formula]) -> list[Formula]:
    """The axioms together with everything reachable by flipping negated
    variables, up to alphabetic variants, originals first."""
    formulas = system.formulas if isinstance(system, AxiomSystem) else list(system)
    out: list[Formula] = []
    keys: set[tuple] = set()
    for f in formulas:
        k = variant_key(f)
        if k not in keys:
            keys.add(k)
            out.append(f)
    i = 0
    while i < len(out):
        f = out[i]
        for name in negated_variables(f):
            g = normalize_variables(flip_variable(f, name))
            k = variant_key(g)
            if k not in keys:
                keys.add(k)
                out.append(g)
        i += 1
    return out


def _star_label(f: Formula, taken: set[str], base: str) -> str:
    for label, g in FORMULAS.items():
        if label not in taken and variant_key(g) == variant_key(f):
            return label
    k = 1
    while f"{base}*{k}" in taken:
        k += 1
    return f"{base}*{k}"


def star_system(base: AxiomSystem) -> AxiomSystem:
    """``base`` extended with the new members of its star closure."""
    closure = star_closure(base)
    taken = set(base.labels)
    extra = []
    for f in closure[len(base):]:
        label = _star_label(f, taken, base.name)
        taken.add(label)
        extra.append((label, f))
    return base.extend(extra, name=base.name + "*")


@dataclass
class StarKit:
    """The star axioms of ``base`` and their proofs from ``base``."""
    base: AxiomSystem
    star_axioms: list[tuple[str, Formula]]
    star_proofs: dict[str, CDProof] = field(default_factory=dict)

    @classmethod
    def build(cls, base: AxiomSystem, proofs: Mapping[str, CDProof]) -> "StarKit":
        """Pair the star axioms with the supplied proofs (keyed by label or
        matched by conclusion)."""
        extended = star_system(base)
        star = [(l, f) for l, f in extended.axioms if l not in base]
        chosen: dict[str, CDProof] = {}
        for label, f in star:
            p = proofs.get(label)
            if p is None:
                p = next((q for q in proofs.values()
                          if variant_key(q.conclusion) == variant_key(f)), None)
            if p is None:
                raise ValueError(f"no proof supplied for star axiom {label} = {f}")
            chosen[label] = p
        return cls(base, star, chosen)

    @property
    def system(self) -> AxiomSystem:
        return self.base.extend(self.star_axioms, name=self.base.name + "*")

    def validate(self) -> list[str]:
        """Problems with the kit; an empty list means it is usable."""
        problems = []
        for label, f in self.star_axioms:
            p = self.star_proofs.get(label)
            if p is None:
                problems.append(f"{label}: no proof")
                continue
            if p.system.axioms != self.base.axioms:
                problems.append(f"{label}: proof is not over {self.base.name}")
            v = check_cd_proof(p)
            if not v:
                problems.append(f"{label}: {v}")
            elif variant_key(p.conclusion) != variant_key(f):
                problems.append(f"{label}: proof concludes {p.conclusion}")
            elif not dn_report(p).dn_free:
                problems.append(f"{label}: proof uses double negations")
        return problems


@dataclass(frozen=True)
class Selection:
    """The formulas ``q`` whose double negations ``n(n(q))`` get erased."""
    chosen: frozenset[Formula] = frozenset()

    def __init__(self, chosen: Iterable[Formula] = ()):
        object.__setattr__(self, "chosen", frozenset(chosen))

    def validate(self, b: Formula) -> None:
        present = {o.subformula for o in dn_occurrences(b)}
        missing = [q for q in self.chosen if q not in present]
        if missing:
            raise ValueError("selection is not doubly negated in "
                             f"{b}: {', '.join(sorted(map(str, missing)))}")

    def apply(self, f: Formula) -> Formula:
        return erase_where(f, self.chosen.__contains__)

    def __bool__(self):
        return bool(self.chosen)


# -- pushback ----------------------------------------------------------------

def _renaming(keep: Formula, f: Formula) -> Substitution:
    renamed = rename_apart(keep, f)
    return match_instance(f, renamed) if renamed is not f else Substitution()


def pushback(p: CDProof) -> MPProof:
    """Push the substitutions of every detachment back to the leaves.

    For a step ``k`` detaching line ``j`` from line ``i`` let ``ρ`` rename
    ``F_j`` apart, ``μ`` be the unifier and ``π`` the renaming onto the
    stated ``F_k``, so ``F_k = cons(F_i)·τ`` with ``τ = μπ``.  Then the tree
    for ``F_k·σ`` is MP(tree(i, τσ), tree(j, ρτσ)).  Trees for equal
    (line, substitution) pairs are shared objects.
    """
    v = check_cd_proof(p)
    if not v:
        raise ValueError(f"pushback needs a valid proof: {v}")
    lines = {ln.id: ln for ln in p.lines}
    steps: dict[int, tuple[Substitution, Substitution]] = {}
    for ln in p.lines:
        j = ln.justification
        if isinstance(j, CD):
            fi = _ref_formula(j.major, lines, p)
            fj = _ref_formula(j.minor, lines, p)
            rho = _renaming(fi, fj)
            mu = unify_bindings(fi.ante, rho.apply(fj))
            r = Substitution(mu).apply(fi.cons)
            pi = match_instance(r, ln.formula)
            if pi is None:  # cannot happen for a checked proof
                raise AssertionError(f"line {ln.id}: {r} does not rename to {ln.formula}")
            steps[ln.id] = (rho, Substitution(mu).compose(pi))
    memo: dict[tuple, Node] = {}

    def leaf_for_axiom(label: str, formula: Formula, sigma: Substitution) -> Node:
        ax = p.system[label]
        pi = match_instance(ax, formula)
        s = pi.compose(sigma).restrict(variables(ax))
        return Instance(label, s, s.apply(ax))

    def build(ref: Ref, sigma: Substitution) -> Node:
        if isinstance(ref, str):
            f = p.system[ref]
            key = (ref, sigma.restrict(variables(f)))
            if key not in memo:
                memo[key] = leaf_for_axiom(ref, f, key[1])
            return memo[key]
        # explicit stack: proofs can be deep
        order = [(ref, sigma)]
        pending = []
        while order:
            r, s = order.pop()
            if isinstance(r, str):
                continue
            ln = lines[r]
            key = (r, s.restrict(variables(ln.formula)))
            if key in memo:
                continue
            pending.append((r, key[1]))
            j = ln.justification
            if isinstance(j, CD):
                rho, tau = steps[r]
                ts = tau.compose(key[1])
                order.append((j.major, ts))
                order.append((j.minor, rho.compose(ts)))
        for r, s in reversed(pending):
            ln = lines[r]
            key = (r, s)
            if key in memo:
                continue
            j = ln.justification
            if isinstance(j, Axiom):
                memo[key] = leaf_for_axiom(j.label, ln.formula, s)
            elif isinstance(j, Assumption):
                memo[key] = Hyp(ln.formula)
            else:
                rho, tau = steps[r]
                ts = tau.compose(s)
                major = _get(j.major, ts)
                minor = _get(j.minor, rho.compose(ts))
                memo[key] = MP(major, minor, s.apply(ln.formula))
        return memo[(ref, sigma.restrict(variables(lines[ref].formula)))]

    def _get(ref: Ref, s: Substitution) -> Node:
        if isinstance(ref, str):
            return build(ref, s)
        return memo[(ref, s.restrict(variables(lines[ref].formula)))]

    root = build(p.lines[-1].id, Substitution())
    return MPProof(p.system, root, p.assumptions)


def _ref_formula(ref: Ref, lines, p: CDProof) -> Formula:
    return p.system[ref] if isinstance(ref, str) else lines[ref].formula


def substitute_mp(p: MPProof, sigma: Substitution) -> MPProof:
    """Apply ``σ`` to every formula of a modus ponens proof."""
    memo: dict[int, Node] = {}
    for node in _postorder_unique(p.root):
        if isinstance(node, Instance):
            s = node.subst.compose(sigma).restrict(variables(p.system[node.label]))
            memo[id(node)] = Instance(node.label, s, sigma.apply(node.formula))
        elif isinstance(node, Hyp):
            memo[id(node)] = node
        else:
            memo[id(node)] = MP(memo[id(node.major)], memo[id(node.minor)],
                                sigma.apply(node.formula))
    return MPProof(p.system, memo[id(p.root)], p.assumptions)


# -- erasure -----------------------------------------------------------------

def _rematch(f: Formula, system: AxiomSystem, prefer: str) -> Instance | None:
    order = [prefer] + [l for l in system.labels if l != prefer] if prefer in system \
        else system.labels
    for label in order:
        s = match_instance(system[label], f)
        if s is not None:
            return Instance(label, s, f)
    return None


def erase_with(p: MPProof, erase, target: AxiomSystem) -> MPProof:
    """Apply the bottom-up erasure ``n(n(t)) -> t`` (for ``erase(t)``) to
    every node; leaves are re-matched against the axioms of ``target``."""
    memo_f: dict = {}
    memo: dict[int, Node] = {}
    for node in _postorder_unique(p.root):
        f = erase_where(node.formula, erase, memo_f)
        if isinstance(node, Instance):
            if f is node.formula and node.label in target:
                memo[id(node)] = node
                continue
            leaf = _rematch(f, target, node.label)
            if leaf is None:
                raise ValueError(f"erased leaf {f} is not an instance of any axiom of "
                                 f"{target.name}")
            memo[id(node)] = leaf
        elif isinstance(node, Hyp):
            memo[id(node)] = node if f is node.formula else Hyp(f)
        else:
            memo[id(node)] = MP(memo[id(node.major)], memo[id(node.minor)], f)
    assumptions = tuple(erase_where(a, erase, memo_f) for a in p.assumptions)
    return MPProof(target, memo[id(p.root)], assumptions)


def erase_in_mp(p: MPProof, selection: Selection | Iterable[Formula],
                target: AxiomSystem | None = None) -> MPProof:
    """Erase the selected double negations in every node of ``p``.

    Implications are kept, so every MP step stays an MP step.  Leaves are
    re-matched against ``target`` (default: the star closure of ``p``'s
    system).
    """
    sel = selection if isinstance(selection, Selection) else Selection(selection)
    if not sel:
        return p
    target = target or star_system(p.system)
    return erase_with(p, sel.chosen.__contains__, target)


def dn_eliminate(p: CDProof, selection: Selection | Iterable[Formula], kit: StarKit,
                 dkit: DKit, *, return_intermediates: bool = False):
    """Prove ``B*`` with no double negations beyond those of ``B*``.

    ``p`` proves ``B`` over ``kit.base``; the selected double negations of
    ``B`` are erased to give ``B*``.  The proof is pushed back to a modus
    ponens tree, the selection is erased, and then every remaining double
    negation that is not (a variant of) one in ``B*`` is erased as well.
    The leaves are then instances of the star axioms, which are proved
    from their double-negation-free proofs, and the tree is converted back
    to condensed detachment.
    """
    sel = selection if isinstance(selection, Selection) else Selection(selection)
    if p.system.axioms != kit.base.axioms:
        raise ValueError(f"proof is over {p.system.name}, kit is for {kit.base.name}")
    b = p.conclusion
    sel.validate(b)
    b_star = sel.apply(b)
    protected = {variant_key(Neg(Neg(o.subformula))) for o in dn_occurrences(b_star)}
    for a in p.assumptions:
        protected |= {variant_key(Neg(Neg(o.subformula))) for o in dn_occurrences(a)}
    target = kit.system
    tree = pushback(p)
    erased = erase_with(tree, sel.chosen.__contains__, target) if sel else \
        MPProof(target, tree.root, tree.assumptions)
    cleaned = erase_with(erased, lambda t: variant_key(Neg(Neg(t))) not in protected, target)
    out = mp_to_cd(cleaned, dkit, axiom_proofs=kit.star_proofs, name=str(b_star))
    if return_intermediates:
        return out, {"pushback": tree, "erased": erased, "cleaned": cleaned}
    return out


def lift_proof(p: CDProof, target: AxiomSystem, axiom_proofs: Mapping[str, CDProof]) -> CDProof:
    """Re-base ``p`` on another axiom system by splicing in proofs of the
    axioms it cites.  Axioms that ``target`` shares (same label and
    formula) need no proof."""
    shared = {l for l in p.system.labels if l in target and target[l] == p.system[l]}
    missing = [l for l in p.system.labels if l not in axiom_proofs and l not in shared]
    used = {ln.justification.label for ln in p.lines if isinstance(ln.justification, Axiom)}
    used |= {r for ln in p.lines if isinstance(ln.justification, CD)
             for r in (ln.justification.major, ln.justification.minor) if isinstance(r, str)}
    missing = [l for l in missing if l in used]
    if missing:
        raise ValueError(f"no proofs supplied for {', '.join(missing)}")
    return splice_lemmas(p, target, {l: q for l, q in axiom_proofs.items()
                                     if l in used and l not in shared})
