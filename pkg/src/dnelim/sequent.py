"""Intuitionistic sequent calculus for implication and negation.

Formulas of the calculus use their own syntax (:class:`GAtom`,
:class:`GNot`, :class:`GImp`) so that the translations to and from the
``i``/``n`` notation are explicit.  A sequent has a list of antecedent
formulas and at most one succedent formula.

:func:`prove_sequent` decides provability by cut-free backward search on
sets of antecedent formulas with loop checking, then rebuilds a proof that
spells out every contraction, thinning and interchange.  From such a proof
:func:`extract_m_proof` reads off a modus ponens proof from instances of
H1--H4, and :func:`h_dn_eliminate` turns that into a condensed-detachment
proof without new double negations.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Union

from .kernel import (
    Const, Formula, Impl, Neg, Substitution, Var, constants, dn_subformulas,
    freeze, parse_formula, thaw, variables,
)
from .proofs import (
    Axiom, CDLine, CDProof, Hyp, Instance, MP, MPProof, Node, _postorder_unique, instance, mp,
)
from .systems import AxiomSystem, get_system

__all__ = [
    "GAtom", "GNot", "GImp", "GFormula", "Sequent", "GProof", "parse_sequent",
    "translate_to_g", "translate_to_h", "prove_sequent", "check_gproof",
    "gproof_formulas", "has_subformula_property", "deduction_theorem_m",
    "extract_m_proof", "h_dn_eliminate", "NotProvable", "allowed_double_negations",
]


# -- syntax ------------------------------------------------------------------

@dataclass(frozen=True)
class GAtom:
    name: str
    constant: bool = False

    def __str__(self):
        return self.name


# Compound formulas cache their hash and compare iteratively, so very deep
# formulas neither hash nor compare recursively.

@dataclass(frozen=True, eq=False)
class GNot:
    arg: "GFormula"
    _hash: int = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash(("not", hash(self.arg))))

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return self is other or (type(other) is GNot and _g_equal(self, other))

    def __str__(self):
        return f"¬{_wrap(self.arg)}"


@dataclass(frozen=True, eq=False)
class GImp:
    ante: "GFormula"
    cons: "GFormula"
    _hash: int = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash(("imp", hash(self.ante), hash(self.cons))))

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return self is other or (type(other) is GImp and _g_equal(self, other))

    def __str__(self):
        return f"{_wrap(self.ante)} → {self.cons}"


def _g_equal(a, b) -> bool:
    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        if x is y:
            continue
        if type(x) is not type(y) or hash(x) != hash(y):
            return False
        if type(x) is GImp:
            stack.append((x.ante, y.ante))
            stack.append((x.cons, y.cons))
        elif type(x) is GNot:
            stack.append((x.arg, y.arg))
        elif x != y:
            return False
    return True


GFormula = Union[GAtom, GNot, GImp]


def _wrap(g: GFormula) -> str:
    return f"({g})" if isinstance(g, GImp) else str(g)


def translate_to_g(f: Formula) -> GFormula:
    """``i``/``n`` syntax to arrow syntax."""
    memo: dict[Formula, GFormula] = {}
    stack = [f]
    while stack:
        g = stack[-1]
        if g in memo:
            stack.pop()
            continue
        t = type(g)
        if t is Var or t is Const:
            memo[g] = GAtom(g.name, t is Const)
        elif t is Neg:
            if g.arg not in memo:
                stack.append(g.arg)
                continue
            memo[g] = GNot(memo[g.arg])
        else:
            missing = [c for c in (g.ante, g.cons) if c not in memo]
            if missing:
                stack.extend(missing)
                continue
            memo[g] = GImp(memo[g.ante], memo[g.cons])
        stack.pop()
    return memo[f]


def translate_to_h(g: GFormula) -> Formula:
    """Arrow syntax back to ``i``/``n`` syntax; inverse of :func:`translate_to_g`."""
    memo: dict[GFormula, Formula] = {}
    stack = [g]
    while stack:
        h = stack[-1]
        if h in memo:
            stack.pop()
            continue
        if isinstance(h, GAtom):
            memo[h] = Const(h.name) if h.constant else Var(h.name)
        elif isinstance(h, GNot):
            if h.arg not in memo:
                stack.append(h.arg)
                continue
            memo[h] = Neg(memo[h.arg])
        else:
            missing = [c for c in (h.ante, h.cons) if c not in memo]
            if missing:
                stack.extend(missing)
                continue
            memo[h] = Impl(memo[h.ante], memo[h.cons])
        stack.pop()
    return memo[g]


@dataclass(frozen=True)
class Sequent:
    antecedent: tuple[GFormula, ...]
    succedent: GFormula | None = None

    def __post_init__(self):
        object.__setattr__(self, "antecedent", tuple(self.antecedent))

    @classmethod
    def of(cls, antecedent: Iterable[Formula], succedent: Formula | None) -> "Sequent":
        """Build from formulas in ``i``/``n`` syntax."""
        return cls(tuple(translate_to_g(a) for a in antecedent),
                   None if succedent is None else translate_to_g(succedent))

    def __str__(self):
        left = ", ".join(str(translate_to_h(a)) for a in self.antecedent)
        right = "" if self.succedent is None else str(translate_to_h(self.succedent))
        return f"{left} => {right}".strip()


def parse_sequent(text: str, constants: Iterable[str] = ()) -> Sequent:
    """Parse ``"a, i(a,b) => b"``; an empty right-hand side is allowed."""
    if text.count("=>") != 1:
        raise ValueError(f"a sequent needs exactly one '=>': {text!r}")
    left, right = text.split("=>")
    ante = [parse_formula(part, constants) for part in _split_top(left)]
    succ = parse_formula(right, constants) if right.strip() else None
    return Sequent.of(ante, succ)


def _split_top(text: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
            continue
        depth += (ch == "(") - (ch == ")")
        cur.append(ch)
    parts.append("".join(cur))
    parts = [p for p in parts if p.strip()]
    return parts


# -- proofs ------------------------------------------------------------------

RULES = ("axiom", "imp_left", "imp_right", "not_left", "not_right",
         "contraction", "thin_left", "thin_right", "interchange")


@dataclass(frozen=True, eq=False)
class GProof:
    """One rule application; ``index`` is the swap position for interchange."""
    rule: str
    sequent: Sequent
    premises: tuple["GProof", ...] = ()
    index: int | None = None

    def nodes(self) -> list["GProof"]:
        """Distinct nodes, premises before conclusions."""
        out, seen, stack = [], set(), [(self, False)]
        while stack:
            node, done = stack.pop()
            if id(node) in seen:
                continue
            if done:
                seen.add(id(node))
                out.append(node)
                continue
            stack.append((node, True))
            stack.extend((p, False) for p in reversed(node.premises))
        return out

    def size(self) -> int:
        return len(self.nodes())


class NotProvable(ValueError):
    pass


def _check_node(g: GProof) -> str | None:
    s = g.sequent
    ant, succ = s.antecedent, s.succedent
    ps = [p.sequent for p in g.premises]
    arity = {"axiom": 0, "imp_left": 2}.get(g.rule, 1)
    if g.rule not in RULES:
        return f"unknown rule {g.rule}"
    if len(ps) != arity:
        return f"{g.rule} takes {arity} premisses"
    if g.rule == "axiom":
        ok = len(ant) == 1 and succ is not None and ant[0] == succ
    elif g.rule == "imp_left":
        left, right = ps
        ok = (len(ant) >= 1 and isinstance(ant[0], GImp) and left.succedent == ant[0].ante
              and len(right.antecedent) >= 1 and right.antecedent[0] == ant[0].cons
              and ant[1:] == left.antecedent + right.antecedent[1:]
              and succ == right.succedent)
    elif g.rule == "imp_right":
        (p,) = ps
        ok = (isinstance(succ, GImp) and len(p.antecedent) >= 1
              and p.antecedent[0] == succ.ante and p.antecedent[1:] == ant
              and p.succedent == succ.cons)
    elif g.rule == "not_right":
        (p,) = ps
        ok = (isinstance(succ, GNot) and len(p.antecedent) >= 1
              and p.antecedent[0] == succ.arg and p.antecedent[1:] == ant
              and p.succedent is None)
    elif g.rule == "not_left":
        (p,) = ps
        ok = (succ is None and len(ant) >= 1 and isinstance(ant[0], GNot)
              and p.succedent == ant[0].arg and p.antecedent == ant[1:])
    elif g.rule == "contraction":
        (p,) = ps
        ok = (len(p.antecedent) >= 2 and p.antecedent[0] == p.antecedent[1]
              and p.antecedent[1:] == ant and p.succedent == succ)
    elif g.rule == "thin_left":
        (p,) = ps
        ok = len(ant) >= 1 and ant[1:] == p.antecedent and p.succedent == succ
    elif g.rule == "thin_right":
        (p,) = ps
        ok = succ is not None and p.succedent is None and p.antecedent == ant
    else:  # interchange
        (p,) = ps
        k = g.index
        ok = (k is not None and 0 <= k < len(ant) - 1 and p.succedent == succ
              and len(p.antecedent) == len(ant)
              and p.antecedent[:k] == ant[:k] and p.antecedent[k + 2:] == ant[k + 2:]
              and p.antecedent[k] == ant[k + 1] and p.antecedent[k + 1] == ant[k])
    return None if ok else f"{g.rule} does not fit its schema at {s}"


def check_gproof(g: GProof) -> str | None:
    """``None`` if every node instantiates its rule, else a message."""
    for node in g.nodes():
        msg = _check_node(node)
        if msg is not None:
            return msg
    return None


def _g_subformulas(g: GFormula, out: set) -> None:
    stack = [g]
    while stack:
        h = stack.pop()
        if h in out:
            continue
        out.add(h)
        if isinstance(h, GNot):
            stack.append(h.arg)
        elif isinstance(h, GImp):
            stack.extend((h.ante, h.cons))


def gproof_formulas(g: GProof) -> set:
    out = set()
    for node in g.nodes():
        out.update(node.sequent.antecedent)
        if node.sequent.succedent is not None:
            out.add(node.sequent.succedent)
    return out


def has_subformula_property(g: GProof) -> bool:
    allowed: set = set()
    s = g.sequent
    for f in s.antecedent + ((s.succedent,) if s.succedent is not None else ()):
        _g_subformulas(f, allowed)
    return gproof_formulas(g) <= allowed


# -- backward search ---------------------------------------------------------

@dataclass(frozen=True, eq=False)
class _Step:
    """A search-tree node over set antecedents (structural rules implicit)."""
    kind: str  # axiom, imp_right, not_right, imp_left, not_left
    gamma: frozenset
    theta: GFormula | None
    principal: GFormula | None = None
    children: tuple["_Step", ...] = ()


@dataclass
class _Searcher:
    proved: dict = field(default_factory=dict)
    failed: set = field(default_factory=set)

    def run(self, gamma: frozenset, theta, history: frozenset) -> tuple[_Step | None, bool]:
        """Return a proof or ``None``, plus whether a loop cut was involved
        (failures that did not hit one are memoized)."""
        key = (gamma, theta)
        if key in self.proved:
            return self.proved[key], False
        if key in self.failed:
            return None, False
        if key in history:
            return None, True
        history = history | {key}
        step, looped = self._expand(gamma, theta, history)
        if step is not None:
            self.proved[key] = step
        elif not looped:
            self.failed.add(key)
        return step, looped

    def _expand(self, gamma, theta, history):
        if theta is not None and theta in gamma:
            return _Step("axiom", gamma, theta), False
        if isinstance(theta, GImp):
            sub, looped = self.run(gamma | {theta.ante}, theta.cons, history)
            return (_Step("imp_right", gamma, theta, children=(sub,)) if sub else None), looped
        if isinstance(theta, GNot):
            sub, looped = self.run(gamma | {theta.arg}, None, history)
            return (_Step("not_right", gamma, theta, children=(sub,)) if sub else None), looped
        looped = False
        # negations first: they have a single premiss
        for f in sorted((f for f in gamma if isinstance(f, GNot)), key=str):
            sub, lp = self.run(gamma, f.arg, history)
            looped |= lp
            if sub is not None:
                return _Step("not_left", gamma, theta, f, (sub,)), looped
        for f in sorted((f for f in gamma if isinstance(f, GImp)), key=str):
            if f.cons in gamma:
                continue  # the right premiss would repeat the conclusion
            left, lp = self.run(gamma, f.ante, history)
            looped |= lp
            if left is None:
                continue
            right, lp = self.run(gamma | {f.cons}, theta, history)
            looped |= lp
            if right is not None:
                return _Step("imp_left", gamma, theta, f, (left, right)), looped
        return None, looped


def _interchange(p: GProof, k: int) -> GProof:
    a = list(p.sequent.antecedent)
    a[k], a[k + 1] = a[k + 1], a[k]
    return GProof("interchange", Sequent(tuple(a), p.sequent.succedent), (p,), k)


def _move(p: GProof, i: int, j: int) -> GProof:
    """Move the antecedent formula at ``i`` left to position ``j``."""
    for k in range(i - 1, j - 1, -1):
        p = _interchange(p, k)
    return p


def _adapt(p: GProof, target: tuple) -> GProof:
    """Contract, thin and interchange until the antecedent is ``target``.

    Needs every formula of ``p``'s antecedent to occur in ``target``.
    """
    # contract duplicates
    while True:
        ant = p.sequent.antecedent
        dup = next((i for i, f in enumerate(ant) if f in ant[:i]), None)
        if dup is None:
            break
        first = ant.index(ant[dup])
        p = _move(p, dup, 0)
        p = _move(p, first + 1, 1)
        p = GProof("contraction", Sequent(p.sequent.antecedent[1:], p.sequent.succedent), (p,))
    # thin in what is missing
    have = list(p.sequent.antecedent)
    for f in target:
        if f in have:
            have.remove(f)
        else:
            p = GProof("thin_left", Sequent((f,) + p.sequent.antecedent, p.sequent.succedent), (p,))
    # sort into place
    for pos, f in enumerate(target):
        ant = p.sequent.antecedent
        p = _move(p, next(j for j in range(pos, len(ant)) if ant[j] == f), pos)
    assert p.sequent.antecedent == tuple(target)
    return p


def _rebuild(step: _Step, target: tuple) -> GProof:
    """Turn a set-based search tree into a proof ending in ``target`` (a list
    whose set of formulas is ``step.gamma``)."""
    memo: dict[tuple, GProof] = {}
    # explicit stack instead of recursion: (step, target, expanded)
    stack = [(step, target, False)]
    while stack:
        st, tgt, expanded = stack.pop()
        key = (id(st), tgt)
        if key in memo:
            continue
        subs = _sub_targets(st, tgt)
        if not expanded:
            stack.append((st, tgt, True))
            stack.extend((c, t, False) for c, t in subs if (id(c), t) not in memo)
            continue
        kids = [memo[(id(c), t)] for c, t in subs]
        memo[key] = _assemble(st, tgt, kids)
    return memo[(id(step), target)]


def _sub_targets(st: _Step, tgt: tuple) -> list:
    if st.kind == "imp_right":
        return [(st.children[0], (st.theta.ante,) + tgt)]
    if st.kind == "not_right":
        return [(st.children[0], (st.theta.arg,) + tgt)]
    if st.kind == "not_left":
        return [(st.children[0], tgt)]
    if st.kind == "imp_left":
        return [(st.children[0], tgt), (st.children[1], (st.principal.cons,) + tgt)]
    return []


def _assemble(st: _Step, tgt: tuple, kids: list[GProof]) -> GProof:
    theta = st.theta
    if st.kind == "axiom":
        leaf = GProof("axiom", Sequent((theta,), theta))
        return _adapt(leaf, tgt)
    if st.kind == "imp_right":
        return GProof("imp_right", Sequent(tgt, theta), (kids[0],))
    if st.kind == "not_right":
        return GProof("not_right", Sequent(tgt, theta), (kids[0],))
    if st.kind == "not_left":
        p = GProof("not_left", Sequent((st.principal,) + tgt, None), (kids[0],))
        if theta is not None:
            p = GProof("thin_right", Sequent(p.sequent.antecedent, theta), (p,))
        return _adapt(p, tgt)
    left, right = kids
    p = GProof("imp_left", Sequent((st.principal,) + tgt + tgt, theta), (left, right))
    return _adapt(p, tgt)


def prove_sequent(s: Sequent) -> GProof | None:
    """A cut-free proof of ``s``, or ``None`` if there is none.

    The search is a decision procedure: antecedents are sets, so only
    finitely many sequents built from subformulas of ``s`` exist, and a
    branch fails as soon as it revisits one.
    """
    gamma = frozenset(s.antecedent)
    step, _ = _Searcher().run(gamma, s.succedent, frozenset())
    if step is None:
        return None
    return _rebuild(step, s.antecedent)


# -- from sequent proofs to modus ponens proofs ------------------------------

def _h() -> AxiomSystem:
    return get_system("H")


def _h1(h: AxiomSystem, a: Formula, b: Formula) -> Instance:
    return instance(h, "H1", {"x": a, "y": b})


def _discharge(root: Node, b: Formula, h: AxiomSystem) -> Node:
    """A node proving ``i(b, root.formula)`` without using ``Hyp(b)``."""
    uses: dict[int, bool] = {}
    out: dict[int, Node] = {}
    identity = None
    for node in _postorder_unique(root):
        if isinstance(node, MP):
            uses[id(node)] = uses[id(node.major)] or uses[id(node.minor)]
        else:
            uses[id(node)] = isinstance(node, Hyp) and node.formula == b
        if not uses[id(node)]:
            # b is not needed below here: i(a, i(b, a)) and modus ponens
            out[id(node)] = mp(_h1(h, node.formula, b), node)
        elif isinstance(node, Hyp):
            if identity is None:
                # S K K: i(b,b) from H1 and H2
                bb = Impl(b, b)
                s = instance(h, "H2", {"x": b, "y": bb, "z": b})
                step = mp(s, _h1(h, b, bb))
                identity = mp(step, _h1(h, b, b))
            out[id(node)] = identity
        else:
            q, a = node.minor.formula, node.formula
            s = instance(h, "H2", {"x": b, "y": q, "z": a})
            out[id(node)] = mp(mp(s, out[id(node.major)]), out[id(node.minor)])
    return out[id(root)]


def deduction_theorem_m(p: MPProof, b: Formula) -> MPProof:
    """From a modus ponens proof of ``a`` using assumption ``b``, a proof of
    ``i(b,a)`` from the remaining assumptions.

    Assumptions must be built from constant letters only.  No double
    negation enters the result that is not already in ``p`` or ``b``.
    """
    for a in p.assumptions + (b,):
        if variables(a):
            raise ValueError(f"assumption {a} contains variables; freeze them first")
    h = p.system
    rest = tuple(a for a in p.assumptions if a != b)
    return MPProof(h, _discharge(p.root, b, h), rest)


def _replace_hyp(root: Node, b: Formula, by: Node) -> Node:
    out: dict[int, Node] = {}
    for node in _postorder_unique(root):
        if isinstance(node, Hyp) and node.formula == b:
            out[id(node)] = by
        elif isinstance(node, MP):
            maj, mn = out[id(node.major)], out[id(node.minor)]
            out[id(node)] = node if (maj is node.major and mn is node.minor) else MP(maj, mn, node.formula)
        else:
            out[id(node)] = node
    return out[id(root)]


def extract_m_proof(g: GProof, target: Formula | None = None) -> MPProof:
    """Read a modus ponens proof over H1--H4 off a sequent proof.

    Atoms become constant letters, so the assumptions are the frozen
    antecedent.  For an empty succedent the proof ends in ``target`` (any
    formula; frozen as well).
    """
    h = _h()

    def tr(f: GFormula) -> Formula:
        return freeze(translate_to_h(f))

    if g.sequent.succedent is None:
        if target is None:
            raise ValueError("a sequent with empty succedent needs a target formula")
        goal = freeze(target)
    else:
        goal = tr(g.sequent.succedent)

    memo: dict[tuple, Node] = {}
    stack: list = [(g, goal, False)]
    while stack:
        node, want, expanded = stack.pop()
        key = (id(node), want)
        if key in memo:
            continue
        subs = _extract_subgoals(node, want, tr)
        if not expanded:
            stack.append((node, want, True))
            stack.extend((c, t, False) for c, t in subs if (id(c), t) not in memo)
            continue
        kids = [memo[(id(c), t)] for c, t in subs]
        memo[key] = _extract_step(node, want, kids, tr, h)
    root = memo[(id(g), goal)]
    return MPProof(h, root, tuple(dict.fromkeys(tr(a) for a in g.sequent.antecedent)))


def _extract_subgoals(node: GProof, want: Formula, tr) -> list:
    r = node.rule
    if r == "axiom":
        return []
    if r == "imp_left":
        left, right = node.premises
        return [(left, tr(left.sequent.succedent)), (right, want)]
    if r == "imp_right":
        return [(node.premises[0], tr(node.sequent.succedent.cons))]
    if r == "not_right":
        return [(node.premises[0], want)]  # want is n(a)
    if r == "not_left":
        p = node.premises[0]
        return [(p, tr(p.sequent.succedent))]
    if r == "thin_right":
        return [(node.premises[0], want)]
    return [(node.premises[0], want)]  # structural rules on the left


def _extract_step(node: GProof, want: Formula, kids: list[Node], tr, h) -> Node:
    r = node.rule
    if r == "axiom":
        return Hyp(want)
    if r == "imp_left":
        principal = tr(node.sequent.antecedent[0])
        b = principal.cons
        got_b = mp(Hyp(principal), kids[0])
        return _replace_hyp(kids[1], b, got_b)
    if r == "imp_right":
        a = tr(node.sequent.succedent.ante)
        return _discharge(kids[0], a, h)
    if r == "not_right":
        a = want.arg
        to_neg = _discharge(kids[0], a, h)  # i(a, n(a))
        return mp(instance(h, "H3", {"x": a}), to_neg)
    if r == "not_left":
        a = kids[0].formula
        step = mp(instance(h, "H4", {"x": a, "y": want}), kids[0])
        return mp(step, Hyp(Neg(a)))
    return kids[0]


def _thaw_node(root: Node) -> Node:
    out: dict[int, Node] = {}
    for node in _postorder_unique(root):
        if isinstance(node, Instance):
            s = Substitution({k: thaw(v) for k, v in node.subst.items()})
            out[id(node)] = Instance(node.label, s, thaw(node.formula))
        elif isinstance(node, Hyp):
            out[id(node)] = Hyp(thaw(node.formula))
        else:
            out[id(node)] = MP(out[id(node.major)], out[id(node.minor)], thaw(node.formula))
    return out[id(root)]


def h_dn_eliminate(b: Formula, delta: Iterable[Formula] = (), kit=None) -> CDProof:
    """A condensed-detachment proof of ``b`` from H1--H4 and ``delta`` whose
    doubly negated formulas all come from ``b`` or ``delta``.

    The letters of ``delta`` are treated as constants (they appear as
    :class:`Const` in the result); the remaining letters of ``b`` stay
    schematic.  Raises :class:`NotProvable` when intuitionistic logic does
    not prove ``b`` from ``delta``.
    """
    from .corpus import dkit as load_kit
    from .derive import ProofBuilder, mp_to_cd

    kit = kit or load_kit("H")
    delta = list(delta)
    names = {n for d in delta for n in variables(d)}
    fdelta = [freeze(d, names) for d in delta]
    fb = freeze(b, names)
    allowed_consts = {c for d in fdelta for c in constants(d)}
    stray = set(constants(fb)) - allowed_consts
    if stray:
        raise NotProvable(f"constants {sorted(stray)} of {b} occur in no assumption")
    if not fdelta:
        label = kit.system.label_of(fb)
        if label is not None:
            return CDProof(kit.system, (CDLine(1, Axiom(label), kit.system[label]),), name=label)
    g = prove_sequent(Sequent.of(fdelta, fb))
    if g is None:
        raise NotProvable(f"{b} is not intuitionistically provable from the assumptions")
    m = extract_m_proof(g)
    for d in reversed(fdelta):
        m = deduction_theorem_m(m, freeze(d))
    lemma = MPProof(m.system, _thaw_node(m.root))
    cd = mp_to_cd(lemma, kit, name=str(lemma.conclusion))
    if not fdelta:
        return cd
    builder = ProofBuilder(kit.system, tuple(fdelta), kit=kit)
    ref = builder.splice(cd)
    for k in range(len(fdelta)):
        ref = builder.cd(ref, builder.assumption(k))
    return builder.finish(ref, name=str(fb))


def allowed_double_negations(b: Formula, delta: Iterable[Formula] = ()) -> list[Formula]:
    """The ``n(n(q))`` formulas a result of :func:`h_dn_eliminate` may contain."""
    out = []
    for f in [b, *delta]:
        for dn in dn_subformulas(f):
            out.extend((dn, thaw(dn), freeze(dn)))
    return out
