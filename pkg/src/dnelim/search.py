"""Forward saturation with condensed detachment.

:func:`saturate` is a given-clause loop in the style of OTTER: the lightest
formula of the set of support is moved to the usable list and detached
against every usable formula in both roles.  New formulas are dropped when
they exceed the weight limit, contain a double negation (if avoidance is
on), or are instances of something already retained.

:func:`enumerate_closure` computes exact breadth-first closure rounds.
"""
from __future__ import annotations

import heapq
import time
from dataclasses import dataclass, field

from .kernel import (
    Formula, Impl, Neg, Var, has_double_negation, is_alphabetic_variant,
    match_bindings, variant_key,
)
from .proofs import CD, Axiom, CDLine, CDProof
from .rule import detach
from .systems import AxiomSystem

__all__ = ["SearchConfig", "SearchResult", "saturate", "enumerate_closure",
           "ClosureResult", "weight", "DiscriminationTree"]


def weight(f: Formula) -> int:
    """Symbol count: every ``i``, ``n`` and letter occurrence counts one."""
    return f.size


@dataclass(frozen=True)
class SearchConfig:
    max_weight: int = 24
    max_retained: int = 20000
    max_given: int | None = None
    max_seconds: float | None = None
    dn_avoidance: bool = False
    hints: tuple[Formula, ...] = ()
    resonators: tuple[Formula, ...] = ()
    hint_weight: int = 0
    resonator_weight: int = 0
    # When false, only a variant of the goal counts as success and the goal
    # itself is never discarded as an instance of a more general formula.
    subsume_goal: bool = True

    def __post_init__(self):
        object.__setattr__(self, "hints", tuple(self.hints))
        object.__setattr__(self, "resonators", tuple(self.resonators))
        if self.max_weight <= 0 or self.max_retained <= 0:
            raise ValueError("search limits must be positive")
        if self.max_given is not None and self.max_given <= 0:
            raise ValueError("max_given must be positive")


@dataclass
class SearchResult:
    proof: CDProof | None
    retained_count: int
    generated_count: int
    given_count: int
    elapsed: float
    status: str  # proved, exhausted, limit
    retained: list[Formula] = field(default_factory=list, repr=False)
    system: AxiomSystem | None = field(default=None, repr=False)
    _records: list = field(default_factory=list, repr=False)

    @property
    def found(self) -> bool:
        return self.proof is not None

    def proof_of(self, f: Formula) -> CDProof | None:
        """A proof of the retained formula that is a variant of ``f``."""
        key = variant_key(f)
        for rec in self._records:
            if variant_key(rec.formula) == key:
                return _extract(self.system, self._records, rec)
        return None

    def proof_at(self, index: int) -> CDProof:
        """A proof of the ``index``-th retained formula."""
        return _extract(self.system, self._records, self._records[index])


class DiscriminationTree:
    """Index of formulas for retrieving generalizations of a query."""

    def __init__(self):
        self._root: dict = {}
        self._count = 0

    def __len__(self):
        return self._count

    @staticmethod
    def _tokens(f: Formula) -> list:
        out = []
        stack = [f]
        while stack:
            g = stack.pop()
            t = type(g)
            if t is Impl:
                out.append("i")
                stack.append(g.cons)
                stack.append(g.ante)
            elif t is Neg:
                out.append("n")
                stack.append(g.arg)
            elif t is Var:
                out.append("*")
            else:
                out.append(("c", g.name))
        return out

    def insert(self, f: Formula, item) -> None:
        node = self._root
        for tok in self._tokens(f):
            node = node.setdefault(tok, {})
        node.setdefault(None, []).append(item)
        self._count += 1

    def generalizations(self, f: Formula) -> list:
        """Items whose key may generalize ``f`` (verify with matching)."""
        toks = []
        ends = []
        # preorder tokens with the index just past each subterm
        def flat(g: Formula) -> int:
            i = len(toks)
            t = type(g)
            toks.append("i" if t is Impl else "n" if t is Neg else "*" if t is Var else ("c", g.name))
            ends.append(0)
            if t is Impl:
                flat(g.ante)
                flat(g.cons)
            elif t is Neg:
                flat(g.arg)
            ends[i] = len(toks)
            return ends[i]
        flat(f)
        n = len(toks)
        out = []
        stack = [(self._root, 0)]
        while stack:
            node, i = stack.pop()
            if i == n:
                out.extend(node.get(None, ()))
                continue
            star = node.get("*")
            if star is not None:
                stack.append((star, ends[i]))
            tok = toks[i]
            if tok != "*":
                nxt = node.get(tok)
                if nxt is not None:
                    stack.append((nxt, i + 1))
        return out


def _skeleton(f: Formula) -> tuple:
    """Shape of ``f`` with all variables identified (for resonators)."""
    out = []
    stack = [f]
    while stack:
        g = stack.pop()
        t = type(g)
        if t is Impl:
            out.append(1)
            stack.append(g.cons)
            stack.append(g.ante)
        elif t is Neg:
            out.append(2)
            stack.append(g.arg)
        elif t is Var:
            out.append(0)
        else:
            out.append(g.name)
    return tuple(out)


@dataclass
class _Rec:
    id: int
    formula: Formula
    just: object  # axiom label or (major id, minor id)


def saturate(system: AxiomSystem, goal: Formula, cfg: SearchConfig = SearchConfig()) -> SearchResult:
    start = time.perf_counter()
    hint_keys = {variant_key(h) for h in cfg.hints}
    res_keys = {_skeleton(r) for r in cfg.resonators}
    goal_key = variant_key(goal)

    def priority(f: Formula) -> int | None:
        if hint_keys and variant_key(f) in hint_keys:
            return cfg.hint_weight
        if res_keys and _skeleton(f) in res_keys:
            return cfg.resonator_weight
        w = f.size
        return w if w <= cfg.max_weight else None

    def solves(f: Formula) -> bool:
        if variant_key(f) == goal_key:
            return True
        return cfg.subsume_goal and match_bindings(f, goal) is not None

    records: list[_Rec] = []
    index = DiscriminationTree()
    sos: list[tuple[int, int]] = []
    usable: list[_Rec] = []
    generated = 0
    given = 0

    def subsumed(f: Formula) -> bool:
        for rec in index.generalizations(f):
            if match_bindings(rec.formula, f) is not None:
                return True
        return False

    def retain(f: Formula, just, pri: int) -> _Rec:
        rec = _Rec(len(records), f, just)
        records.append(rec)
        index.insert(f, rec)
        heapq.heappush(sos, (pri, rec.id))
        return rec

    def finish(status: str, hit: _Rec | None) -> SearchResult:
        proof = _extract(system, records, hit) if hit is not None else None
        return SearchResult(proof, len(records), generated, given,
                            time.perf_counter() - start, status,
                            [r.formula for r in records], system, records)

    for label, f in system.axioms:
        if subsumed(f):
            continue
        rec = retain(f, label, 0 if priority(f) is None else priority(f))
        if solves(f):
            return finish("proved", rec)

    while sos:
        if cfg.max_given is not None and given >= cfg.max_given:
            return finish("limit", None)
        if cfg.max_seconds is not None and time.perf_counter() - start > cfg.max_seconds:
            return finish("limit", None)
        _, gid = heapq.heappop(sos)
        g = records[gid]
        given += 1
        usable.append(g)
        for u in list(usable):
            pairs = [(g, u)] if u is g else [(g, u), (u, g)]
            for major, minor in pairs:
                if type(major.formula) is not Impl:
                    continue
                f = detach(major.formula, minor.formula)
                if f is None:
                    continue
                generated += 1
                if cfg.dn_avoidance and has_double_negation(f):
                    continue
                # the weight limit bounds the search, never the answer
                if solves(f):
                    return finish("proved", retain(f, (major.id, minor.id), 0))
                pri = priority(f)
                if pri is None or subsumed(f):
                    continue
                retain(f, (major.id, minor.id), pri)
                if len(records) >= cfg.max_retained:
                    return finish("limit", None)
    return finish("exhausted", None)


def _extract(system: AxiomSystem, records: list[_Rec], hit: _Rec) -> CDProof:
    needed: set[int] = set()
    stack = [hit.id]
    while stack:
        i = stack.pop()
        if i in needed:
            continue
        needed.add(i)
        if isinstance(records[i].just, tuple):
            stack.extend(records[i].just)
    if isinstance(hit.just, str):
        return CDProof(system, (CDLine(1, Axiom(hit.just), hit.formula),), name="search")
    lines = []
    ids: dict[int, object] = {}
    for i in sorted(needed):
        rec = records[i]
        if isinstance(rec.just, str):
            ids[i] = rec.just
            continue
        a, b = rec.just
        line_id = len(lines) + 1
        lines.append(CDLine(line_id, CD(ids[a], ids[b]), rec.formula))
        ids[i] = line_id
    return CDProof(system, tuple(lines), name="search")


@dataclass
class ClosureResult:
    rounds: list[tuple[int, list[Formula]]]
    truncated: bool = False

    def __iter__(self):
        return iter(self.rounds)

    def __len__(self):
        return len(self.rounds)

    def __getitem__(self, k):
        return self.rounds[k]


def enumerate_closure(system: AxiomSystem, rounds: int, cap: int = 5000) -> ClosureResult:
    """Breadth-first closure: round k holds the new formulas (up to
    variants) obtainable by one detachment from everything known before
    round k.  Stops early, flagged ``truncated``, once more than ``cap``
    formulas are known."""
    known = [f for _, f in system.axioms]
    keys = {variant_key(f) for f in known}
    out: list[tuple[int, list[Formula]]] = []
    for k in range(1, rounds + 1):
        new: list[Formula] = []
        snapshot = list(known)
        for major in snapshot:
            if type(major) is not Impl:
                continue
            for minor in snapshot:
                f = detach(major, minor)
                if f is None:
                    continue
                key = variant_key(f)
                if key in keys:
                    continue
                keys.add(key)
                new.append(f)
                if len(keys) > cap:
                    out.append((k, new))
                    return ClosureResult(out, truncated=True)
        known.extend(new)
        out.append((k, new))
    return ClosureResult(out)


def found_variant(result: ClosureResult, f: Formula, round_no: int | None = None) -> bool:
    for k, formulas in result.rounds:
        if round_no is not None and k != round_no:
            continue
        if any(is_alphabetic_variant(f, g) for g in formulas):
            return True
    return False
