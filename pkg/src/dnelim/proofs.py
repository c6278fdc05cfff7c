"""Proof objects, checkers, double-negation reports and serialization.

Two proof formats are supported:

* :class:`CDProof` is a numbered sequence of lines, each an axiom, an
  assumption, or a condensed-detachment step citing earlier lines (or axiom
  labels directly, as machine listings do).
* :class:`MPProof` is a tree whose leaves are substitution instances of
  axioms or assumptions and whose inner nodes are exact modus ponens steps.
  Subtrees may be shared objects; they still count once per reference.
"""
from __future__ import annotations

import json
import re
from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from typing import Union

from .kernel import (
    DnOccurrence, Formula, FormulaSyntaxError, Impl, Substitution, constants,
    dn_occurrences, is_alphabetic_variant, parse_formula, variables,
    variant_key,
)
from .rule import detach
from .systems import AxiomSystem, get_system

Ref = Union[int, str]

FORMAT_TAG = "dnelim-proof/1"


# -- condensed-detachment proofs ---------------------------------------------

@dataclass(frozen=True)
class Axiom:
    label: str

    def __str__(self):
        return self.label


@dataclass(frozen=True)
class Assumption:
    index: int

    def __str__(self):
        return f"assumption {self.index}"


@dataclass(frozen=True)
class CD:
    major: Ref
    minor: Ref

    def __str__(self):
        return f"[{self.major},{self.minor}]"


Justification = Union[Axiom, Assumption, CD]


@dataclass(frozen=True)
class CDLine:
    id: int
    justification: Justification
    formula: Formula

    def __str__(self):
        return f"{self.id} {self.justification} {self.formula}"


@dataclass(frozen=True)
class CDProof:
    system: AxiomSystem
    lines: tuple[CDLine, ...]
    assumptions: tuple[Formula, ...] = ()
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "lines", tuple(self.lines))
        object.__setattr__(self, "assumptions", tuple(self.assumptions))

    @property
    def conclusion(self) -> Formula:
        if not self.lines:
            raise ValueError("empty proof has no conclusion")
        return self.lines[-1].formula

    def line(self, line_id: int) -> CDLine:
        for ln in self.lines:
            if ln.id == line_id:
                return ln
        raise KeyError(line_id)

    @property
    def deduced(self) -> list[CDLine]:
        return [ln for ln in self.lines if isinstance(ln.justification, CD)]

    def __len__(self) -> int:
        return len(self.lines)

    def to_text(self) -> str:
        return "\n".join(str(ln) for ln in self.lines) + "\n"


@dataclass(frozen=True)
class Verdict:
    """Outcome of a proof check; truthy iff the proof is valid."""
    ok: bool
    line: int | None = None
    path: tuple[int, ...] | None = None
    reason: str = ""
    expected: Formula | None = None
    found: Formula | None = None

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        if self.ok:
            return "valid"
        where = f"line {self.line}" if self.line is not None else f"node {self.path}"
        msg = f"invalid at {where}: {self.reason}"
        if self.expected is not None:
            msg += f"; expected {self.expected}"
        if self.found is not None:
            msg += f", found {self.found}"
        return msg


VALID = Verdict(True)


def check_cd_proof(p: CDProof) -> Verdict:
    """Replay every line of ``p``.

    Deduced lines are accepted when they are alphabetic variants of the
    condensed detachment of the cited premisses.
    """
    known: dict[int, Formula] = {}
    last = None
    for ln in p.lines:
        if last is not None and ln.id <= last:
            return Verdict(False, ln.id, reason=f"line id not increasing after {last}")
        last = ln.id
        j = ln.justification
        if isinstance(j, Axiom):
            if j.label not in p.system:
                return Verdict(False, ln.id, reason=f"unknown axiom {j.label}")
            ax = p.system[j.label]
            if not is_alphabetic_variant(ax, ln.formula):
                return Verdict(False, ln.id, reason=f"not a variant of axiom {j.label}",
                               expected=ax, found=ln.formula)
        elif isinstance(j, Assumption):
            if not 0 <= j.index < len(p.assumptions):
                return Verdict(False, ln.id, reason=f"no assumption {j.index}")
            if p.assumptions[j.index] != ln.formula:
                return Verdict(False, ln.id, reason="assumption mismatch",
                               expected=p.assumptions[j.index], found=ln.formula)
        elif isinstance(j, CD):
            premisses = []
            for ref in (j.major, j.minor):
                f = _resolve_ref(ref, known, p.system)
                if f is None:
                    return Verdict(False, ln.id, reason=f"unresolved reference {ref!r}")
                premisses.append(f)
            out = detach(*premisses)
            if out is None:
                return Verdict(False, ln.id, reason=f"condensed detachment {j} not applicable",
                               found=ln.formula)
            if not is_alphabetic_variant(out, ln.formula):
                return Verdict(False, ln.id, reason=f"wrong conclusion for {j}",
                               expected=out, found=ln.formula)
        else:
            return Verdict(False, ln.id, reason=f"unknown justification {j!r}")
        known[ln.id] = ln.formula
    for f in p.assumptions:
        if variables(f):
            return Verdict(False, None, path=(), reason=f"assumption {f} contains variables")
    return VALID


def _resolve_ref(ref: Ref, known: dict[int, Formula], system: AxiomSystem) -> Formula | None:
    if isinstance(ref, int):
        return known.get(ref)
    return system[ref] if ref in system else None


# -- modus ponens proofs -----------------------------------------------------

@dataclass(frozen=True, eq=False)
class Instance:
    """Leaf: the axiom ``label`` under ``subst``."""
    label: str
    subst: Substitution
    formula: Formula


@dataclass(frozen=True, eq=False)
class Hyp:
    """Leaf: an assumption."""
    formula: Formula


@dataclass(frozen=True, eq=False)
class MP:
    """Modus ponens: ``major.formula`` must be ``i(minor.formula, formula)``."""
    major: "Node"
    minor: "Node"
    formula: Formula


Node = Union[Instance, Hyp, MP]


def instance(system: AxiomSystem, label: str, subst) -> Instance:
    s = subst if isinstance(subst, Substitution) else Substitution(subst)
    return Instance(label, s, s.apply(system[label]))


def mp(major: Node, minor: Node) -> MP:
    """Build an MP node, checking the shapes."""
    f = major.formula
    if type(f) is not Impl or f.ante != minor.formula:
        raise ValueError(f"modus ponens mismatch: {f} applied to {minor.formula}")
    return MP(major, minor, f.cons)


@dataclass(frozen=True)
class MPProof:
    system: AxiomSystem
    root: Node
    assumptions: tuple[Formula, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "assumptions", tuple(self.assumptions))

    @property
    def conclusion(self) -> Formula:
        return self.root.formula

    def node_count(self) -> int:
        """Size of the proof as a tree (shared subtrees counted per use)."""
        counts: dict[int, int] = {}
        for node in _postorder_unique(self.root):
            if isinstance(node, MP):
                counts[id(node)] = 1 + counts[id(node.major)] + counts[id(node.minor)]
            else:
                counts[id(node)] = 1
        return counts[id(self.root)]

    def dag_size(self) -> int:
        return sum(1 for _ in _postorder_unique(self.root))

    def leaves(self) -> list[Node]:
        return [n for n in _postorder_unique(self.root) if not isinstance(n, MP)]


def _postorder_unique(root: Node) -> Iterator[Node]:
    """Each distinct node once, children before parents."""
    seen: set[int] = set()
    stack: list[tuple[Node, bool]] = [(root, False)]
    while stack:
        node, expanded = stack.pop()
        if id(node) in seen:
            continue
        if expanded or not isinstance(node, MP):
            seen.add(id(node))
            yield node
        else:
            stack.append((node, True))
            stack.append((node.minor, False))
            stack.append((node.major, False))


def iter_paths(root: Node) -> Iterator[tuple[tuple[int, ...], Node]]:
    """Tree walk yielding ``(path, node)``; 0 = major, 1 = minor."""
    stack = [((), root)]
    while stack:
        path, node = stack.pop()
        yield path, node
        if isinstance(node, MP):
            stack.append((path + (1,), node.minor))
            stack.append((path + (0,), node.major))


def check_mp_proof(p: MPProof) -> Verdict:
    """Exact check: no variants tolerated anywhere."""
    bad: dict[int, Verdict] = {}
    for node in _postorder_unique(p.root):
        v = _check_node(node, p)
        if v is not None:
            bad[id(node)] = v
    if not bad:
        return VALID
    for path, node in iter_paths(p.root):
        v = bad.get(id(node))
        if v is not None:
            return Verdict(False, path=path, reason=v.reason, expected=v.expected, found=v.found)
    raise AssertionError("unreachable")


def _check_node(node: Node, p: MPProof) -> Verdict | None:
    if isinstance(node, Instance):
        if node.label not in p.system:
            return Verdict(False, reason=f"unknown axiom {node.label}")
        want = node.subst.apply(p.system[node.label])
        if want != node.formula:
            return Verdict(False, reason=f"not the claimed instance of {node.label}",
                           expected=want, found=node.formula)
    elif isinstance(node, Hyp):
        if node.formula not in p.assumptions:
            return Verdict(False, reason="not an assumption", found=node.formula)
    elif isinstance(node, MP):
        maj = node.major.formula
        if type(maj) is not Impl or maj.ante != node.minor.formula:
            return Verdict(False, reason="major premiss is not an implication of the minor",
                           expected=Impl(node.minor.formula, node.formula), found=maj)
        if maj.cons != node.formula:
            return Verdict(False, reason="conclusion differs from consequent of major",
                           expected=maj.cons, found=node.formula)
    else:
        return Verdict(False, reason=f"unknown node {node!r}")
    return None


# -- double-negation reports -------------------------------------------------

@dataclass(frozen=True)
class DnReport:
    """Doubly negated subformulas of the deduced steps of a proof.

    ``per_line`` pairs each deduced step (line id, or node path for MP
    proofs) with its occurrences; ``aggregate`` lists the distinct doubly
    negated formulas up to alphabetic variants; ``violations`` are the
    aggregate members not covered by the ``allowed`` set.
    """
    per_line: tuple[tuple[object, tuple[DnOccurrence, ...]], ...]
    aggregate: tuple[Formula, ...]
    violations: tuple[Formula, ...]

    @property
    def dn_free(self) -> bool:
        return not self.aggregate

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def dn_line_count(self) -> int:
        return sum(1 for _, occ in self.per_line if occ)

    def summary(self) -> dict:
        return {
            "deduced_steps": len(self.per_line),
            "dn_steps": self.dn_line_count,
            "aggregate": [str(f) for f in self.aggregate],
            "violations": [str(f) for f in self.violations],
        }


class _VariantSet:
    def __init__(self, items: Iterable[Formula] = ()):
        self._keys: dict[tuple, Formula] = {}
        for f in items:
            self.add(f)

    def add(self, f: Formula) -> bool:
        k = variant_key(f)
        if k in self._keys:
            return False
        self._keys[k] = f
        return True

    def __contains__(self, f: Formula) -> bool:
        return variant_key(f) in self._keys

    def __iter__(self):
        return iter(self._keys.values())

    def __len__(self):
        return len(self._keys)


def dn_report(p: CDProof | MPProof, allowed: Iterable[Formula] = (),
              include_leaves: bool = False) -> DnReport:
    """Report the double negations in the deduced steps of ``p``.

    ``allowed`` holds doubly negated formulas ``n(n(q))``; any of their
    alphabetic variants is tolerated.  Axiom lines, assumption lines and
    MP leaves are not deduced steps unless ``include_leaves`` is set.
    """
    allow = _VariantSet(allowed)
    steps: list[tuple[object, Formula]] = []
    if isinstance(p, CDProof):
        for ln in p.lines:
            if include_leaves or isinstance(ln.justification, CD):
                steps.append((ln.id, ln.formula))
    else:
        # distinct nodes suffice: a shared node has the same formula everywhere
        paths: dict[int, tuple[int, ...]] = {}
        for path, node in iter_paths(p.root):
            paths.setdefault(id(node), path)
        for node in _postorder_unique(p.root):
            if include_leaves or isinstance(node, MP):
                steps.append((paths[id(node)], node.formula))
    per_line = []
    agg = _VariantSet()
    for key, f in steps:
        occ = tuple(dn_occurrences(f))
        per_line.append((key, occ))
        for o in occ:
            agg.add(o.formula)
    violations = tuple(f for f in agg if f not in allow)
    return DnReport(tuple(per_line), tuple(agg), violations)


def dn_closure(formulas: Iterable[Formula]) -> list[Formula]:
    """All doubly negated subformulas of the given formulas."""
    out = _VariantSet()
    for f in formulas:
        for o in dn_occurrences(f):
            out.add(o.formula)
    return list(out)


# -- listing parser ----------------------------------------------------------

class ListingError(ValueError):
    pass


@dataclass(frozen=True)
class Repair:
    """A correction applied to one line of a verbatim listing.

    ``line`` is the 1-based position of the entry in the listing;
    ``field`` is ``id``, ``major``, ``minor`` or ``formula``.
    """
    line: int
    field: str
    old: str
    new: str
    reason: str = ""

    @classmethod
    def from_dict(cls, d: dict) -> "Repair":
        return cls(int(d["line"]), d["field"], str(d["from"]), str(d["to"]), d.get("reason", ""))

    def to_dict(self) -> dict:
        return {"line": self.line, "field": self.field, "from": self.old, "to": self.new,
                "reason": self.reason}


_ENTRY = re.compile(r"^\s*(\d+)\s*\[\s*([^,\]\s]+)\s*,\s*([^,\]\s]+)\s*\]\s*(\S.*?)\s*$")


@dataclass(frozen=True)
class RawEntry:
    id: str
    major: str
    minor: str
    formula: str


def split_listing(text: str) -> list[RawEntry]:
    """Split listing text into raw entries; ``#`` starts a comment."""
    out = []
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _ENTRY.match(line)
        if not m:
            raise ListingError(f"line {n}: cannot read listing entry {raw!r}")
        out.append(RawEntry(*m.groups()))
    return out


def parse_proof_listing(text: str, system: AxiomSystem, repairs: Iterable[Repair] = (),
                        assumptions: Iterable[Formula] = (), constants: Iterable[str] = (),
                        name: str = "", orient: bool = True) -> CDProof:
    """Build a :class:`CDProof` from ``NN [ref,ref] formula`` lines.

    References are earlier line ids or axiom labels of ``system``.  Repairs
    are applied to the raw fields first.  Machine listings do not always
    cite the major premiss first; with ``orient`` set, a step whose written
    order does not detach but whose reversed order does is stored with its
    premisses swapped.
    """
    entries = split_listing(text)
    for r in repairs:
        if not 1 <= r.line <= len(entries):
            raise ListingError(f"repair refers to missing entry {r.line}")
        e = entries[r.line - 1]
        if r.field not in ("id", "major", "minor", "formula"):
            raise ListingError(f"repair field {r.field!r} unknown")
        current = getattr(e, r.field)
        if current != r.old:
            raise ListingError(f"repair of entry {r.line}: expected {r.field} {r.old!r}, "
                               f"found {current!r}")
        entries[r.line - 1] = RawEntry(**{**e.__dict__, r.field: r.new})

    consts = tuple(constants)
    lines: list[CDLine] = []
    known: dict[int, Formula] = {}
    for pos, e in enumerate(entries, 1):
        line_id = int(e.id)
        if line_id in known:
            raise ListingError(f"entry {pos}: duplicate line id {line_id}")
        if lines and line_id < lines[-1].id:
            raise ListingError(f"entry {pos}: line id {line_id} out of order")
        refs = []
        for tok in (e.major, e.minor):
            if tok.isdigit():
                if int(tok) not in known:
                    raise ListingError(f"entry {pos} (line {line_id}): unknown reference {tok}")
                refs.append(int(tok))
            elif tok in system:
                refs.append(tok)
            else:
                raise ListingError(f"entry {pos} (line {line_id}): unknown reference {tok!r}")
        try:
            f = parse_formula(e.formula, consts)
        except FormulaSyntaxError as exc:
            raise ListingError(f"entry {pos} (line {line_id}): {exc}") from exc
        just = CD(*refs)
        if orient:
            a, b = (_resolve_ref(r, known, system) for r in refs)
            fwd = detach(a, b)
            if fwd is None or not is_alphabetic_variant(fwd, f):
                back = detach(b, a)
                if back is not None and is_alphabetic_variant(back, f):
                    just = CD(refs[1], refs[0])
        lines.append(CDLine(line_id, just, f))
        known[line_id] = f
    return CDProof(system, tuple(lines), tuple(assumptions), name)


# -- serialization -----------------------------------------------------------

def _system_json(s: AxiomSystem) -> dict:
    return {"name": s.name, "logic": s.logic,
            "axioms": [[label, str(f)] for label, f in s.axioms]}


def _system_from_json(d: dict) -> AxiomSystem:
    return AxiomSystem(d["name"], tuple((l, parse_formula(t)) for l, t in d["axioms"]),
                       d.get("logic", "classical"))


def _ref_json(r: Ref):
    return r


def proof_to_dict(p: CDProof | MPProof) -> dict:
    consts: dict[str, None] = {}
    if isinstance(p, CDProof):
        for f in list(p.assumptions) + [ln.formula for ln in p.lines]:
            for c in constants(f):
                consts.setdefault(c)
        lines = []
        for ln in p.lines:
            j = ln.justification
            rec: dict = {"id": ln.id, "formula": str(ln.formula)}
            if isinstance(j, Axiom):
                rec.update(rule="axiom", label=j.label)
            elif isinstance(j, Assumption):
                rec.update(rule="assumption", index=j.index)
            else:
                rec.update(rule="cd", major=_ref_json(j.major), minor=_ref_json(j.minor))
            lines.append(rec)
        return {"format": FORMAT_TAG, "kind": "cd", "name": p.name,
                "system": _system_json(p.system),
                "assumptions": [str(f) for f in p.assumptions],
                "constants": sorted(consts), "lines": lines}
    nodes = []
    ids: dict[int, int] = {}
    for node in _postorder_unique(p.root):
        ids[id(node)] = len(nodes)
        for c in constants(node.formula):
            consts.setdefault(c)
        if isinstance(node, Instance):
            for v in node.subst.values():
                for c in constants(v):
                    consts.setdefault(c)
            rec = {"rule": "instance", "label": node.label, "subst": node.subst.to_text()}
        elif isinstance(node, Hyp):
            rec = {"rule": "hyp"}
        else:
            rec = {"rule": "mp", "major": ids[id(node.major)], "minor": ids[id(node.minor)]}
        rec["id"] = ids[id(node)]
        rec["formula"] = str(node.formula)
        nodes.append(rec)
    for f in p.assumptions:
        for c in constants(f):
            consts.setdefault(c)
    return {"format": FORMAT_TAG, "kind": "mp", "system": _system_json(p.system),
            "assumptions": [str(f) for f in p.assumptions], "constants": sorted(consts),
            "nodes": nodes, "root": ids[id(p.root)]}


def proof_from_dict(d: dict) -> CDProof | MPProof:
    if d.get("format") != FORMAT_TAG:
        raise ValueError(f"unsupported proof format {d.get('format')!r}")
    consts = d.get("constants", [])
    system = d["system"]
    system = get_system(system) if isinstance(system, str) else _system_from_json(system)

    def pf(t: str) -> Formula:
        return parse_formula(t, consts)
    assumptions = tuple(pf(t) for t in d.get("assumptions", []))
    if d["kind"] == "cd":
        lines = []
        for rec in d["lines"]:
            rule = rec["rule"]
            if rule == "axiom":
                j = Axiom(rec["label"])
            elif rule == "assumption":
                j = Assumption(int(rec["index"]))
            elif rule == "cd":
                j = CD(rec["major"], rec["minor"])
            else:
                raise ValueError(f"unknown rule {rule!r}")
            lines.append(CDLine(int(rec["id"]), j, pf(rec["formula"])))
        return CDProof(system, tuple(lines), assumptions, d.get("name", ""))
    if d["kind"] == "mp":
        built: list[Node] = []
        for rec in d["nodes"]:
            f = pf(rec["formula"])
            if rec["rule"] == "instance":
                s = Substitution({k: pf(v) for k, v in rec["subst"].items()})
                built.append(Instance(rec["label"], s, f))
            elif rec["rule"] == "hyp":
                built.append(Hyp(f))
            else:
                built.append(MP(built[rec["major"]], built[rec["minor"]], f))
        return MPProof(system, built[d["root"]], assumptions)
    raise ValueError(f"unknown proof kind {d['kind']!r}")


def dumps(p: CDProof | MPProof) -> str:
    return json.dumps(proof_to_dict(p), sort_keys=True, indent=1) + "\n"


def loads(text: str) -> CDProof | MPProof:
    return proof_from_dict(json.loads(text))


def save(p: CDProof | MPProof, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(p))


def load(path) -> CDProof | MPProof:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())
