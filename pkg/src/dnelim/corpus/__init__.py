"""Shipped proof listings, their repair tables, and helper-lemma proofs.

Listings are kept verbatim (modulo typesetting) in ``listings/``; every
correction lives in a separate file under ``repairs/`` so the original text
stays auditable.  ``index.json`` describes each entry.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from ..proofs import CDProof, Repair, load, parse_proof_listing
from ..systems import AxiomSystem, get_system, named


@dataclass(frozen=True)
class CorpusEntry:
    id: str
    system: AxiomSystem
    listing: str
    repairs: tuple[Repair, ...]
    goal: str
    deduced_lines: int
    expect_valid: bool
    expect_dn_free: bool
    lemmas: tuple[tuple[str, str], ...] = ()

    @property
    def goal_formula(self):
        return named(self.goal)

    @property
    def checked_system(self) -> AxiomSystem:
        """The system the listing cites: the base plus any lemma labels."""
        if not self.lemmas:
            return self.system
        return self.system.extend([(label, named(label)) for label, _ in self.lemmas])


def _read(rel: str) -> str:
    return resources.files(__name__).joinpath(rel).read_text(encoding="utf-8")


@lru_cache(maxsize=None)
def entries() -> dict[str, CorpusEntry]:
    out = {}
    for rec in json.loads(_read("index.json")):
        repairs = ()
        if rec.get("repairs"):
            repairs = tuple(Repair.from_dict(d) for d in json.loads(_read(rec["repairs"])))
        out[rec["id"]] = CorpusEntry(
            id=rec["id"], system=get_system(rec["system"]), listing=_read(rec["listing"]),
            repairs=repairs, goal=rec["goal"], deduced_lines=rec["deduced_lines"],
            expect_valid=rec["expect_valid"], expect_dn_free=rec["expect_dn_free"],
            lemmas=tuple(sorted(rec.get("lemmas", {}).items())))
    return out


def entry(entry_id: str) -> CorpusEntry:
    try:
        return entries()[entry_id]
    except KeyError:
        raise KeyError(f"no corpus entry {entry_id!r}") from None


@lru_cache(maxsize=None)
def proof(entry_id: str) -> CDProof:
    """The repaired listing, checked against the system it cites."""
    e = entry(entry_id)
    return parse_proof_listing(e.listing, e.checked_system, e.repairs, name=e.id)


@lru_cache(maxsize=None)
def base_proof(entry_id: str) -> CDProof:
    """Like :func:`proof`, with cited lemmas replaced by their own proofs."""
    e = entry(entry_id)
    p = proof(entry_id)
    if not e.lemmas:
        return p
    from ..derive import splice_lemmas
    return splice_lemmas(p, e.system, {label: base_proof(src) for label, src in e.lemmas})


@lru_cache(maxsize=None)
def gadget(system_name: str, lemma: str) -> CDProof | None:
    """A stored proof of a helper lemma, if one ships for ``system_name``."""
    path = resources.files(__name__).joinpath("gadgets", f"{system_name}_{lemma}.json")
    if not path.is_file():
        return None
    with resources.as_file(path) as real:
        return load(real)


KIT_SOURCES = {
    "L": {"D1": "l_d1", "D2": "l_d2_ulrich", "D3": "l_d3"},
    "A": {"D1": "a_d1", "D2": "a_d2", "D3": "a_d3"},
    "H": {"D1": "h_d1", "D2": "h_d2", "D3": "h_d3"},
}


@lru_cache(maxsize=None)
def dkit(system_name: str):
    """The D1--D3 kit of ``system_name`` with whatever helper lemmas ship."""
    from ..derive import GADGETS, DKit
    try:
        sources = KIT_SOURCES[system_name]
    except KeyError:
        raise KeyError(f"no D1--D3 proofs ship for system {system_name!r}") from None
    proofs = {name: base_proof(src) for name, src in sources.items()}
    for g in GADGETS:
        p = gadget(system_name, g)
        if p is not None:
            proofs[g] = p
    return DKit(get_system(system_name), proofs)


STAR_SOURCES = {
    "L": {"L4": "l_l4", "L5": "l_l5"},
    "A": {"A6": "a_a6", "A7": "a_a7", "A8": "a_a8"},
}


@lru_cache(maxsize=None)
def star_kit(system_name: str):
    """The star axioms of ``system_name`` with their shipped proofs."""
    from ..transform import StarKit
    try:
        sources = STAR_SOURCES[system_name]
    except KeyError:
        raise KeyError(f"no star-axiom proofs ship for system {system_name!r}") from None
    return StarKit.build(get_system(system_name),
                         {label: base_proof(src) for label, src in sources.items()})
