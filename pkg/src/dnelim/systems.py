"""Registry of the axiom systems and named formulas used throughout."""
from __future__ import annotations

from dataclasses import dataclass, field

from .kernel import Formula, constants, is_alphabetic_variant, parse_formula


@dataclass(frozen=True)
class AxiomSystem:
    name: str
    axioms: tuple[tuple[str, Formula], ...]
    # classical / lukasiewicz / intuitionistic: which semantics the system is sound for
    logic: str = "classical"
    _index: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        axioms = tuple((str(label), f) for label, f in self.axioms)
        object.__setattr__(self, "axioms", axioms)
        index = {}
        for label, f in axioms:
            if label in index:
                raise ValueError(f"duplicate axiom label {label!r} in {self.name}")
            if constants(f):
                raise ValueError(f"axiom {label} contains constant letters")
            index[label] = f
        object.__setattr__(self, "_index", index)

    @property
    def labels(self) -> list[str]:
        return [label for label, _ in self.axioms]

    @property
    def formulas(self) -> list[Formula]:
        return [f for _, f in self.axioms]

    def __contains__(self, label: str) -> bool:
        return label in self._index

    def __getitem__(self, label: str) -> Formula:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"no axiom {label!r} in system {self.name}") from None

    def __len__(self) -> int:
        return len(self.axioms)

    def label_of(self, f: Formula) -> str | None:
        """Label of an axiom that is an alphabetic variant of ``f``."""
        for label, g in self.axioms:
            if is_alphabetic_variant(f, g):
                return label
        return None

    def extend(self, more: list[tuple[str, Formula]], name: str | None = None) -> "AxiomSystem":
        return AxiomSystem(name or self.name + "+" + ",".join(l for l, _ in more),
                           self.axioms + tuple(more), self.logic)

    def restrict(self, labels: list[str], name: str | None = None) -> "AxiomSystem":
        return AxiomSystem(name or self.name, tuple((l, self[l]) for l in labels), self.logic)


def _p(text: str) -> Formula:
    return parse_formula(text)


FORMULAS: dict[str, Formula] = {
    # Lukasiewicz's system L and its star closure
    "L1": _p("i(i(x,y),i(i(y,z),i(x,z)))"),
    "L2": _p("i(i(n(x),x),x)"),
    "L3": _p("i(x,i(n(x),y))"),
    "L4": _p("i(i(x,n(x)),n(x))"),
    "L5": _p("i(n(x),i(x,y))"),
    # infinite-valued logic and its star closure
    "A1": _p("i(x,i(y,x))"),
    "A2": _p("i(i(x,y),i(i(y,z),i(x,z)))"),
    "A3": _p("i(i(i(x,y),y),i(i(y,x),x))"),
    "A4": _p("i(i(n(x),n(y)),i(y,x))"),
    "A6": _p("i(i(x,y),i(n(y),n(x)))"),
    "A7": _p("i(i(n(x),y),i(n(y),x))"),
    "A8": _p("i(i(x,n(y)),i(y,n(x)))"),
    # intuitionistic implication-negation fragment
    "H1": _p("i(x,i(y,x))"),
    "H2": _p("i(i(x,i(y,z)),i(i(x,y),i(x,z)))"),
    "H3": _p("i(i(x,n(x)),n(x))"),
    "H4": _p("i(x,i(n(x),y))"),
    # lemmas
    "D1": _p("i(x,x)"),
    "D2": _p("i(i(x,x),i(n(x),n(x)))"),
    "D3": _p("i(i(x,x),i(i(y,y),i(i(x,y),i(x,y))))"),
    "D4": _p("i(i(x,i(x,y)),i(x,y))"),
    "D5": _p("i(i(x,y),i(n(y),n(x)))"),
    # Frege's six axioms
    "F1": _p("i(x,i(y,x))"),
    "F2": _p("i(x,n(n(x)))"),
    "F3": _p("i(n(n(x)),x)"),
    "F4": _p("i(i(x,i(y,z)),i(i(x,y),i(x,z)))"),
    "F5": _p("i(i(x,y),i(n(y),n(x)))"),
    "F6": _p("i(i(x,i(y,z)),i(y,i(x,z)))"),
    # Meredith's single axiom
    "M": _p("i(i(i(i(i(x,y),i(n(z),n(u))),z),v),i(i(v,x),i(u,x)))"),
    # Ulrich's forcing system and its forced consequences
    "U1": _p("i(x,x)"),
    "U2": _p("i(i(x,x),i(n(x),i(n(x),n(x))))"),
    "U3": _p("i(i(x,i(x,x)),i(n(x),i(n(x),i(n(x),n(x)))))"),
    # printed with "(v)" in place of "n(v)"; only n(v) makes step 7 Meredith's axiom
    "U4": _p("i(i(x,i(x,i(x,x))),i(i(i(i(i(y,z),i(n(u),n(v))),u),w),i(i(w,y),i(v,y))))"),
    "U5": _p("i(n(x),i(n(x),n(x)))"),
    "U6": _p("i(n(n(x)),i(n(n(x)),i(n(n(x)),n(n(x)))))"),
    # the double-negation-free theorem of infinite-valued logic used as a search target
    "DN1": _p("i(i(n(x),n(i(i(n(y),n(z)),n(z)))),"
              "n(i(i(n(i(n(x),y)),n(i(n(x),z))),n(i(n(x),z)))))"),
    # classical but not intuitionistic
    "PEIRCE": _p("i(i(i(x,y),x),x)"),
}


def _system(name: str, labels: list[str], logic: str, rename: dict[str, str] | None = None) -> AxiomSystem:
    rename = rename or {}
    return AxiomSystem(name, tuple((rename.get(l, l), FORMULAS[l]) for l in labels), logic)


SYSTEMS: dict[str, AxiomSystem] = {
    "L": _system("L", ["L1", "L2", "L3"], "classical"),
    "Lstar": _system("Lstar", ["L1", "L2", "L3", "L4", "L5"], "classical"),
    "A": _system("A", ["A1", "A2", "A3", "A4"], "lukasiewicz"),
    "Astar": _system("Astar", ["A1", "A2", "A3", "A4", "A6", "A7", "A8"], "lukasiewicz"),
    "H": _system("H", ["H1", "H2", "H3", "H4"], "intuitionistic"),
    "frege": _system("frege", ["F1", "F2", "F3", "F4", "F5", "F6"], "classical"),
    "M": _system("M", ["M"], "classical"),
    "ulrich": _system("ulrich", ["U1", "U2", "U3", "U4"], "classical",
                      {"U1": "A1", "U2": "A2", "U3": "A3", "U4": "A4"}),
}


def get_system(name: str) -> AxiomSystem:
    try:
        return SYSTEMS[name]
    except KeyError:
        raise KeyError(f"unknown axiom system {name!r}; known: {', '.join(SYSTEMS)}") from None


def named(label: str) -> Formula:
    return FORMULAS[label]
