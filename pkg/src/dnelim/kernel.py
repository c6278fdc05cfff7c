"""Formulas over implication ``i`` and negation ``n``.

Formulas are immutable trees built from :class:`Var`, :class:`Const`,
:class:`Neg` and :class:`Impl`.  Variables may be substituted for; constants
(the letters of assumptions) never are.  Text syntax is OTTER-style prefix
notation::

    formula := ident | "n(" formula ")" | "i(" formula "," formula ")"

Identifiers are ASCII letters and digits starting with a letter.  Whether an
identifier is a variable or a constant is decided by the ``constants``
registry passed to :func:`parse_formula`, never by its spelling.
"""
from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass

__all__ = [
    "Formula", "Var", "Const", "Neg", "Impl",
    "FormulaSyntaxError", "parse_formula", "formula", "letter_count",
    "Substitution", "substitute", "unify", "match_instance",
    "rename_apart", "normalize_variables", "variant_key",
    "is_alphabetic_variant", "variables", "constants", "subformulas",
    "DnOccurrence", "dn_occurrences", "dn_subformulas", "has_double_negation",
    "erase_double_negations", "erase_where", "freeze", "thaw",
]


class Formula:
    """Base class of formula nodes.  Hash and size are computed once."""

    __slots__ = ("_hash", "size")

    def __str__(self) -> str:
        out: list[str] = []
        _write(self, out)
        return "".join(out)

    def __repr__(self) -> str:
        return f"{type(self).__name__}<{self}>"

    def __hash__(self) -> int:
        return self._hash

    def __setattr__(self, name, value):
        raise AttributeError("formulas are immutable")

    def __reduce__(self):
        return (type(self), tuple(getattr(self, s) for s in self.__match_args__))


class Var(Formula):
    __slots__ = ("name",)
    __match_args__ = ("name",)

    def __init__(self, name: str):
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "size", 1)
        object.__setattr__(self, "_hash", hash(("v", name)))

    __hash__ = Formula.__hash__

    def __eq__(self, other):
        return self is other or (type(other) is Var and other.name == self.name)


class Const(Formula):
    __slots__ = ("name",)
    __match_args__ = ("name",)

    def __init__(self, name: str):
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "size", 1)
        object.__setattr__(self, "_hash", hash(("c", name)))

    __hash__ = Formula.__hash__

    def __eq__(self, other):
        return self is other or (type(other) is Const and other.name == self.name)


class Neg(Formula):
    __slots__ = ("arg",)
    __match_args__ = ("arg",)

    def __init__(self, arg: Formula):
        object.__setattr__(self, "arg", arg)
        object.__setattr__(self, "size", arg.size + 1)
        object.__setattr__(self, "_hash", hash(("n", arg._hash)))

    __hash__ = Formula.__hash__

    def __eq__(self, other):
        if self is other:
            return True
        return type(other) is Neg and other._hash == self._hash and _equal(self, other)


class Impl(Formula):
    __slots__ = ("ante", "cons")
    __match_args__ = ("ante", "cons")

    def __init__(self, ante: Formula, cons: Formula):
        object.__setattr__(self, "ante", ante)
        object.__setattr__(self, "cons", cons)
        object.__setattr__(self, "size", ante.size + cons.size + 1)
        object.__setattr__(self, "_hash", hash(("i", ante._hash, cons._hash)))

    __hash__ = Formula.__hash__

    def __eq__(self, other):
        if self is other:
            return True
        return type(other) is Impl and other._hash == self._hash and _equal(self, other)


def _equal(a: Formula, b: Formula) -> bool:
    """Structural equality without recursion (formulas may be very deep)."""
    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        if x is y:
            continue
        tx = type(x)
        if tx is not type(y) or x._hash != y._hash:
            return False
        if tx is Impl:
            stack.append((x.ante, y.ante))
            stack.append((x.cons, y.cons))
        elif tx is Neg:
            stack.append((x.arg, y.arg))
        elif x.name != y.name:
            return False
    return True


def _write(f: Formula, out: list[str]) -> None:
    stack: list[object] = [f]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            out.append(item)
        elif type(item) is Impl:
            out.append("i(")
            stack.extend((")", item.cons, ",", item.ante))
        elif type(item) is Neg:
            out.append("n(")
            stack.extend((")", item.arg))
        else:
            out.append(item.name)


def letter_count(f: Formula) -> int:
    """Number of symbol occurrences: each ``i``, ``n`` and letter counts one."""
    return f.size


# -- parsing -----------------------------------------------------------------

class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, text: str, position: int):
        super().__init__(f"{message} at position {position}: {text!r}")
        self.text = text
        self.position = position


def parse_formula(text: str, constants: Iterable[str] = ()) -> Formula:
    """Parse prefix notation; identifiers listed in ``constants`` become
    :class:`Const`, every other identifier a :class:`Var`."""
    consts = frozenset(constants)
    src = "".join(text.split())
    pos = 0
    n = len(src)

    def expect(ch: str) -> None:
        nonlocal pos
        if pos >= n:
            raise FormulaSyntaxError(f"unbalanced parentheses: expected {ch!r}", text, pos)
        if src[pos] != ch:
            raise FormulaSyntaxError(f"expected {ch!r}, found {src[pos]!r}", text, pos)
        pos += 1

    def ident() -> str:
        nonlocal pos
        start = pos
        if pos >= n or not src[pos].isascii() or not src[pos].isalpha():
            found = src[pos] if pos < n else "end of input"
            raise FormulaSyntaxError(f"expected identifier, found {found!r}", text, pos)
        while pos < n and src[pos].isascii() and src[pos].isalnum():
            pos += 1
        return src[start:pos]

    # Explicit stack so that deep formulas do not hit the recursion limit.
    def parse() -> Formula:
        nonlocal pos
        ops: list[str] = []
        args: list[Formula] = []
        while True:
            name = ident()
            if pos < n and src[pos] == "(" and name in ("i", "n"):
                pos += 1
                ops.append(name)
                continue
            args.append(Const(name) if name in consts else Var(name))
            # reduce finished applications
            while ops:
                op = ops[-1]
                if op == "n":
                    expect(")")
                    ops.pop()
                    args.append(Neg(args.pop()))
                elif op == "i":
                    expect(",")
                    ops[-1] = "i2"
                    break
                else:  # second argument of i(...) complete
                    expect(")")
                    ops.pop()
                    cons = args.pop()
                    args.append(Impl(args.pop(), cons))
            else:
                return args.pop()

    result = parse()
    if pos != n:
        if src[pos] == ")":
            raise FormulaSyntaxError("unbalanced parentheses: unexpected ')'", text, pos)
        raise FormulaSyntaxError(f"trailing input {src[pos:]!r}", text, pos)
    return result


formula = parse_formula


# -- traversal ---------------------------------------------------------------

def subformulas(f: Formula) -> Iterator[Formula]:
    """Preorder iteration over all (not necessarily proper) subformulas."""
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        if type(g) is Impl:
            stack.append(g.cons)
            stack.append(g.ante)
        elif type(g) is Neg:
            stack.append(g.arg)


def variables(f: Formula) -> list[str]:
    """Variable names in order of first occurrence."""
    seen: dict[str, None] = {}
    for g in subformulas(f):
        if type(g) is Var:
            seen.setdefault(g.name)
    return list(seen)


def constants(f: Formula) -> list[str]:
    seen: dict[str, None] = {}
    for g in subformulas(f):
        if type(g) is Const:
            seen.setdefault(g.name)
    return list(seen)


def freeze(f: Formula, names: Iterable[str] | None = None) -> Formula:
    """Turn variables (all, or those in ``names``) into constants."""
    keep = None if names is None else frozenset(names)

    def go(g: Formula) -> Formula:
        if type(g) is Var:
            return Const(g.name) if keep is None or g.name in keep else g
        if type(g) is Neg:
            a = go(g.arg)
            return g if a is g.arg else Neg(a)
        if type(g) is Impl:
            a, b = go(g.ante), go(g.cons)
            return g if a is g.ante and b is g.cons else Impl(a, b)
        return g
    return go(f)


def thaw(f: Formula, names: Iterable[str] | None = None) -> Formula:
    """Inverse of :func:`freeze`."""
    keep = None if names is None else frozenset(names)

    def go(g: Formula) -> Formula:
        if type(g) is Const:
            return Var(g.name) if keep is None or g.name in keep else g
        if type(g) is Neg:
            a = go(g.arg)
            return g if a is g.arg else Neg(a)
        if type(g) is Impl:
            a, b = go(g.ante), go(g.cons)
            return g if a is g.ante and b is g.cons else Impl(a, b)
        return g
    return go(f)


# -- substitutions -----------------------------------------------------------

def substitute(f: Formula, bindings: Mapping[str, Formula]) -> Formula:
    """Apply a variable binding map simultaneously (no chasing)."""
    if not bindings:
        return f
    # iterative, with shared subterms rewritten once
    done: dict[int, Formula] = {}
    stack = [f]
    while stack:
        g = stack[-1]
        key = id(g)
        if key in done:
            stack.pop()
            continue
        t = type(g)
        if t is Var:
            done[key] = bindings.get(g.name, g)
        elif t is Impl:
            a, b = done.get(id(g.ante)), done.get(id(g.cons))
            if a is None or b is None:
                if a is None:
                    stack.append(g.ante)
                if b is None:
                    stack.append(g.cons)
                continue
            done[key] = g if a is g.ante and b is g.cons else Impl(a, b)
        elif t is Neg:
            a = done.get(id(g.arg))
            if a is None:
                stack.append(g.arg)
                continue
            done[key] = g if a is g.arg else Neg(a)
        else:
            done[key] = g
        stack.pop()
    return done[id(f)]


class Substitution(Mapping[str, Formula]):
    """Immutable finite map from variable names to formulas."""

    __slots__ = ("_map",)

    def __init__(self, bindings: Mapping[str, Formula] | Iterable[tuple[str, Formula]] = ()):
        m = dict(bindings)
        # trivial bindings x -> x carry no information
        self._map = {k: v for k, v in m.items() if not (type(v) is Var and v.name == k)}

    def __getitem__(self, key: str) -> Formula:
        return self._map[key]

    def __iter__(self):
        return iter(self._map)

    def __len__(self) -> int:
        return len(self._map)

    def __eq__(self, other):
        if isinstance(other, Substitution):
            return self._map == other._map
        if isinstance(other, Mapping):
            return self._map == Substitution(other)._map
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._map.items()))

    def __repr__(self) -> str:
        body = ", ".join(f"{k}↦{v}" for k, v in sorted(self._map.items()))
        return "{" + body + "}"

    def apply(self, f: Formula) -> Formula:
        return substitute(f, self._map)

    __call__ = apply

    def compose(self, other: Mapping[str, Formula]) -> "Substitution":
        """``self`` then ``other``: ``f.compose(g)(t) == g(f(t))``."""
        out = {k: substitute(v, other) for k, v in self._map.items()}
        for k, v in other.items():
            out.setdefault(k, v)
        return Substitution(out)

    def restrict(self, names: Iterable[str]) -> "Substitution":
        keep = set(names)
        return Substitution({k: v for k, v in self._map.items() if k in keep})

    def is_idempotent(self) -> bool:
        return all(substitute(v, self._map) == v for v in self._map.values())

    def to_text(self) -> dict[str, str]:
        return {k: str(v) for k, v in sorted(self._map.items())}


def _walk(t: Formula, s: dict[str, Formula]) -> Formula:
    while type(t) is Var and t.name in s:
        t = s[t.name]
    return t


def _occurs(name: str, t: Formula, s: dict[str, Formula]) -> bool:
    stack = [t]
    while stack:
        g = _walk(stack.pop(), s)
        tg = type(g)
        if tg is Var:
            if g.name == name:
                return True
        elif tg is Impl:
            stack.append(g.ante)
            stack.append(g.cons)
        elif tg is Neg:
            stack.append(g.arg)
    return False


def _resolve(t: Formula, s: dict[str, Formula]) -> Formula:
    t = _walk(t, s)
    tt = type(t)
    if tt is Impl:
        a, b = _resolve(t.ante, s), _resolve(t.cons, s)
        return t if a is t.ante and b is t.cons else Impl(a, b)
    if tt is Neg:
        a = _resolve(t.arg, s)
        return t if a is t.arg else Neg(a)
    return t


def unify_bindings(a: Formula, b: Formula) -> dict[str, Formula] | None:
    """Most general unifier as a plain idempotent dict, or ``None``."""
    s: dict[str, Formula] = {}
    stack = [(a, b)]
    while stack:
        p, q = stack.pop()
        p = _walk(p, s)
        q = _walk(q, s)
        if p is q:
            continue
        tp, tq = type(p), type(q)
        if tp is Var:
            if tq is Var and q.name == p.name:
                continue
            if _occurs(p.name, q, s):
                return None
            s[p.name] = q
        elif tq is Var:
            if _occurs(q.name, p, s):
                return None
            s[q.name] = p
        elif tp is not tq:
            return None
        elif tp is Impl:
            stack.append((p.cons, q.cons))
            stack.append((p.ante, q.ante))
        elif tp is Neg:
            stack.append((p.arg, q.arg))
        elif p.name != q.name:  # two constants
            return None
    return {k: _resolve(v, s) for k, v in s.items()}


def unify(a: Formula, b: Formula) -> Substitution | None:
    """Most general unifier of ``a`` and ``b`` (with occurs check).

    Returns ``None`` when the formulas do not unify.  Variables shared by
    ``a`` and ``b`` are the same variable; use :func:`rename_apart` first
    when that is not intended.
    """
    s = unify_bindings(a, b)
    return None if s is None else Substitution(s)


def match_bindings(pattern: Formula, target: Formula,
                   s: dict[str, Formula] | None = None) -> dict[str, Formula] | None:
    s = {} if s is None else s
    stack = [(pattern, target)]
    while stack:
        p, t = stack.pop()
        tp = type(p)
        if tp is Var:
            bound = s.get(p.name)
            if bound is None:
                s[p.name] = t
            elif bound != t:
                return None
        elif tp is not type(t):
            return None
        elif tp is Impl:
            stack.append((p.cons, t.cons))
            stack.append((p.ante, t.ante))
        elif tp is Neg:
            stack.append((p.arg, t.arg))
        elif p.name != t.name:
            return None
    return s


def match_instance(pattern: Formula, target: Formula) -> Substitution | None:
    """One-sided matching: ``σ`` with ``pattern·σ == target`` or ``None``.

    Variables of ``target`` are treated as fixed symbols.
    """
    s = match_bindings(pattern, target)
    return None if s is None else Substitution(s)


# -- variable naming ---------------------------------------------------------

_STANDARD_NAMES = ("x", "y", "z", "u", "v", "w")


def standard_name(i: int) -> str:
    return _STANDARD_NAMES[i] if i < len(_STANDARD_NAMES) else f"v{i}"


def normalize_variables(f: Formula) -> Formula:
    """Rename variables to x, y, z, u, v, w, v6, ... by first occurrence."""
    names = variables(f)
    mapping = {old: standard_name(i) for i, old in enumerate(names)}
    if all(k == v for k, v in mapping.items()):
        return f
    return substitute(f, {k: Var(v) for k, v in mapping.items()})


def variant_key(f: Formula) -> tuple:
    """Hashable key equal for exactly the alphabetic variants of ``f``."""
    numbering: dict[str, int] = {}
    out: list[object] = []
    stack = [f]
    while stack:
        g = stack.pop()
        tg = type(g)
        if tg is Impl:
            out.append(-1)
            stack.append(g.cons)
            stack.append(g.ante)
        elif tg is Neg:
            out.append(-2)
            stack.append(g.arg)
        elif tg is Var:
            out.append(numbering.setdefault(g.name, len(numbering)))
        else:
            out.append(g.name)
    return tuple(out)


def is_alphabetic_variant(a: Formula, b: Formula) -> bool:
    """True iff a bijective renaming of variables maps ``a`` onto ``b``."""
    return a.size == b.size and variant_key(a) == variant_key(b)


def rename_apart(keep: Formula, rename: Formula, prefix: str = "v") -> Formula:
    """Return a variant of ``rename`` sharing no variable with ``keep``.

    If the two already share no variable, ``rename`` is returned unchanged.
    Otherwise every variable of ``rename`` gets the fresh name
    ``prefix + k`` for the smallest unused indices ``k = 1, 2, ...``.
    """
    kept = set(variables(keep))
    names = variables(rename)
    if kept.isdisjoint(names):
        return rename
    used = kept | set(names)
    mapping: dict[str, Formula] = {}
    k = 1
    for old in names:
        while f"{prefix}{k}" in used:
            k += 1
        mapping[old] = Var(f"{prefix}{k}")
        used.add(f"{prefix}{k}")
    return substitute(rename, mapping)


# -- double negations --------------------------------------------------------

Position = tuple[int, ...]


@dataclass(frozen=True)
class DnOccurrence:
    """All positions of ``n(n(subformula))`` inside one host formula."""
    subformula: Formula
    positions: tuple[Position, ...]

    @property
    def formula(self) -> Formula:
        return Neg(Neg(self.subformula))


def dn_occurrences(f: Formula) -> list[DnOccurrence]:
    """Every doubly negated subformula of ``f``, grouped by the negated ``q``.

    Positions are paths of child indices (0 = antecedent or negated
    argument, 1 = consequent).  Groups appear in preorder of first
    occurrence; grouping uses literal equality.
    """
    groups: dict[Formula, list[Position]] = {}
    stack: list[tuple[Formula, Position]] = [(f, ())]
    while stack:
        g, path = stack.pop()
        tg = type(g)
        if tg is Neg:
            if type(g.arg) is Neg:
                groups.setdefault(g.arg.arg, []).append(path)
            stack.append((g.arg, path + (0,)))
        elif tg is Impl:
            stack.append((g.cons, path + (1,)))
            stack.append((g.ante, path + (0,)))
    return [DnOccurrence(q, tuple(ps)) for q, ps in groups.items()]


def dn_subformulas(f: Formula) -> list[Formula]:
    """The distinct doubly negated subformulas ``n(n(q))`` of ``f``."""
    return [occ.formula for occ in dn_occurrences(f)]


def has_double_negation(f: Formula) -> bool:
    for g in subformulas(f):
        if type(g) is Neg and type(g.arg) is Neg:
            return True
    return False


def erase_where(f: Formula, erase, memo: dict | None = None) -> Formula:
    """Bottom-up erasure: ``n(n(t))`` becomes ``t`` whenever ``erase(t)``.

    Arguments are erased before their parents, so the result never contains
    a double negation ``n(n(t))`` with ``erase(t)`` true.  Implications are
    preserved, which is what keeps modus ponens steps valid under erasure.
    """
    memo = {} if memo is None else memo

    def go(g: Formula) -> Formula:
        hit = memo.get(g)
        if hit is not None:
            return hit
        tg = type(g)
        if tg is Impl:
            a, b = go(g.ante), go(g.cons)
            out = g if a is g.ante and b is g.cons else Impl(a, b)
        elif tg is Neg:
            a = go(g.arg)
            if type(a) is Neg and erase(a.arg):
                out = a.arg
            else:
                out = g if a is g.arg else Neg(a)
        else:
            out = g
        memo[g] = out
        return out
    return go(f)


def erase_double_negations(f: Formula, selection: Iterable[Formula]) -> Formula:
    """Replace every ``n(n(q))`` with ``q`` for the selected ``q``.

    Erasure runs innermost first, so nested selected double negations such
    as ``n(n(n(n(x))))`` cancel completely.

    Raises :class:`ValueError` if some selected ``q`` does not occur doubly
    negated in ``f``.
    """
    chosen = frozenset(selection)
    present = {occ.subformula for occ in dn_occurrences(f)}
    missing = [q for q in chosen if q not in present]
    if missing:
        raise ValueError(
            "not doubly negated in formula: " + ", ".join(sorted(map(str, missing))))
    return erase_where(f, chosen.__contains__)
