"""Truth-value oracles: two-valued truth tables and exact Łukasiewicz
infinite-valued evaluation.

Values are :class:`fractions.Fraction`; floats never enter, since validity
means taking the value 1 exactly.
"""
from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Iterator, Mapping

from .kernel import Const, Formula, Neg, Var, constants, variables

__all__ = [
    "eval_lukasiewicz", "eval_two_valued", "is_two_valued_tautology",
    "find_finite_counterexample", "random_valuations", "letters",
    "parse_assignment", "UnassignedLetter",
]

ONE = Fraction(1)
ZERO = Fraction(0)


class UnassignedLetter(KeyError):
    pass


def letters(f: Formula) -> list[str]:
    """Proposition letters of ``f`` (variables and constants), in order."""
    return list(dict.fromkeys(variables(f) + constants(f)))


def eval_lukasiewicz(f: Formula, v: Mapping[str, Fraction | int | str]) -> Fraction:
    """Value of ``f``: ``n(p)`` is ``1-p``; ``i(p,q)`` is ``min(1, 1-p+q)``."""
    vals = {k: Fraction(x) for k, x in v.items()}
    for k, x in vals.items():
        if not ZERO <= x <= ONE:
            raise ValueError(f"value of {k} outside [0,1]: {x}")
    memo: dict[Formula, Fraction] = {}
    stack = [f]
    while stack:
        g = stack[-1]
        if g in memo:
            stack.pop()
            continue
        t = type(g)
        if t is Var or t is Const:
            try:
                memo[g] = vals[g.name]
            except KeyError:
                raise UnassignedLetter(g.name) from None
        elif t is Neg:
            if g.arg not in memo:
                stack.append(g.arg)
                continue
            memo[g] = ONE - memo[g.arg]
        else:
            missing = [c for c in (g.ante, g.cons) if c not in memo]
            if missing:
                stack.extend(missing)
                continue
            memo[g] = min(ONE, ONE - memo[g.ante] + memo[g.cons])
        stack.pop()
    return memo[f]


def eval_two_valued(f: Formula, v: Mapping[str, bool | int]) -> bool:
    for k, x in v.items():
        if x not in (0, 1):
            raise ValueError(f"two-valued assignment for {k} must be 0 or 1")
    return eval_lukasiewicz(f, {k: int(x) for k, x in v.items()}) == ONE


def is_two_valued_tautology(f: Formula) -> bool:
    names = letters(f)
    for row in itertools.product((0, 1), repeat=len(names)):
        if eval_lukasiewicz(f, dict(zip(names, row))) != ONE:
            return False
    return True


def find_finite_counterexample(f: Formula, max_n: int) -> tuple[int, dict[str, Fraction]] | None:
    """Smallest ``n <= max_n`` and the first valuation (in lexicographic
    order over ``0, 1/(n-1), ..., 1``) giving ``f`` a value below 1."""
    names = letters(f)
    for n in range(2, max_n + 1):
        grid = [Fraction(k, n - 1) for k in range(n)]
        for row in itertools.product(grid, repeat=len(names)):
            v = dict(zip(names, row))
            if eval_lukasiewicz(f, v) != ONE:
                return n, v
    return None


def random_valuations(names, count: int, seed: int = 0,
                      max_denominator: int = 64) -> Iterator[dict[str, Fraction]]:
    """``count`` seeded random valuations with denominators up to
    ``max_denominator``."""
    rng = random.Random(seed)
    names = list(names)
    for _ in range(count):
        out = {}
        for name in names:
            d = rng.randint(1, max_denominator)
            out[name] = Fraction(rng.randint(0, d), d)
        yield out


def parse_assignment(items) -> dict[str, Fraction]:
    """Parse ``["x=1/2", "y=0"]`` into a valuation."""
    out = {}
    for item in items:
        name, sep, value = item.partition("=")
        if not sep or not name.strip():
            raise ValueError(f"expected letter=value, got {item!r}")
        out[name.strip()] = Fraction(value.strip())
    return out
