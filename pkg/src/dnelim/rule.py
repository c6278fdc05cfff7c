"""The condensed detachment rule."""
from __future__ import annotations

from .kernel import Formula, Impl, normalize_variables, rename_apart, substitute, unify_bindings


class CDError(ValueError):
    """Condensed detachment is not applicable to the given premisses."""


def detach(major: Formula, minor: Formula) -> Formula | None:
    """Condensed detachment, returning ``None`` when it does not apply."""
    if type(major) is not Impl:
        return None
    minor = rename_apart(major, minor)
    mgu = unify_bindings(major.ante, minor)
    if mgu is None:
        return None
    return normalize_variables(substitute(major.cons, mgu))


def condensed_detach(major: Formula, minor: Formula) -> Formula:
    """Detach ``minor`` from ``major = i(A,B)``.

    The minor premiss is renamed apart from the major, ``A`` is unified with
    it, and the instantiated ``B`` is returned with its variables renamed to
    x, y, z, u, v, w, v6, ... in order of first occurrence.
    """
    if type(major) is not Impl:
        raise CDError(f"major premiss is not an implication: {major}")
    out = detach(major, minor)
    if out is None:
        raise CDError(f"antecedent of {major} does not unify with {minor}")
    return out
