"""Build condensed-detachment proofs from combinator terms.

Condensed detachment computes the principal type of an application, so a
combinator term over proved S, K and I lemmas yields a proof of its
principal type.  Used offline to produce the helper-lemma proofs shipped in
``src/dnelim/corpus/gadgets``.

Terms: ("v", name) | ("app", M, N) | ("lam", name, M) | ("c", combinator)
"""
from __future__ import annotations


def v(name):
    return ("v", name)


def c(name):
    return ("c", name)


def app(*ts):
    out = ts[0]
    for t in ts[1:]:
        out = ("app", out, t)
    return out


def lam(names, body):
    for name in reversed(names.split()):
        body = ("lam", name, body)
    return body


def free(t):
    if t[0] == "v":
        return {t[1]}
    if t[0] == "c":
        return set()
    if t[0] == "app":
        return free(t[1]) | free(t[2])
    return free(t[2]) - {t[1]}


def abstract(x, t):
    """Bracket abstraction [x]t for a lambda-free t."""
    if x not in free(t):
        return app(c("K"), t)
    if t == ("v", x):
        return c("I")
    return app(c("S"), abstract(x, t[1]), abstract(x, t[2]))


def compile_term(t):
    if t[0] in ("v", "c"):
        return t
    if t[0] == "app":
        return ("app", compile_term(t[1]), compile_term(t[2]))
    return abstract(t[1], compile_term(t[2]))


def to_proof(builder, t, refs):
    """CD line for the combinator term ``t``; ``refs`` maps combinator names
    to builder references."""
    if t[0] == "c":
        return refs[t[1]]
    if t[0] == "app":
        return builder.cd(to_proof(builder, t[1], refs), to_proof(builder, t[2], refs))
    raise ValueError(f"free variable or lambda left in {t}")


# lambda terms whose principal types are the helper lemmas
P1 = lam("f a", app(c("K"), v("a"), lam("g", app(v("f"), app(v("f"), v("g")), v("a")))))
P2 = lam("f b", app(c("K"), v("b"),
                    lam("a", app(v("f"), app(v("f"), app(c("K"), v("b"))), v("a")))))
