"""Regenerate the helper-lemma proofs in src/dnelim/corpus/gadgets.

    python3 tools/make_gadgets.py

Every proof is checked and must be free of double negations before it is
written.
"""
from __future__ import annotations

import pathlib
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))
sys.path.insert(0, str(ROOT / "tools"))

from combinators import P1, P2, app, c, compile_term, lam, to_proof, v  # noqa: E402

from dnelim import corpus  # noqa: E402
from dnelim.derive import GADGETS, ProofBuilder  # noqa: E402
from dnelim.kernel import is_alphabetic_variant  # noqa: E402
from dnelim.proofs import CDProof, check_cd_proof, dn_report, save  # noqa: E402

OUT = ROOT / "src" / "dnelim" / "corpus" / "gadgets"

TERMS = {
    "SYL": lam("f g a", app(v("g"), app(v("f"), v("a")))),
    "D2H": lam("h x", app(c("D2"), app(v("h"), v("x")))),
    "D3H": lam("h k x", app(c("D3"), app(v("h"), v("x")), app(v("k"), v("x")))),
    "P1": P1,
    "P2": P2,
}


def prefix(p: CDProof, last_id: int) -> CDProof:
    return CDProof(p.system, tuple(ln for ln in p.lines if ln.id <= last_id), p.assumptions)


def combinator_refs(system_name: str, b: ProofBuilder) -> dict:
    refs = {"I": b.lemma("D1"), "D2": b.lemma("D2"), "D3": b.lemma("D3")}
    if system_name == "H":
        refs.update(S="H2", K="H1")
    elif system_name == "L":
        d4 = corpus.base_proof("l_d4")
        k = b.splice(prefix(d4, 45))   # i(x,i(y,x))
        cc = b.splice(prefix(d4, 46))  # i(i(x,i(y,z)),i(y,i(x,z)))
        w = b.splice(d4)               # i(i(x,i(x,y)),i(x,y))
        bb = b.cd(cc, "L1")            # i(i(x,y),i(i(z,x),i(z,y)))
        # S = B (B W) (B B C)
        s = b.cd(b.cd(bb, b.cd(bb, w)), b.cd(b.cd(bb, bb), cc))
        refs.update(S=s, K=k)
    else:
        raise ValueError(system_name)
    return refs


def main() -> None:
    OUT.mkdir(exist_ok=True)
    for system_name in ("H", "L"):
        kit = corpus.dkit(system_name)
        for name, term in TERMS.items():
            b = ProofBuilder(kit.system, kit=kit)
            refs = combinator_refs(system_name, b)
            r = to_proof(b, compile_term(term), refs)
            proof = b.finish(r, name=f"{system_name} {name}")
            assert check_cd_proof(proof), name
            assert is_alphabetic_variant(proof.conclusion, GADGETS[name]), (name, proof.conclusion)
            assert dn_report(proof).dn_free, name
            save(proof, OUT / f"{system_name}_{name}.json")
            print(system_name, name, len(proof), "lines")


if __name__ == "__main__":
    main()
