"""Proofs over L1--L3 with doubly negated steps but double-negation-free
conclusions, produced by saturation with double-negation avoidance off."""
from functools import lru_cache

from dnelim.kernel import has_double_negation, parse_formula, variant_key
from dnelim.proofs import dn_report
from dnelim.search import SearchConfig, saturate
from dnelim.systems import get_system

RUNS = (
    ("i(n(n(x)),x)", 16, 3000),
    ("i(x,n(n(x)))", 16, 3000),
    ("i(i(x,y),i(n(y),n(x)))", 18, 3000),
)


@lru_cache(maxsize=None)
def dn_step_proofs(runs: int = len(RUNS)):
    system = get_system("L")
    found = {}
    for goal, w, cap in RUNS[:runs]:
        cfg = SearchConfig(max_weight=w, max_retained=cap, dn_avoidance=False)
        r = saturate(system, parse_formula(goal), cfg)
        for k, f in enumerate(r.retained):
            key = variant_key(f)
            if has_double_negation(f) or key in found:
                continue
            p = r.proof_at(k)
            if not dn_report(p).dn_free:
                found[key] = p
    return tuple(found.values())
