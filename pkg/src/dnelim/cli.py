"""Command-line interface.

Exit codes: 0 on success, 1 when a proof or claim fails, 2 for usage and
I/O errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import corpus
from .kernel import FormulaSyntaxError, dn_occurrences, parse_formula
from .proofs import (
    CDProof, ListingError, MPProof, Repair, check_cd_proof, check_mp_proof,
    dn_report, load, parse_proof_listing, save,
)
from .systems import SYSTEMS, get_system

OK, FAIL, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _formula(text: str, constants=()):
    try:
        return parse_formula(text, constants)
    except FormulaSyntaxError as exc:
        raise UsageError(f"bad formula {text!r}: {exc}") from None


def _system(name: str):
    try:
        return get_system(name)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None


def _read(path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load_proof(path: str, system: str | None = None, repairs: str | None = None,
                constants=()) -> CDProof | MPProof:
    """A JSON proof file, or a plain listing when ``system`` is given.

    ``corpus:ID`` names a shipped listing.
    """
    if path.startswith("corpus:"):
        try:
            return corpus.base_proof(path[len("corpus:"):])
        except KeyError as exc:
            raise UsageError(exc.args[0]) from None
    text = _read(path)
    if path.endswith(".json"):
        try:
            return load(path)
        except (ValueError, KeyError) as exc:
            raise UsageError(f"{path}: not a proof file ({exc})") from None
    if system is None:
        raise UsageError(f"{path}: plain listings need --system")
    reps = ()
    if repairs:
        try:
            reps = tuple(Repair.from_dict(d) for d in json.loads(_read(repairs)))
        except (ValueError, KeyError) as exc:
            raise UsageError(f"{repairs}: bad repair file ({exc})") from None
    return parse_proof_listing(text, _system(system), reps, constants=constants, name=path)


def _check(p) -> object:
    return check_cd_proof(p) if isinstance(p, CDProof) else check_mp_proof(p)


def _write_proof(p, path: str | None) -> None:
    if path:
        try:
            save(p, path)
        except OSError as exc:
            raise UsageError(f"cannot write {path}: {exc.strerror}") from None
    elif isinstance(p, CDProof):
        sys.stdout.write(p.to_text())
    else:
        print(f"MP proof of {p.conclusion}: {p.dag_size()} distinct nodes, "
              f"{p.node_count()} as a tree")


def _constants(args) -> tuple[str, ...]:
    raw = getattr(args, "constants", None) or ""
    return tuple(c for c in raw.split(",") if c)


# -- commands ----------------------------------------------------------------

def cmd_check(args) -> int:
    status = OK
    for path in args.paths:
        try:
            p = _load_proof(path, args.system, args.repairs, _constants(args))
        except ListingError as exc:
            print(f"{path}: {exc}")
            status = FAIL
            continue
        v = _check(p)
        print(f"{path}: {v}")
        if not v:
            status = FAIL
    return status


def cmd_dnreport(args) -> int:
    p = _load_proof(args.path, args.system, args.repairs, _constants(args))
    allowed = [_formula(a, _constants(args)) for a in args.allow]
    r = dn_report(p, allowed)
    if args.json:
        print(json.dumps(r.summary(), indent=1))
    else:
        for key, occ in r.per_line:
            for o in occ:
                print(f"{key}: {o.formula} x{len(o.positions)} at {list(o.positions)}")
        print(f"aggregate: {', '.join(map(str, r.aggregate)) or '(none)'}")
        if r.violations:
            print(f"violations: {', '.join(map(str, r.violations))}")
    return OK if r.ok else FAIL


def cmd_pushback(args) -> int:
    from .transform import pushback
    p = _load_proof(args.path, args.system, args.repairs)
    if not isinstance(p, CDProof) or not check_cd_proof(p):
        print("input is not a valid condensed-detachment proof")
        return FAIL
    tree = pushback(p)
    v = check_mp_proof(tree)
    _write_proof(tree, args.output)
    print(f"pushback: {v}")
    return OK if v else FAIL


def _selection(args, constants=()):
    return [_formula(q, constants) for q in args.select]


def cmd_erase(args) -> int:
    from .transform import erase_in_mp, pushback
    p = _load_proof(args.path, args.system, args.repairs)
    if isinstance(p, CDProof):
        if not check_cd_proof(p):
            print("input proof is invalid")
            return FAIL
        p = pushback(p)
    try:
        out = erase_in_mp(p, _selection(args))
    except ValueError as exc:
        print(exc)
        return FAIL
    v = check_mp_proof(out)
    _write_proof(out, args.output)
    print(f"erased: {v}")
    return OK if v else FAIL


def cmd_eliminate(args) -> int:
    p = _load_proof(args.path, args.system, args.repairs)
    return _eliminate(p, _selection(args), args.output, args.report)


def _eliminate(p, selection, output, report_path=None, star_proofs=None) -> int:
    from .transform import Selection, StarKit, dn_eliminate
    if not isinstance(p, CDProof) or not check_cd_proof(p):
        print(f"input proof is invalid: {_check(p)}")
        return FAIL
    sel = Selection(selection)
    try:
        sel.validate(p.conclusion)
    except ValueError as exc:
        print(exc)
        return FAIL
    b_star = sel.apply(p.conclusion)
    if p.system.logic == "intuitionistic":
        from .sequent import NotProvable, allowed_double_negations, h_dn_eliminate
        try:
            out = h_dn_eliminate(b_star, p.assumptions)
        except NotProvable as exc:
            print(exc)
            return FAIL
        allowed = allowed_double_negations(b_star, p.assumptions)
    else:
        base = p.system.name
        try:
            kit = (StarKit.build(p.system, star_proofs) if star_proofs
                   else corpus.star_kit(base))
            dkit = corpus.dkit(base)
        except (KeyError, ValueError) as exc:
            raise UsageError(exc.args[0]) from None
        out = dn_eliminate(p, sel, kit, dkit)
        allowed = [o.formula for a in (b_star, *p.assumptions) for o in dn_occurrences(a)]
    v = check_cd_proof(out)
    r = dn_report(out, allowed)
    _write_proof(out, output)
    summary = {"valid": bool(v), "conclusion": str(out.conclusion), "lines": len(out.lines),
               **r.summary()}
    if report_path:
        Path(report_path).write_text(json.dumps(summary, indent=1) + "\n", encoding="utf-8")
    print(json.dumps(summary, indent=1))
    return OK if v and r.ok else FAIL


def cmd_pipeline(args) -> int:
    """Run a JSON manifest.

    Keys: ``input`` (proof path, or ``corpus:ID``), optional ``system`` and
    ``repairs`` for plain listings, ``selection`` (list of formulas),
    optional ``star_proofs`` (label to proof path), ``output`` and
    ``report`` paths.  Instead of ``input`` an intuitionistic manifest may
    give ``goal`` and ``assumptions``.
    """
    try:
        m = json.loads(_read(args.manifest))
    except json.JSONDecodeError as exc:
        raise UsageError(f"{args.manifest}: not JSON ({exc})") from None
    root = Path(args.manifest).parent

    def rel(path):
        if path is None or path.startswith("corpus:"):
            return path
        return str(root / path)

    selection = [_formula(q) for q in m.get("selection", [])]
    if "input" not in m:
        if "goal" not in m:
            raise UsageError("manifest needs 'input' or 'goal'")
        from .sequent import NotProvable, allowed_double_negations, h_dn_eliminate
        goal = _formula(m["goal"])
        assumptions = [_formula(a) for a in m.get("assumptions", [])]
        try:
            out = h_dn_eliminate(goal, assumptions)
        except NotProvable as exc:
            print(exc)
            return FAIL
        v = check_cd_proof(out)
        r = dn_report(out, allowed_double_negations(goal, assumptions))
        _write_proof(out, rel(m.get("output")))
        summary = {"valid": bool(v), "conclusion": str(out.conclusion),
                   "lines": len(out.lines), **r.summary()}
        if m.get("report"):
            Path(rel(m["report"])).write_text(json.dumps(summary, indent=1) + "\n")
        print(json.dumps(summary, indent=1))
        return OK if v and r.ok else FAIL
    p = _load_proof(rel(m["input"]), m.get("system"), rel(m.get("repairs")))
    star = None
    if m.get("star_proofs"):
        star = {label: _load_proof(rel(path)) for label, path in m["star_proofs"].items()}
    return _eliminate(p, selection, rel(m.get("output")), rel(m.get("report")), star)


def cmd_star(args) -> int:
    from .transform import star_system
    base = _system(args.system)
    ext = star_system(base)
    for label, f in ext.axioms:
        mark = "" if label in base else "  (new)"
        print(f"{label}  {f}{mark}")
    return OK


def _read_formulas(path: str | None) -> list:
    if not path:
        return []
    out = []
    for raw in _read(path).splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(_formula(line))
    return out


def _problem(args) -> dict:
    """Search settings: a JSON problem file overridden by flags."""
    prob = {}
    if args.problem:
        try:
            prob = json.loads(_read(args.problem))
        except json.JSONDecodeError as exc:
            raise UsageError(f"{args.problem}: not JSON ({exc})") from None
    for key in ("system", "goal", "max_weight", "max_retained", "max_seconds", "hints",
                "resonators"):
        if getattr(args, key) is not None:
            prob[key] = getattr(args, key)
    if args.dn_avoidance:
        prob["dn_avoidance"] = True
    if args.exact:
        prob["subsume_goal"] = False
    if args.extra:
        prob["axioms"] = prob.get("axioms", []) + args.extra
    if "goal" not in prob or ("system" not in prob and "axioms" not in prob):
        raise UsageError("search needs a goal and a system or axioms")
    return prob


def _formula_list(value) -> list:
    if value is None:
        return []
    if isinstance(value, str):
        return _read_formulas(value)
    return [_formula(t) for t in value]


def cmd_search(args) -> int:
    from .proofs import proof_to_dict
    from .search import SearchConfig, saturate
    from .systems import AxiomSystem
    prob = _problem(args)
    extra = [(f"X{k}", _formula(t)) for k, t in enumerate(prob.get("axioms", []), 1)]
    if "system" in prob:
        system = _system(prob["system"])
        if extra:
            system = system.extend(extra)
    else:
        system = AxiomSystem("inline", tuple(extra))
    try:
        cfg = SearchConfig(max_weight=prob.get("max_weight", 24),
                           max_retained=prob.get("max_retained", 20000),
                           max_seconds=prob.get("max_seconds"),
                           dn_avoidance=bool(prob.get("dn_avoidance", False)),
                           hints=tuple(_formula_list(prob.get("hints"))),
                           resonators=tuple(_formula_list(prob.get("resonators"))),
                           subsume_goal=bool(prob.get("subsume_goal", True)))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    res = saturate(system, _formula(prob["goal"]), cfg)
    counters = {"status": res.status, "retained": res.retained_count,
                "generated": res.generated_count, "given": res.given_count,
                "seconds": round(res.elapsed, 3)}
    print(f"status: {res.status}; retained {res.retained_count}, generated "
          f"{res.generated_count}, given {res.given_count}, {res.elapsed:.2f}s")
    if args.result:
        body = {**counters, "proof": proof_to_dict(res.proof) if res.found else None}
        Path(args.result).write_text(json.dumps(body, indent=1, sort_keys=True) + "\n")
    if not res.found:
        return FAIL
    r = dn_report(res.proof)
    print(f"proof: {len(res.proof.lines)} lines, {r.dn_line_count} with double negations")
    _write_proof(res.proof, args.output)
    return OK


def cmd_closure(args) -> int:
    from .search import enumerate_closure
    res = enumerate_closure(_system(args.system), args.rounds, cap=args.cap)
    for k, formulas in res:
        print(f"round {k}: {len(formulas)} new")
        for f in formulas:
            print(f"  {f}")
    if res.truncated:
        print(f"stopped after {args.cap} formulas")
    return OK


def cmd_sequent(args) -> int:
    from .sequent import (
        check_gproof, extract_m_proof, has_subformula_property, parse_sequent,
        prove_sequent,
    )
    try:
        s = parse_sequent(args.sequent, _constants(args))
    except (ValueError, FormulaSyntaxError) as exc:
        raise UsageError(str(exc)) from None
    g = prove_sequent(s)
    if g is None:
        print(f"{s}: not provable")
        return FAIL
    print(f"{s}: provable ({g.size()} rule applications)")
    problem = check_gproof(g)
    if problem or not has_subformula_property(g):
        print(f"internal error: {problem or 'subformula property fails'}")
        return FAIL
    if args.extract:
        target = _formula(args.target) if args.target else None
        if s.succedent is None and target is None:
            raise UsageError("--extract on an empty succedent needs --target")
        m = extract_m_proof(g, target)
        v = check_mp_proof(m)
        print(f"M-proof of {m.conclusion}: {v}")
        _write_proof(m, args.output)
        return OK if v else FAIL
    return OK


def cmd_eval(args) -> int:
    from .semantics import UnassignedLetter, eval_lukasiewicz, parse_assignment
    try:
        v = parse_assignment(args.assign)
        print(eval_lukasiewicz(_formula(args.formula), v))
    except UnassignedLetter as exc:
        raise UsageError(f"no value for letter {exc.args[0]}") from None
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(str(exc)) from None
    return OK


def cmd_taut(args) -> int:
    from .semantics import find_finite_counterexample, is_two_valued_tautology
    f = _formula(args.formula)
    two = is_two_valued_tautology(f)
    print(f"two-valued tautology: {'yes' if two else 'no'}")
    status = OK if two else FAIL
    if args.max_n:
        cex = find_finite_counterexample(f, args.max_n)
        if cex is None:
            print(f"no counterexample with up to {args.max_n} values")
        else:
            n, v = cex
            print(f"{n}-valued counterexample: " + ", ".join(f"{k}={x}" for k, x in v.items()))
            status = FAIL
    return status


def cmd_corpus(args) -> int:
    ents = corpus.entries()
    if args.action == "list":
        for e in ents.values():
            print(f"{e.id:14} {e.system.name:7} {e.goal:6} {e.deduced_lines:3} lines"
                  f"{'  repaired' if e.repairs else ''}")
        return OK
    if args.action == "show":
        if not args.ids:
            raise UsageError("corpus show needs an entry id")
        for i in args.ids:
            try:
                p = corpus.base_proof(i) if args.base else corpus.proof(i)
            except KeyError as exc:
                raise UsageError(exc.args[0]) from None
            _write_proof(p, args.output)
        return OK
    status = OK
    for i in args.ids or list(ents):
        try:
            e, p = corpus.entry(i), corpus.proof(i)
        except KeyError as exc:
            raise UsageError(exc.args[0]) from None
        v = check_cd_proof(p)
        free = dn_report(p).dn_free
        good = (bool(v) == e.expect_valid and free == e.expect_dn_free
                and len(p.deduced) == e.deduced_lines)
        print(f"{i:14} {'ok' if good else 'MISMATCH'}  {v}; {len(p.deduced)} deduced; "
              f"{'DN-free' if free else 'uses DN'}")
        if not good:
            status = FAIL
    return status


# -- parser ------------------------------------------------------------------

def _proof_args(sp, multiple=False):
    if multiple:
        sp.add_argument("paths", nargs="+", help="proof files (.json), listings, or corpus:ID")
    else:
        sp.add_argument("path", help="proof file (.json), listing, or corpus:ID")
    sp.add_argument("--system", choices=sorted(SYSTEMS), help="axiom system of a plain listing")
    sp.add_argument("--repairs", help="JSON repair table for a plain listing")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dnelim", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("check", help="check proofs")
    _proof_args(sp, multiple=True)
    sp.add_argument("--constants", help="comma-separated constant letters")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("dnreport", help="list double negations in a proof")
    _proof_args(sp)
    sp.add_argument("--constants", help="comma-separated constant letters")
    sp.add_argument("--allow", action="append", default=[], metavar="FORMULA",
                    help="a tolerated n(n(q)); repeatable")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_dnreport)

    sp = sub.add_parser("pushback", help="convert a CD proof to a modus ponens proof")
    _proof_args(sp)
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_pushback)

    for name, func, text in (("erase", cmd_erase, "erase selected double negations"),
                             ("eliminate", cmd_eliminate, "double-negation elimination")):
        sp = sub.add_parser(name, help=text)
        _proof_args(sp)
        sp.add_argument("--select", action="append", default=[], metavar="Q",
                        help="erase n(n(Q)); repeatable")
        sp.add_argument("-o", "--output")
        if name == "eliminate":
            sp.add_argument("--report", help="write the DN report here")
        sp.set_defaults(func=func)

    sp = sub.add_parser("pipeline", help="run a JSON manifest")
    sp.add_argument("manifest")
    sp.set_defaults(func=cmd_pipeline)

    sp = sub.add_parser("star", help="star closure of an axiom system")
    sp.add_argument("system", choices=sorted(SYSTEMS))
    sp.set_defaults(func=cmd_star)

    sp = sub.add_parser("search", help="saturation search")
    sp.add_argument("--problem", help="JSON problem file; flags override its keys")
    sp.add_argument("--system", choices=sorted(SYSTEMS))
    sp.add_argument("--goal")
    sp.add_argument("--extra", action="append", default=[], metavar="FORMULA",
                    help="additional axiom; repeatable")
    sp.add_argument("--max-weight", type=int)
    sp.add_argument("--max-retained", type=int)
    sp.add_argument("--max-seconds", type=float)
    sp.add_argument("--dn-avoidance", action="store_true")
    sp.add_argument("--hints", help="file with one hint formula per line")
    sp.add_argument("--resonators", help="file with one resonator per line")
    sp.add_argument("--exact", action="store_true",
                    help="only a variant of the goal counts, not a generalization")
    sp.add_argument("-o", "--output", help="write the proof here")
    sp.add_argument("--result", help="write counters and proof as JSON here")
    sp.set_defaults(func=cmd_search)

    sp = sub.add_parser("closure", help="breadth-first detachment closure")
    sp.add_argument("--system", required=True, choices=sorted(SYSTEMS))
    sp.add_argument("--rounds", type=int, default=3)
    sp.add_argument("--cap", type=int, default=5000)
    sp.set_defaults(func=cmd_closure)

    sp = sub.add_parser("sequent", help="decide an intuitionistic sequent")
    sp.add_argument("sequent", help='e.g. "a, i(a,b) => b"')
    sp.add_argument("--constants", help="comma-separated constant letters")
    sp.add_argument("--extract", action="store_true", help="also extract an M-proof")
    sp.add_argument("--target", help="conclusion to use for an empty succedent")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_sequent)

    sp = sub.add_parser("eval", help="Lukasiewicz value of a formula")
    sp.add_argument("--formula", required=True)
    sp.add_argument("--assign", action="append", default=[], metavar="X=VALUE")
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("taut", help="two-valued tautology test")
    sp.add_argument("formula")
    sp.add_argument("--max-n", type=int, default=0,
                    help="also search n-valued counterexamples for n up to this")
    sp.set_defaults(func=cmd_taut)

    sp = sub.add_parser("corpus", help="shipped proof listings")
    sp.add_argument("action", choices=("list", "check", "show"))
    sp.add_argument("ids", nargs="*")
    sp.add_argument("--base", action="store_true", help="show with lemmas inlined")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_corpus)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"dnelim: {exc}", file=sys.stderr)
        return USAGE
    except ListingError as exc:
        print(f"dnelim: {exc}")
        return FAIL


if __name__ == "__main__":
    sys.exit(main())
