"""Command-line interface.

Exit codes: 0 success or true, 1 property false or proof invalid, 2 usage
or resource error.  JSON output carries ``"schema": 1``.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys

from .parser import ParseError, parse_axiom_file, parse_configuration, parse_term, pretty_print
from .semantics import ResourceError, build_lts
from .syntax import DomainError, Node, Term, alphabet_actions, indexed_variables, names, variables

SCHEMA = 1
log = logging.getLogger("ccslc")


class _Usage(Exception):
    pass


def _alphabet(args, *nodes: Node, fallback=("a",)) -> tuple[str, ...]:
    if args.alphabet:
        return tuple(sorted({a.strip().lstrip("~") for a in args.alphabet.split(",") if a.strip()}
                            - {"tau"}))
    found = set()
    for n in nodes:
        found |= names(n)
    return tuple(sorted(found)) or tuple(fallback)


def _emit(args, text: str | None = None, data: dict | None = None) -> None:
    if args.format == "json" and data is not None:
        text = json.dumps({"schema": SCHEMA, **data}, indent=2, sort_keys=True)
    if text is None:
        text = ""
    if not text.endswith("\n"):
        text += "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _term(text: str) -> Term:
    return parse_term(text)


def _system(args, *terms: Term, trace=None):
    from .equational import builtin_axioms
    if getattr(args, "axioms", None):
        with open(args.axioms, encoding="utf-8") as fh:
            sysm = parse_axiom_file(fh.read())
        return sysm
    found = set()
    for t in terms:
        found |= names(t)
    if trace is not None:
        found |= _trace_names(trace)
    if args.alphabet:
        found |= set(_alphabet(args))
    return builtin_axioms(args.system, found or {"a"})


def _trace_names(trace) -> set[str]:
    found = names(trace.conclusion.lhs) | names(trace.conclusion.rhs)
    for st in trace.steps:
        if st.term is not None:
            found |= names(st.term)
        for _, t in st.sigma:
            found |= names(t)
        if st.act is not None and st.act.visible:
            found.add(st.act.name)
        if st.name and "[" in st.name:
            for a in st.name[st.name.index("[") + 1:st.name.rindex("]")].split(","):
                a = a.strip().lstrip("~")
                if a and a != "tau":
                    found.add(a)
    return found


# ---------------------------------------------------------------------------
# commands

def cmd_parse(args) -> int:
    c = parse_configuration(args.term)
    data = {
        "term": pretty_print(c),
        "size": c.size,
        "closed": c.closed,
        "variables": sorted(variables(c)),
        "indexed_variables": sorted(f"{x}@{a}" for x, a in indexed_variables(c)),
        "names": sorted(names(c)),
    }
    text = "\n".join([data["term"], f"size {data['size']}", f"closed {str(c.closed).lower()}"])
    _emit(args, text, data)
    return 0


def cmd_lts(args) -> int:
    c = parse_configuration(args.term)
    alpha = _alphabet(args, c) if not c.closed else None
    lts = build_lts(c, alpha)
    if args.format == "dot":
        _emit(args, lts.to_dot())
    else:
        _emit(args, lts.to_records(), lts.to_json())
    return 0


def cmd_eq(args) -> int:
    from .equivalences import compare
    c1, c2 = parse_configuration(args.left), parse_configuration(args.right)
    alpha = None if c1.closed and c2.closed else _alphabet(args, c1, c2)
    v = compare(c1, c2, args.rel, alpha, method=args.method)
    text = "true" if v.result else "false"
    if v.witness:
        text += "\n" + v.witness
    _emit(args, text, {"relation": args.rel, "left": pretty_print(c1), "right": pretty_print(c2),
                       "result": v.result, "witness": v.witness})
    return 0 if v.result else 1


def cmd_depth(args) -> int:
    from .equivalences import depth, rdepth
    t = _term(args.term)
    if not t.closed:
        raise DomainError("depth is defined for closed terms")
    d, r = depth(t), rdepth(t)
    _emit(args, f"depth {d}\nrdepth {r}", {"term": pretty_print(t), "depth": d, "rdepth": r})
    return 0


def _universe(args, t: Term):
    from .decomposition import UniverseParams
    acts = alphabet_actions(_alphabet(args, t))
    return UniverseParams(tuple(acts), max_size=args.max_size or 8,
                          max_depth=args.max_depth or 8)


def cmd_decompose(args) -> int:
    from .decomposition import decompose_bounded
    t = _term(args.term)
    if not t.closed:
        raise DomainError("decomposition is defined for closed terms")
    fm = decompose_bounded(t, _universe(args, t))
    lines = [f"{pretty_print(f.term)}  [{f.tag}]" for f in fm.factors]
    lines.append(f"recomposition verified: {str(fm.verified).lower()}")
    _emit(args, "\n".join(lines), fm.to_dict())
    return 0 if fm.verified else 1


def cmd_normalize(args) -> int:
    from .equational import check_proof, normalize, trace_to_text
    t = _term(args.term)
    sysm = _system(args, t)
    nf, trace = normalize(t, sysm)
    res = check_proof(trace, sysm)
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as fh:
            fh.write(trace_to_text(trace))
    _emit(args, pretty_print(nf), {"term": pretty_print(t), "normal_form": pretty_print(nf),
                                   "steps": len(trace), "trace_valid": res.valid})
    return 0 if res.valid else 1


def cmd_prove(args) -> int:
    from .equational import NotBisimilarError, check_proof, prove_equal, trace_to_text
    t, u = _term(args.left), _term(args.right)
    sysm = _system(args, t, u)
    try:
        trace = prove_equal(t, u, sysm)
    except NotBisimilarError as e:
        print(f"not provable: {e}", file=sys.stderr)
        return 1
    res = check_proof(trace, sysm)
    text = trace_to_text(trace)
    if args.format == "json":
        _emit(args, None, {"conclusion": f"{pretty_print(t)} = {pretty_print(u)}",
                           "steps": len(trace), "valid": res.valid, "trace": text.splitlines()})
    else:
        _emit(args, text)
    if args.out:
        print(f"{len(trace)} steps written to {args.out}; check: "
              f"{'valid' if res.valid else 'invalid'}", file=sys.stderr)
    return 0 if res.valid else 1


def cmd_check_proof(args) -> int:
    from .equational import check_proof, parse_trace
    from .equational.proof import TraceFormatError
    with open(args.file, encoding="utf-8") as fh:
        text = fh.read()
    try:
        trace = parse_trace(text)
    except (TraceFormatError, ParseError) as e:
        _emit(args, f"invalid\n{e}", {"valid": False, "failed_step": None, "reason": str(e)})
        return 1
    res = check_proof(trace, _system(args, trace=trace))
    text = "valid" if res.valid else f"invalid\nstep {res.failed_step}: {res.reason}"
    _emit(args, text, {"valid": res.valid, "failed_step": res.failed_step,
                       "reason": res.reason or None, "steps": len(trace)})
    return 0 if res.valid else 1


def cmd_axioms(args) -> int:
    from .equational import test_soundness
    if args.action == "list":
        sysm = _system(args)
        lines = [f"{n}: {pretty_print(e.lhs)} = {pretty_print(e.rhs)}"
                 for n, e in sysm.instances.items()]
        _emit(args, "\n".join(lines), {"system": sysm.name, "alphabet": list(sysm.alphabet),
                                       "instances": {n: f"{pretty_print(e.lhs)} = {pretty_print(e.rhs)}"
                                                     for n, e in sysm.instances.items()}})
        return 0
    if not args.alphabet:
        args.alphabet = "a,b"
    sysm = _system(args)
    relation = args.relation or ("strong" if sysm.name == "E_B" else "rbb")
    rep = test_soundness(sysm, relation, count=args.count, max_size=args.max_size or 10,
                         max_depth=args.max_depth or 4, seed=args.seed)
    lines = [f"system {rep.system} against {relation}: {rep.instances} instances, "
             f"{rep.checks} checks, {len(rep.counterexamples)} counterexamples"]
    for c in rep.counterexamples:
        d = c.to_dict()
        lines.append(f"{d['axiom']}: {d['lhs']} vs {d['rhs']}: {d['witness']}")
    _emit(args, "\n".join(lines), rep.to_dict())
    return 0 if rep.sound else 1


def cmd_family(args) -> int:
    from .decomposition import UniverseParams
    from .equational import trace_to_text
    from .family import run_negative_experiment
    u = UniverseParams.over("a", "~a", "tau", max_size=args.max_size or 8,
                            max_depth=args.max_depth or 8)
    rep = run_negative_experiment(args.n, u, prove=not args.no_proof)
    data = rep.to_dict()
    if args.trace and rep.proof_trace is not None:
        with open(args.trace, "w", encoding="utf-8") as fh:
            fh.write(trace_to_text(rep.proof_trace))
    lines = [f"{k}: {json.dumps(v, sort_keys=True)}" for k, v in data.items()]
    _emit(args, "\n".join(lines), data)
    return 0 if rep.ok else 1


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--alphabet", help="comma-separated action names (default: names in the input)")
    shared.add_argument("--seed", type=int, default=0)
    shared.add_argument("--max-size", type=int)
    shared.add_argument("--max-depth", type=int)
    shared.add_argument("--format", choices=["text", "json", "dot"], default="text")
    shared.add_argument("--out", metavar="FILE", help="write the output here instead of stdout")
    shared.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="ccslc", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("parse", parents=[shared], help="parse and pretty-print a term")
    s.add_argument("term")
    s.set_defaults(func=cmd_parse)

    s = sub.add_parser("lts", parents=[shared], help="export the transition system")
    s.add_argument("term")
    s.set_defaults(func=cmd_lts)

    s = sub.add_parser("eq", parents=[shared], help="decide an equivalence")
    s.add_argument("--rel", choices=["strong", "bb", "rbb"], default="bb")
    s.add_argument("--method", choices=["refine", "naive"], default="refine")
    s.add_argument("left")
    s.add_argument("right")
    s.set_defaults(func=cmd_eq)

    s = sub.add_parser("depth", parents=[shared], help="depth and rooted depth")
    s.add_argument("term")
    s.set_defaults(func=cmd_depth)

    s = sub.add_parser("decompose", parents=[shared], help="parallel decomposition")
    s.add_argument("term")
    s.set_defaults(func=cmd_decompose)

    for name, func, help_ in (("normalize", cmd_normalize, "rewrite to normal form"),
                              ("prove", cmd_prove, "prove two terms equal")):
        s = sub.add_parser(name, parents=[shared], help=help_)
        s.add_argument("--system", default="E_RBB", choices=["E_B", "E_RBB", "E0_TB"])
        s.add_argument("--axioms", metavar="FILE", help="axiom file instead of a built-in system")
        if name == "normalize":
            s.add_argument("term")
            s.add_argument("--trace", metavar="FILE", help="also write the trace")
        else:
            s.add_argument("left")
            s.add_argument("right")
        s.set_defaults(func=func)

    s = sub.add_parser("check-proof", parents=[shared], help="validate a proof trace file")
    s.add_argument("file")
    s.add_argument("--system", default="E_RBB", choices=["E_B", "E_RBB", "E0_TB"])
    s.add_argument("--axioms", metavar="FILE")
    s.set_defaults(func=cmd_check_proof)

    s = sub.add_parser("axioms", parents=[shared], help="list axioms or fuzz their soundness")
    s.add_argument("action", choices=["soundness", "list"])
    s.add_argument("--system", default="E_RBB", choices=["E_B", "E_RBB", "E0_TB"])
    s.add_argument("--axioms", metavar="FILE")
    s.add_argument("--relation", choices=["strong", "bb", "rbb"])
    s.add_argument("--count", type=int, default=200)
    s.set_defaults(func=cmd_axioms)

    s = sub.add_parser("family", parents=[shared], help="run the e_n experiment")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--no-proof", action="store_true")
    s.add_argument("--trace", metavar="FILE", help="write the proof of e_n here")
    s.set_defaults(func=cmd_family)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.format == "dot" and args.command != "lts":
        parser.error("--format dot is only available for lts")
    try:
        return args.func(args)
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
    except DomainError as e:
        print(f"error: {e}", file=sys.stderr)
    except ResourceError as e:
        print(f"resource limit: {e}", file=sys.stderr)
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
    return 2


if __name__ == "__main__":
    sys.exit(main())
