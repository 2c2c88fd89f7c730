"""Command-line front end: instance parsing, dispatch, JSON/DOT emission.

Results are single JSON documents on stdout (sorted keys, two-space
indent); diagnostics go to stderr.  Exit codes: 0 success, 1 domain or
validation error, 2 budget or cap exceeded, 3 usage error.
"""

import argparse
import json
import sys

from . import groups, intersection, oracle, rational, zchain as zchain_mod
from .action_sdp import (SdpElem, build_action, builtin_instance, orbit,
                         restrict_locally_finite)
from .errors import (BudgetExceeded, CapExceeded, HowsonError, ParseError)
from .semilattice import automorphisms, validate_meet_table


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def parse_instance(path):
    """Load and fully validate an instance file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    try:
        latt = validate_meet_table(doc["semilattice"]["elements"],
                                   doc["semilattice"]["meet"])
        gdoc = doc["group"]
        kind = gdoc["kind"]
        if kind == groups.FINITE_PERM:
            desc = groups.finite_perm_group(
                {name: tuple(p) for name, p in gdoc["generators"].items()})
        elif kind == groups.FREE:
            desc = groups.free_group(names=tuple(gdoc["generators"]))
        elif kind == groups.FREE_ABELIAN:
            desc = groups.free_abelian_group(names=tuple(gdoc["generators"]))
        else:
            raise ParseError(f"unknown group kind {kind!r}")
        images = {name: tuple(img) for name, img in doc.get("action", {}).items()}
        missing = [n for n in desc.gen_names if n not in images]
        if missing:
            raise ParseError(f"action is missing images for {missing}")
        from .semilattice import SAut
        act = build_action(latt, desc, {n: SAut(p) for n, p in images.items()})
        gensets = {}
        for name, items in doc.get("gensets", {}).items():
            gensets[name] = [SdpElem(latt.index(item["e"]),
                                     groups.elem_from_literal(desc, item["g"]))
                             for item in items]
        return latt, act, gensets
    except KeyError as exc:
        raise ParseError(f"missing field {exc}") from None


def _elem_doc(act, u):
    return {"e": act.semilattice.label(u.e),
            "g": groups.elem_to_literal(act.desc, u.g)}


def _genset(gensets, name):
    if name not in gensets:
        raise UsageError(f"unknown genset {name!r} (have {sorted(gensets)})")
    return gensets[name]


def _parse_builtin_pairs(name, text):
    if not text:
        return []
    pairs = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            item = json.loads(chunk)
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad element literal {chunk!r}: {exc.msg}") from None
        if name == "zchain":
            m, n = item
            pairs.append((int(m), (int(n),)))
        elif name == "example-s4":
            tok, g = item
            pairs.append(((int(tok[0]), int(tok[1])), tuple(int(c) for c in g)))
        elif name.startswith("fs-"):
            tok, g = item
            pairs.append((frozenset(int(a) for a in tok), tuple(int(c) for c in g)))
        else:
            raise UsageError(f"unknown builtin {name!r}")
    return pairs


# -- subcommands ---------------------------------------------------------------

def _cmd_validate(args):
    latt, act, gensets = parse_instance(args.instance)
    return {"ok": True, "elements": list(latt.elements),
            "group": act.desc.kind, "gensets": sorted(gensets)}


def _cmd_aut(args):
    latt, _, _ = parse_instance(args.instance)
    auts = automorphisms(latt)
    return {"count": len(auts),
            "automorphisms": [[latt.label(a.apply(i)) for i in range(latt.n)]
                              for a in auts]}


def _cmd_automaton(args):
    latt, act, gensets = parse_instance(args.instance)
    aut = rational.build_automaton(act, _genset(gensets, args.gens))
    doc = {
        "alphabet": [_elem_doc(act, x) for x in aut.letters],
        "state_count": aut.n_states,
        "states": ["q0"] + [{"e": latt.label(e), "aut": list(a.perm)}
                            for e, a in aut.states[1:]],
        "transitions": [[si, li, aut.delta[si][li]]
                        for si in range(aut.n_states)
                        for li in range(len(aut.letters))],
        "witnesses": [None] + [{"word": list(aut.witness_word[i]),
                                "elem": _elem_doc(act, aut.witness_elem[i])}
                               for i in range(1, aut.n_states)],
    }
    if args.dot:
        e = latt.index(args.e) if args.e else None
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(rational.to_dot(aut, e))
        doc["dot"] = args.dot
    return doc


def _cmd_sofe(args):
    latt, act, gensets = parse_instance(args.instance)
    x = _genset(gensets, args.gens)
    aut = rational.build_automaton(act, x)
    res = rational.s_of_e_subgroup(aut, latt.index(args.e))
    doc = {"e": args.e, "empty": not res.nonempty,
           "rank_bound": rational.rank_bound(latt.n, len(x))}
    if res.nonempty:
        gens = res.subgroup.canonical_generators()
        doc["generators"] = [groups.elem_to_literal(act.desc, g) for g in gens]
        doc["generator_count"] = len(gens)
        doc["trivial"] = res.subgroup.is_trivial()
    return doc


def _cmd_intersect(args):
    latt, act, gensets = parse_instance(args.instance)
    x1 = _genset(gensets, args.x1)
    x2 = _genset(gensets, args.x2)
    res = intersection.intersect(act, x1, x2)

    def table(entries):
        return [{"e": latt.label(e), "aut": list(a.perm)} for e, a in entries]

    doc = {
        "gens": [_elem_doc(act, u) for u in res.gens],
        "certificates": [{"x1": c1, "x2": c2} for c1, c2 in res.certs],
        "alphabet1": [_elem_doc(act, x) for x in res.aut1.letters],
        "alphabet2": [_elem_doc(act, x) for x in res.aut2.letters],
        "tables": {"p1": table(res.p1), "p2": table(res.p2),
                   "q": table(res.q), "p": table(res.p)},
        "pairs": [],
        "gen_count": len(res.gens),
    }
    for key in res.q:
        data = res.pairs[key]
        entry = {
            "e": latt.label(data.e),
            "aut": list(data.aut.perm),
            "target": latt.label(data.target),
            "h_generators": [groups.elem_to_literal(act.desc, g)
                             for g in data.h_subgroup.canonical_generators()],
            "y": [groups.elem_to_literal(act.desc, g) for g in data.y_gens],
            "in_p": data.in_p,
            "w": _elem_doc(act, data.w) if data.in_p else None,
        }
        doc["pairs"].append(entry)
    if args.poly:
        coeffs = [int(c) for c in args.poly.split(",")]
        n = max(len(x1), len(x2))
        doc["poly_bound"] = intersection.poly_bound(latt.n, n, coeffs)
    return doc


def _cmd_member(args):
    latt, act, gensets = parse_instance(args.instance)
    x = _genset(gensets, args.gens)
    aut = rational.build_automaton(act, x)
    if act.desc.kind == groups.FREE:
        lit = args.g
    else:
        try:
            lit = json.loads(args.g)
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad group literal {args.g!r}: {exc.msg}") from None
    u = SdpElem(latt.index(args.e), groups.elem_from_literal(act.desc, lit))
    ok, word = intersection.member(act, aut, u)
    return {"member": ok, "certificate": list(word) if ok else None,
            "alphabet": [_elem_doc(act, x) for x in aut.letters]}


def _cmd_bound(args):
    return {"rank_bound": rational.rank_bound(args.sizeE, args.sizeX)}


def _cmd_reduce(args):
    try:
        cs, desc = builtin_instance(args.builtin)
    except KeyError:
        raise UsageError(f"unknown builtin {args.builtin!r}") from None
    x1 = _parse_builtin_pairs(args.builtin, args.x1)
    x2 = _parse_builtin_pairs(args.builtin, args.x2)
    if not x1 and not x2:
        raise UsageError("need --x1 or --x2")
    inst = restrict_locally_finite(cs, desc, x1, x2, args.budget)
    latt = inst.semilattice
    return {
        "elements": list(latt.elements),
        "meet": [list(row) for row in latt.meet],
        "group": desc.kind,
        "y": [groups.elem_to_literal(desc, g) for g in inst.y_gens],
        "f": [cs.label(t) for t in inst.f_tokens],
        "x1": [{"e": latt.label(u.e), "g": groups.elem_to_literal(desc, u.g)}
               for u in inst.x1],
        "x2": [{"e": latt.label(u.e), "g": groups.elem_to_literal(desc, u.g)}
               for u in inst.x2],
    }


def _cmd_zchain(args):
    x = [tuple(u) for u in _parse_z_list(args.x)]
    records = zchain_mod.decompose_zz1(x, args.depth)
    report = zchain_mod.verify_zz1(x, records, args.depth)
    return {
        "x": [list(u) for u in x],
        "period": zchain_mod.gamma_period(x),
        "bound_m": zchain_mod.bound_M(x),
        "records": [{
            "residue": r.residue, "m_i": r.m_i,
            "s_prime": [list(u) for u in r.s_prime],
            "gens": [list(u) for u in r.gens],
            "certified": r.certified,
        } for r in records],
        "verify": {"agreement": report["agreement"],
                   "depth": report["depth"], "depth2": report["depth2"],
                   "classes": {str(i): v for i, v in report["classes"].items()}},
    }


def _parse_z_list(text):
    out = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            m, n = json.loads(chunk)
        except (json.JSONDecodeError, ValueError) as exc:
            raise ParseError(f"bad pair literal {chunk!r}") from None
        out.append((int(m), int(n)))
    if not out:
        raise UsageError("need at least one [m,n] pair")
    return out


def _cmd_oracle(args):
    latt, act, gensets = parse_instance(args.instance)
    x1 = _genset(gensets, args.x1)
    x2 = _genset(gensets, args.x2)
    res = intersection.intersect(act, x1, x2)
    report = oracle.check_intersection(act, x1, x2, res.gens)
    return {
        "equal": report["equal"],
        "lhs_size": report["lhs_size"],
        "rhs_size": report["rhs_size"],
        "missing": [_elem_doc(act, u) for u in report["missing"]],
        "extra": [_elem_doc(act, u) for u in report["extra"]],
        "gens": [_elem_doc(act, u) for u in res.gens],
    }


def _cmd_selftest(args):
    import random
    rng = random.Random(args.seed)
    failures = []
    for i in range(args.count):
        act, x1, x2 = oracle.random_instance(rng)
        try:
            res = intersection.intersect(act, x1, x2)
            report = oracle.check_intersection(act, x1, x2, res.gens)
            if not report["equal"]:
                failures.append({"instance": i, "reason": "oracle mismatch"})
        except HowsonError as exc:
            failures.append({"instance": i, "reason": str(exc)})
    doc = {"seed": args.seed, "instances": args.count,
           "failures": failures, "ok": not failures}
    if failures:
        raise SystemExitDoc(doc)
    return doc


class SystemExitDoc(Exception):
    """Carry a JSON document out of a failing selftest (exit code 1)."""

    def __init__(self, doc):
        self.doc = doc
        super().__init__("selftest failed")


def _build_parser():
    parser = _Parser(prog="howson",
                     description="Exact computation in semidirect products "
                                 "of finite semilattices by groups.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="parse and validate an instance file")
    p.add_argument("instance")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("aut", help="list semilattice automorphisms")
    p.add_argument("instance")
    p.set_defaults(func=_cmd_aut)

    p = sub.add_parser("automaton", help="build the reachability automaton")
    p.add_argument("instance")
    p.add_argument("--gens", required=True)
    p.add_argument("--dot", default=None)
    p.add_argument("--e", default=None, help="accepting element for DOT export")
    p.set_defaults(func=_cmd_automaton)

    p = sub.add_parser("sofe", help="generators of the trivially-acting part above e")
    p.add_argument("instance")
    p.add_argument("--gens", required=True)
    p.add_argument("--e", required=True)
    p.set_defaults(func=_cmd_sofe)

    p = sub.add_parser("intersect", help="generating set for the intersection")
    p.add_argument("instance")
    p.add_argument("--x1", required=True)
    p.add_argument("--x2", required=True)
    p.add_argument("--poly", default=None,
                   help="comma-separated polynomial coefficients, constant first")
    p.set_defaults(func=_cmd_intersect)

    p = sub.add_parser("member", help="decide membership with a certificate")
    p.add_argument("instance")
    p.add_argument("--gens", required=True)
    p.add_argument("--e", required=True)
    p.add_argument("--g", required=True)
    p.set_defaults(func=_cmd_member)

    p = sub.add_parser("bound", help="geometric-series rank bound")
    p.add_argument("--sizeE", type=int, required=True)
    p.add_argument("--sizeX", type=int, required=True)
    p.set_defaults(func=_cmd_bound)

    p = sub.add_parser("reduce", help="restrict a built-in instance to a finite one")
    p.add_argument("--builtin", required=True)
    p.add_argument("--x1", default="")
    p.add_argument("--x2", default="")
    p.add_argument("--budget", type=int, default=1000)
    p.set_defaults(func=_cmd_reduce)

    p = sub.add_parser("zchain", help="windowed decomposition over the integer chain")
    p.add_argument("--x", required=True, help='pairs like "[0,2];[-1,3]"')
    p.add_argument("--depth", type=int, default=8)
    p.set_defaults(func=_cmd_zchain)

    p = sub.add_parser("oracle", help="closure check of the intersection pipeline")
    p.add_argument("instance")
    p.add_argument("--x1", required=True)
    p.add_argument("--x2", required=True)
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("selftest", help="randomized oracle-equivalence battery")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=25)
    p.set_defaults(func=_cmd_selftest)

    return parser


def _emit(doc):
    sys.stdout.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        doc = args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 3
    except (CapExceeded, BudgetExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SystemExitDoc as exc:
        _emit(exc.doc)
        return 1
    except (HowsonError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _emit(doc)
    return 0


if __name__ == "__main__":
    sys.exit(main())
