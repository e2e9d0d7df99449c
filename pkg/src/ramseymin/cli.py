"""Command-line front end.

Every subcommand prints exactly one JSON document on stdout; progress and
search statistics go to stderr.  Exit codes: 0 decided/valid, 1 bad input
(or failed verification), 2 search budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from ramseymin import certificates as certs
from ramseymin.arrowing import (
    DEFAULT_BUDGET,
    BudgetExceeded,
    Constraints,
    arrows,
    coloring_from_json,
    coloring_to_json,
    is_ramsey_minimal,
)
from ramseymin.graph import PreconditionError, norm, parse_targets
from ramseymin.graph6 import from_graph6, read_graph6_lines, to_graph6


def _emit(doc: dict):
    sys.stdout.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")


def _log(msg: str):
    print(msg, file=sys.stderr)


def _read_text(arg: str) -> str:
    if os.path.exists(arg):
        with open(arg) as fh:
            return fh.read()
    return arg


def _graph(arg: str):
    text = _read_text(arg).strip().splitlines()
    if not text:
        raise PreconditionError("empty graph input")
    return from_graph6(text[0])


def _load_json(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)


def _colors(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _edge(text: str):
    u, v = (int(x) for x in text.split(","))
    return norm(u, v)


# -- subcommands ----------------------------------------------------------------


def cmd_arrow(args) -> int:
    g = _graph(args.graph)
    T = parse_targets(args.targets)
    cons = Constraints()
    if args.forced:
        doc = _load_json(args.forced)
        if isinstance(doc, list):
            cons = Constraints.forced(coloring_from_json(doc))
        else:
            cons = Constraints.from_json(doc)
    rep = arrows(g, T, cons, budget=args.budget, threads=args.threads)
    _log(f"nodes={rep.nodes} seconds={rep.seconds:.3f}")
    inputs = {"graph6": to_graph6(g), "targets": str(T)}
    if not cons.is_empty():
        inputs["constraints"] = cons.to_json()
    payload = {"arrows": rep.arrows, "witness": coloring_to_json(rep.witness) if rep.witness is not None else None}
    if rep.violation is not None:
        payload["forcedViolation"] = {"color": rep.violation[0], "copy": list(rep.violation[1])}
    _emit(certs.make("arrow", inputs, payload))
    return 0


def cmd_minimal(args) -> int:
    g = _graph(args.graph)
    T = parse_targets(args.targets)
    rep = is_ramsey_minimal(g, T, budget=args.budget)
    failing = rep.failing if isinstance(rep.failing, (str, type(None))) else list(rep.failing)
    payload = {
        "minimal": rep.minimal,
        "failing": failing,
        "witnesses": [[list(e), coloring_to_json(c)] for e, c in sorted(rep.witnesses.items())],
    }
    if rep.coloring is not None:
        payload["coloring"] = coloring_to_json(rep.coloring)
    _emit(certs.make("minimal", {"graph6": to_graph6(g), "targets": str(T)}, payload))
    return 0


def _gadget_cert(spec, budget: int) -> dict:
    from ramseymin.gadgets import verify

    report = verify(spec, budget=budget)
    _log(f"nodes={report.nodes}")
    return certs.make("gadget", {"spec": spec.to_json()}, report.to_json())


def cmd_gadget_verify(args) -> int:
    from ramseymin.gadgets import GadgetSpec

    spec = GadgetSpec.from_json(_load_json(args.spec))
    cert = _gadget_cert(spec, args.budget)
    _emit(cert)
    return 0 if cert["payload"]["exhaustive"] else 2


def cmd_gadget_compose(args) -> int:
    from ramseymin import gadgets as G

    if args.recipe == "complement":
        T = parse_targets(f"C{args.k},C{args.ell}")
        red = G.GadgetSpec.from_json(_load_json(args.gadget)) if args.gadget else G.oracle_determiner([1], T)
        spec = G.compose_complement_determiner(red, args.k, args.ell)
    elif args.recipe == "cycle":
        if not args.targets:
            raise PreconditionError("--targets is required")
        T = parse_targets(args.targets)
        dk = G.GadgetSpec.from_json(_load_json(args.gadget)) if args.gadget else G.oracle_determiner(T.clique_colors, T)
        h = args.h
        if h is None:
            from ramseymin.gamma import clique_ramsey_number

            t = dk.targets.target(T.clique_colors[0]).t
            h = clique_ramsey_number(len(T.clique_colors), t)
        spec = G.build_cycle_determiner(dk, h)
    else:
        if not (args.targets and args.graph and args.e and args.f and args.X):
            raise PreconditionError("sender recipe needs --targets --graph --e --f --X")
        T = parse_targets(args.targets)
        X = _colors(args.X)
        d = G.GadgetSpec.from_json(_load_json(args.gadget)) if args.gadget else G.oracle_determiner(X, T)
        link = None
        if args.link:
            link = Constraints().link(_edge(args.e), _edge(args.f), args.sign == "positive")
        spec = G.build_set_sender(_graph(args.graph), _edge(args.e), _edge(args.f), d, args.sign == "positive", X, link)
    cert = _gadget_cert(spec, args.budget)
    _emit(cert)
    return 0 if cert["payload"]["exhaustive"] else 2


def cmd_gadget_search(args) -> int:
    from ramseymin.gadgets import parse_role, search_gadget

    T = parse_targets(args.targets)
    with open(args.catalog) as fh:
        stream = list(read_graph6_lines(fh))
    spec = search_gadget(parse_role(args.role), _colors(args.X), T, args.vertices, stream, budget=args.budget)
    if spec is None:
        _emit({"found": False, "role": args.role, "X": _colors(args.X), "targets": str(T), "searched": len(stream)})
        return 0
    _emit(_gadget_cert(spec, args.budget))
    return 0


def cmd_construct(args) -> int:
    from ramseymin.constructions import skeleton_dichotomy

    params = {"construction": args.kind}
    if args.kind == "tree-clique":
        params.update(t=args.t, ell=args.ell)
        if args.tree:
            params["tree"] = args.tree
    elif args.kind == "cycle-cycle":
        params.update(k=args.k, ell=args.ell)
    elif args.kind == "clique-cycle":
        params.update(t=args.t, ell=args.ell)
    else:
        if not args.pattern:
            raise PreconditionError("--pattern is required")
        doc = _load_json(args.pattern)
        pattern = doc["payload"]["witness"] if "payload" in doc else doc
        params.update(pattern=pattern, ell=args.ell, t=args.t, library=bool(args.library))
    missing = [k for k, v in params.items() if v is None]
    if missing:
        raise PreconditionError(f"missing parameters: {missing}")
    host = certs.build_host(params)
    payload = {"host": host.to_json(), "apexDegree": host.apex_degree, "vertices": host.graph.n}
    if not args.no_verify:
        d = skeleton_dichotomy(host, budget=args.budget)
        _log(f"nodes={d.nodes}")
        payload.update(host_arrows=d.host_arrows, apexless_arrows=d.apexless_arrows,
                       apexless_witness=coloring_to_json(d.apexless_witness) if d.apexless_witness else None)
    _emit(certs.make("construction", params, payload))
    return 0


def cmd_packing(args) -> int:
    from ramseymin.packing import compute_p

    cert = compute_p(args.q1, args.q2, args.t, args.nmax, budget=args.budget)
    inputs = {"q1": args.q1, "q2": args.q2, "t": args.t, "nMax": args.nmax}
    if cert is None:
        payload = {"value": None}
    else:
        _log(f"attestation={cert.attestation}")
        payload = {"value": cert.value, "witness": cert.witness.to_json()}
    _emit(certs.make("packing", inputs, payload))
    return 0


def cmd_gamma_sample(args) -> int:
    from ramseymin import gamma

    inputs = {"n": args.n, "ell": args.ell, "t": args.t, "q1": args.q1, "q2": args.q2, "A": args.A,
              "seed": args.seed, "h": args.h}
    params = gamma.GammaParams(**inputs)
    inputs["h"] = params.h
    hg = gamma.sample_hypergraph(params)
    clean = gamma.remove_short_cycles(hg, params.ell)
    payload = {
        "p_h": params.p_h,
        "edges": hg.num_edges,
        "removed": len(clean.removed),
        "removal_fraction": clean.removal_fraction,
        "hypergraph": hg.to_json(),
        "cleaned": clean.hypergraph.to_json(),
    }
    _emit(certs.make("gamma", inputs, payload))
    return 0


def cmd_verify(args) -> int:
    try:
        doc = _load_json(args.certificate)
        certs.check(doc, deep=args.deep)
    except (certs.CertificateError, json.JSONDecodeError, PreconditionError) as exc:
        _emit({"valid": False, "error": str(exc)})
        return 1
    _emit({"valid": True, "kind": doc["kind"]})
    return 0


# -- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ramseymin", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def budget(p):
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="search node limit")

    p = sub.add_parser("arrow", help="decide G -> (H_1, ..., H_q)")
    p.add_argument("graph", help="graph6 string or file")
    p.add_argument("targets", help='e.g. "K3,C4" or "C4x2,K3"')
    p.add_argument("--forced", help="JSON file: [[u, v, colour], ...] or a constraints object")
    p.add_argument("--threads", type=int, default=1)
    budget(p)
    p.set_defaults(func=cmd_arrow)

    p = sub.add_parser("minimal", help="Ramsey-minimality check")
    p.add_argument("graph")
    p.add_argument("targets")
    budget(p)
    p.set_defaults(func=cmd_minimal)

    gp = sub.add_parser("gadget", help="determiners and senders")
    gsub = gp.add_subparsers(dest="action", required=True)
    p = gsub.add_parser("verify")
    p.add_argument("spec", help="gadget JSON file")
    budget(p)
    p.set_defaults(func=cmd_gadget_verify)
    p = gsub.add_parser("compose")
    p.add_argument("recipe", choices=["complement", "cycle", "sender"])
    p.add_argument("--gadget", help="determiner JSON (default: an oracle determiner)")
    p.add_argument("--k", type=int)
    p.add_argument("--ell", type=int)
    p.add_argument("--h", type=int)
    p.add_argument("--targets")
    p.add_argument("--graph", help="sender skeleton (graph6)")
    p.add_argument("--e")
    p.add_argument("--f")
    p.add_argument("--X")
    p.add_argument("--sign", choices=["positive", "negative"], default="positive")
    p.add_argument("--link", action="store_true", help="impose the sender relation on e, f as a constraint")
    budget(p)
    p.set_defaults(func=cmd_gadget_compose)
    p = gsub.add_parser("search")
    p.add_argument("--role", required=True, choices=["determiner", "positive", "negative"])
    p.add_argument("--X", required=True)
    p.add_argument("--targets", required=True)
    p.add_argument("--vertices", type=int, required=True)
    p.add_argument("--catalog", required=True, help="file of graph6 lines")
    budget(p)
    p.set_defaults(func=cmd_gadget_search)

    p = sub.add_parser("construct", help="build a host graph and check its dichotomy")
    p.add_argument("kind", choices=["tree-clique", "cycle-cycle", "clique-cycle", "packing"])
    p.add_argument("--t", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--ell", type=int)
    p.add_argument("--tree", help="tree target, e.g. P3 or T:<graph6>")
    p.add_argument("--pattern", help="pattern JSON or packing certificate")
    p.add_argument("--library", action="store_true", help="use sender/determiner gadgets instead of pinned colours")
    p.add_argument("--no-verify", action="store_true")
    budget(p)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("packing", help="compute P_{q1,q2}(t)")
    p.add_argument("q1", type=int)
    p.add_argument("q2", type=int)
    p.add_argument("t", type=int)
    p.add_argument("nmax", type=int)
    p.add_argument("--budget", type=int, default=10**7)
    p.set_defaults(func=cmd_packing)

    gp = sub.add_parser("gamma", help="random hypergraph construction")
    gsub = gp.add_subparsers(dest="action", required=True)
    p = gsub.add_parser("sample")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--h", type=int)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--A", type=float, default=1.0)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--t", type=int, default=3)
    p.add_argument("--q1", type=int, default=1)
    p.add_argument("--q2", type=int, default=1)
    p.set_defaults(func=cmd_gamma_sample)

    p = sub.add_parser("verify", help="re-check a certificate")
    p.add_argument("certificate")
    p.add_argument("--deep", action="store_true", help="also re-decide claims that carry no witness")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        _log(f"budget exceeded: {exc}")
        return 2
    except (PreconditionError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        _log(f"error: {exc}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
