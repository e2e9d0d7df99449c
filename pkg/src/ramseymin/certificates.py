"""Self-checking JSON certificates.

A certificate records what was asked (``inputs``), what was found
(``payload``), a SHA-256 of the canonical inputs and the tool version.
``check`` re-validates every embedded witness (colourings, patterns,
rebuilt hosts) without searching.  Negative claims that carry no witness
("no free colouring exists") are only re-decided when ``deep`` is set.
"""

from __future__ import annotations

import hashlib
import json

from ramseymin import __version__
from ramseymin.arrowing import (
    Constraints,
    arrows,
    coloring_from_json,
    is_free,
)
from ramseymin.graph import Graph, parse_targets

KINDS = ("arrow", "minimal", "gadget", "packing", "construction", "gamma")


class CertificateError(ValueError):
    pass


def canonical_json(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def inputs_hash(inputs: dict) -> str:
    return hashlib.sha256(canonical_json(inputs).encode()).hexdigest()


def make(kind: str, inputs: dict, payload: dict) -> dict:
    if kind not in KINDS:
        raise ValueError(f"unknown certificate kind {kind!r}")
    return {
        "kind": kind,
        "inputs": inputs,
        "inputsHash": inputs_hash(inputs),
        "payload": payload,
        "toolVersion": __version__,
    }


def _require(doc: dict, *keys):
    for k in keys:
        if k not in doc:
            raise CertificateError(f"missing field {k!r}")


def _free_witness(g: Graph, targets, cons: Constraints, coloring_doc, what: str):
    col = coloring_from_json(coloring_doc)
    if set(col) != set(g.edges()):
        raise CertificateError(f"{what}: colouring does not cover exactly the edges")
    if not cons.admits(col):
        raise CertificateError(f"{what}: colouring violates the constraints")
    if not is_free(g, targets, col):
        raise CertificateError(f"{what}: colouring has a monochromatic target")
    return col


def check(doc: dict, deep: bool = False) -> None:
    """Raise CertificateError unless the certificate re-validates."""
    if not isinstance(doc, dict):
        raise CertificateError("certificate must be a JSON object")
    _require(doc, "kind", "inputs", "inputsHash", "payload", "toolVersion")
    if doc["kind"] not in KINDS:
        raise CertificateError(f"unknown kind {doc['kind']!r}")
    if inputs_hash(doc["inputs"]) != doc["inputsHash"]:
        raise CertificateError("inputs hash mismatch")
    try:
        _CHECKERS[doc["kind"]](doc["inputs"], doc["payload"], deep)
    except CertificateError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise CertificateError(f"malformed certificate: {exc!r}") from exc


def _graph(inputs: dict) -> Graph:
    from ramseymin.graph6 import from_graph6

    return from_graph6(inputs["graph6"])


def _check_arrow(inputs: dict, payload: dict, deep: bool):
    g = _graph(inputs)
    T = parse_targets(inputs["targets"])
    cons = Constraints.from_json(inputs.get("constraints"))
    _require(payload, "arrows")
    if payload["arrows"]:
        if payload.get("witness") is not None:
            raise CertificateError("an arrowing claim cannot carry a free colouring")
        if deep and not arrows(g, T, cons).arrows:
            raise CertificateError("re-decision found a free colouring")
    else:
        _free_witness(g, T, cons, payload["witness"], "witness")


def _check_minimal(inputs: dict, payload: dict, deep: bool):
    g = _graph(inputs)
    T = parse_targets(inputs["targets"])
    _require(payload, "minimal", "failing", "witnesses")
    core, kept = g.drop_isolated()
    edges = {(kept[u], kept[v]) for u, v in core.edges()}
    wit = {tuple(e): c for e, c in payload["witnesses"]}
    for e, col in wit.items():
        if e not in edges:
            raise CertificateError(f"witness for non-edge {e}")
        _free_witness(g.remove_edges([e]), T, Constraints(), col, f"G - {e}")
    if payload["minimal"]:
        if set(wit) != edges:
            raise CertificateError("minimality claim needs a witness for every edge")
        if deep and not arrows(g, T).arrows:
            raise CertificateError("re-decision: graph does not arrow")
    elif payload["failing"] == "not Ramsey":
        _free_witness(g, T, Constraints(), payload["coloring"], "non-Ramsey witness")
    elif deep:
        e = tuple(payload["failing"])
        if not arrows(g.remove_edges([e]), T).arrows:
            raise CertificateError("re-decision: failing edge deletion does not arrow")


def _check_gadget(inputs: dict, payload: dict, deep: bool):
    from ramseymin.gadgets import DETERMINER, GadgetSpec, verify

    spec = GadgetSpec.from_json(inputs["spec"])
    g, T, cons = spec.graph, spec.targets, spec.constraints
    X = spec.X
    positive = spec.role != "negative-sender"

    def allowed(cols):
        if spec.role == DETERMINER:
            return cols[0] in X
        return cols[0] in X and cols[1] in X and (cols[0] == cols[1]) == positive

    ax = {a["name"][1]: a for a in payload["axioms"]}
    a1, a2, a3 = ax["1"], ax["2"], ax["3"]
    if a1["passed"]:
        _free_witness(g, T, cons, a1["witness"]["coloring"], "axiom 1")
    if a2["passed"] is False:
        col = _free_witness(g, T, cons, a2["witness"]["coloring"], "axiom 2")
        if allowed([col[e] for e in spec.signals]):
            raise CertificateError("axiom 2 witness does not violate the axiom")
    if a3["passed"]:
        seen = set()
        for w in a3["witness"]:
            col = _free_witness(g, T, cons, w["coloring"], "axiom 3")
            seen.add(tuple(col[e] for e in spec.signals))
        need = {c for c in _required_pairs(spec)}
        if not need <= seen:
            raise CertificateError("axiom 3 witnesses do not realise every required colour")
    if payload["valid"] != (payload["exhaustive"] and all(a["passed"] for a in (a1, a2, a3))):
        raise CertificateError("validity flag inconsistent with axioms")
    if deep and verify(spec).valid != payload["valid"]:
        raise CertificateError("re-verification disagrees")


def _required_pairs(spec):
    import itertools

    if spec.role == "determiner":
        return [(c,) for c in spec.X]
    positive = spec.role == "positive-sender"
    return [(a, b) for a, b in itertools.product(sorted(spec.X), repeat=2) if (a == b) == positive]


def _check_packing(inputs: dict, payload: dict, deep: bool):
    from ramseymin.packing import ColorPattern, compute_p, verify_pattern

    _require(payload, "value")
    if payload["value"] is None:
        if deep and compute_p(inputs["q1"], inputs["q2"], inputs["t"], inputs["nMax"]) is not None:
            raise CertificateError("re-decision found a pattern")
        return
    p = ColorPattern.from_json(payload["witness"])
    if p.n != payload["value"] or p.q1 != inputs["q1"] or p.q2 != inputs["q2"]:
        raise CertificateError("witness shape does not match the claim")
    if payload["value"] > inputs["nMax"]:
        raise CertificateError("value exceeds nMax")
    if not verify_pattern(p, inputs["t"]).valid:
        raise CertificateError("witness pattern is not valid")
    if deep:
        again = compute_p(inputs["q1"], inputs["q2"], inputs["t"], inputs["nMax"])
        if again is None or again.value != payload["value"]:
            raise CertificateError("re-computation disagrees")


def build_host(params: dict):
    from ramseymin import constructions as C
    from ramseymin.packing import ColorPattern

    kind = params["construction"]
    if kind == "tree-clique":
        tree = parse_targets(params["tree"]).targets[0] if params.get("tree") else None
        return C.build_tree_clique_host(params["t"], params["ell"], tree)
    if kind == "cycle-cycle":
        return C.build_cycle_cycle_host(params["k"], params["ell"])
    if kind == "clique-cycle":
        return C.build_clique_cycle_host(params["t"], params["ell"])
    if kind == "packing":
        lib = "oracle" if params.get("library") else None
        return C.build_packing_host(ColorPattern.from_json(params["pattern"]), params["ell"], params["t"], lib)
    raise CertificateError(f"unknown construction {kind!r}")


def _check_construction(inputs: dict, payload: dict, deep: bool):
    host = build_host(inputs)
    doc = host.to_json()
    for key in ("graph6", "apex", "forced", "constraints", "targets"):
        if payload["host"][key] != doc[key]:
            raise CertificateError(f"rebuilt host differs in {key!r}")
    if payload.get("apexless_witness") is not None:
        _free_witness(host.without_apex(), host.targets, host.constraints, payload["apexless_witness"],
                      "apexless colouring")
    if deep:
        from ramseymin.constructions import skeleton_dichotomy

        d = skeleton_dichotomy(host)
        if d.host_arrows != payload["host_arrows"] or d.apexless_arrows != payload["apexless_arrows"]:
            raise CertificateError("re-decision disagrees")


def _check_gamma(inputs: dict, payload: dict, deep: bool):
    from ramseymin import gamma

    params = gamma.GammaParams(**inputs)
    hg = gamma.HyperGraph.from_json(payload["hypergraph"])
    clean = gamma.HyperGraph.from_json(payload["cleaned"])
    if hg.n != params.n or hg.h != params.h:
        raise CertificateError("hypergraph shape does not match the parameters")
    if not set(clean.edges) <= set(hg.edges):
        raise CertificateError("cleaned hypergraph is not a subhypergraph of the sample")
    if gamma.find_short_berge_cycles(clean, params.ell):
        raise CertificateError("cleaned hypergraph still has short cycles")
    if deep and gamma.sample_hypergraph(params).edges != hg.edges:
        raise CertificateError("re-sampling with the seed gives a different hypergraph")


_CHECKERS = {
    "arrow": _check_arrow,
    "minimal": _check_minimal,
    "gadget": _check_gadget,
    "packing": _check_packing,
    "construction": _check_construction,
    "gamma": _check_gamma,
}
