"""Host graphs with a low-degree apex.

Each builder returns a graph G with a distinguished vertex v such that G
arrows the targets while G - v does not, so any Ramsey-minimal subgraph keeps
v with its small degree.  Gadget positions are filled either with real
gadget graphs or, by default, with oracle gadgets (colour constraints on the
host edge), which keeps the hosts at desk scale.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from ramseymin.arrowing import DEFAULT_BUDGET, ArrowReport, Constraints, arrows
from ramseymin.gadgets import Builder, GadgetSpec, oracle_determiner, oracle_sender
from ramseymin.graph import (
    Clique,
    Cycle,
    Graph,
    PreconditionError,
    TargetTuple,
    Tree,
    complete_multipartite,
    path_tree,
)
from ramseymin.packing import ColorPattern, verify_pattern


@dataclass(frozen=True)
class HostGraph:
    graph: Graph
    apex: int
    targets: TargetTuple
    constraints: Constraints = field(default_factory=Constraints)
    provenance: dict = field(default_factory=dict)

    @property
    def forced(self) -> dict:
        return {e: next(iter(cs)) for e, cs in self.constraints.allowed.items() if len(cs) == 1}

    @property
    def apex_degree(self) -> int:
        return self.graph.degree(self.apex)

    def without_apex(self) -> Graph:
        return self.graph.isolate(self.apex)

    def to_json(self) -> dict:
        from ramseymin.graph6 import to_graph6

        return {
            "graph6": to_graph6(self.graph),
            "apex": self.apex,
            "targets": str(self.targets),
            "forced": [[u, v, c] for (u, v), c in sorted(self.forced.items())],
            "constraints": self.constraints.to_json(),
            "provenance": self.provenance,
        }


def _check_degree(host: HostGraph, claimed: int) -> HostGraph:
    if host.apex_degree != claimed:
        raise AssertionError(f"apex degree {host.apex_degree} differs from the claimed {claimed}")
    return host


def build_tree_clique_host(t: int, ell: int, tree: Tree | None = None) -> HostGraph:
    """K_t with apex 0; every other vertex of it is glued to one vertex of a
    fresh K_{(t-1)(ell-1)}.  Targets (K_t, tree on ell vertices)."""
    if t < 3 or ell < 2:
        raise PreconditionError("need t >= 3 and ell >= 2")
    tree = tree if tree is not None else path_tree(ell)
    if tree.order != ell:
        raise PreconditionError(f"tree has {tree.order} vertices, expected {ell}")
    m = (t - 1) * (ell - 1)
    b = Builder(t)
    for u, w in itertools.combinations(range(t), 2):
        b.add_edge(u, w)
    for u in range(1, t):
        block = [u] + [b.vertex(("K", u, i)) for i in range(1, m)]
        for x, y in itertools.combinations(block, 2):
            b.add_edge(x, y)
    host = HostGraph(b.freeze(), 0, TargetTuple.of(Clique(t), tree), b.cons,
                     {"construction": "tree-clique", "t": t, "ell": ell, "tree": str(tree)})
    return _check_degree(host, t - 1)


def _fill(b: Builder, edges, color: int, gadget: GadgetSpec | None, targets: TargetTuple):
    g = gadget if gadget is not None else oracle_determiner([color], targets)
    if g.X != frozenset([color]):
        raise PreconditionError(f"gadget must be a {{{color}}}-determiner")
    for e in edges:
        b.attach(g, [e])


def build_cycle_cycle_host(k: int, ell: int, d_red: GadgetSpec | None = None, d_blue: GadgetSpec | None = None) -> HostGraph:
    """Branch vertices x, y, z; between each pair a (k-2)-path in colour 1
    and an (ell-2)-path in colour 2; apex joined to x, y, z."""
    if not 4 <= k < ell:
        raise PreconditionError("need 4 <= k < ell")
    T = TargetTuple.of(Cycle(k), Cycle(ell))
    b = Builder(3)
    for a, c in itertools.combinations(range(3), 2):
        _fill(b, b.path(a, c, k - 2, ("red", a, c)), 1, d_red, T)
        _fill(b, b.path(a, c, ell - 2, ("blue", a, c)), 2, d_blue, T)
    v = b.vertex("v")
    for x in range(3):
        b.add_edge(v, x)
    mode = "oracle" if d_red is None and d_blue is None else "gadget"
    host = HostGraph(b.freeze(), v, T, b.cons, {"construction": "cycle-cycle", "k": k, "ell": ell, "mode": mode})
    return _check_degree(host, 3)


def build_clique_cycle_host(t: int, ell: int, d_red: GadgetSpec | None = None, d_blue: GadgetSpec | None = None) -> HostGraph:
    """K_{2,...,2} on t-1 parts in colour 1, an (ell-2)-path in colour 2
    joining the two vertices of each part, apex joined to every part vertex."""
    if t < 3 or ell < 4:
        raise PreconditionError("need t >= 3 and ell >= 4")
    T = TargetTuple.of(Clique(t), Cycle(ell))
    base = complete_multipartite([2] * (t - 1))
    b = Builder(base.n)
    for e in base.edges():
        b.add_edge(*e)
    _fill(b, base.edges(), 1, d_red, T)
    for i in range(t - 1):
        _fill(b, b.path(2 * i, 2 * i + 1, ell - 2, ("blue", i)), 2, d_blue, T)
    v = b.vertex("v")
    for x in range(base.n):
        b.add_edge(v, x)
    mode = "oracle" if d_red is None and d_blue is None else "gadget"
    host = HostGraph(b.freeze(), v, T, b.cons, {"construction": "clique-cycle", "t": t, "ell": ell, "mode": mode})
    return _check_degree(host, 2 * (t - 1))


def build_packing_host(p: ColorPattern, ell: int, t: int, library: dict | None = None) -> HostGraph:
    """Pattern on [n]; for each cycle colour i and pair u, w of [n] a fresh
    (ell-2)-path; apex joined to [n].  Targets: q1 copies of C_ell then q2
    copies of K_t, and p must be valid with parameter t - 1.

    Without a library every pattern/path edge is pinned to its colour.  With
    a library, a matching e_1..e_q is added: palettes of size >= 2 get
    negative senders between matching edges and positive senders from e_i
    to every colour-i edge (keys neg_cycle, pos_cycle, neg_clique,
    pos_clique); a palette of size 1 gets a determiner on every edge
    instead (keys det_cycle, det_clique).  The value "oracle" for the
    library builds all of these from constraint-only gadgets.
    """
    if ell < 4:
        raise PreconditionError("need ell >= 4")
    if not verify_pattern(p, t - 1).valid:
        raise PreconditionError("pattern is not valid")
    T = TargetTuple.mixed(p.q1, p.q2, ell, t)
    n = p.n
    b = Builder(n)
    colored = {c: [] for c in T.colors}
    for j in range(p.q1 + 1, p.q + 1):
        for e in p.graph_of(j).edges():
            b.add_edge(*e)
            colored[j].append(e)
    for i in T.cycle_colors:
        for u, w in itertools.combinations(range(n), 2):
            colored[i] += b.path(u, w, ell - 2, ("P", i, u, w))
    v = b.vertex("v")
    for x in range(n):
        b.add_edge(v, x)

    if library is None:
        for c, es in colored.items():
            for e in es:
                b.force(e, [c])
        mode = "oracle"
    else:
        lib = _oracle_library(T) if library == "oracle" else library
        for palette, kind in ((T.cycle_colors, "cycle"), (T.clique_colors, "clique")):
            if not palette:
                continue
            if len(palette) == 1:
                (c,) = palette
                for e in colored[c]:
                    b.attach(lib[f"det_{kind}"], [e])
                continue
            match = {}
            for c in palette:
                x, y = b.vertex(("e", c, 0)), b.vertex(("e", c, 1))
                b.add_edge(x, y)
                match[c] = (x, y)
            for c1, c2 in itertools.combinations(palette, 2):
                b.attach(lib[f"neg_{kind}"], [match[c1], match[c2]])
            for c in palette:
                for e in colored[c]:
                    b.attach(lib[f"pos_{kind}"], [match[c], e])
        mode = "library"
    host = HostGraph(b.freeze(), v, T, b.cons, {"construction": "packing", "n": n, "q1": p.q1, "q2": p.q2,
                                                "ell": ell, "t": t, "mode": mode})
    return _check_degree(host, n)


def _oracle_library(T: TargetTuple) -> dict:
    lib = {}
    for palette, kind in ((T.cycle_colors, "cycle"), (T.clique_colors, "clique")):
        if len(palette) == 1:
            lib[f"det_{kind}"] = oracle_determiner(palette, T)
        elif palette:
            lib[f"neg_{kind}"] = oracle_sender(palette, False, T)
            lib[f"pos_{kind}"] = oracle_sender(palette, True, T)
    return lib


@dataclass
class Dichotomy:
    host_arrows: bool
    apexless_arrows: bool
    apexless_witness: dict | None
    nodes: int

    @property
    def holds(self) -> bool:
        return self.host_arrows and not self.apexless_arrows


def skeleton_dichotomy(host: HostGraph, *, budget: int = DEFAULT_BUDGET) -> Dichotomy:
    """Constrained arrowing of the host and of the host with its apex removed."""
    with_apex: ArrowReport = arrows(host.graph, host.targets, host.constraints, budget=budget)
    without: ArrowReport = arrows(host.without_apex(), host.targets, host.constraints, budget=budget)
    return Dichotomy(with_apex.arrows, without.arrows, without.witness, with_apex.nodes + without.nodes)
