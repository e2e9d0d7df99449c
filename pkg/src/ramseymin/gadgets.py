"""Set-determiners and set-senders: axiom checks, attachment and composition.

A determiner is a graph D with a signal edge d and colour set X such that
(1) D has a free colouring, (2) d lands in X in every free colouring and
(3) every colour of X is realised on d by some free colouring.  A sender has
two signal edges e, f whose colours lie in X and are forced equal (positive)
or distinct (negative), again with every admissible pair realised.

Gadgets may carry ``Constraints``.  An *oracle* gadget is a bare edge (or
pair of edges) whose behaviour is imposed as a constraint rather than by
graph structure; attaching it copies the constraint onto the host edge.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from ramseymin.arrowing import (
    DEFAULT_BUDGET,
    BudgetExceeded,
    Coloring,
    Constraints,
    arrows,
    coloring_to_json,
    is_free,
    monochromatic_copy,
    search,
)
from ramseymin.graph import (
    Cycle,
    Edge,
    Graph,
    PreconditionError,
    TargetTuple,
    complete_graph,
    cycle_graph,
    edge_distance,
    girth,
    norm,
)

DETERMINER = "determiner"
POSITIVE = "positive-sender"
NEGATIVE = "negative-sender"
ROLES = (DETERMINER, POSITIVE, NEGATIVE)


@dataclass(frozen=True)
class GadgetSpec:
    graph: Graph
    signals: tuple  # one edge for determiners, two for senders
    X: frozenset
    role: str
    targets: TargetTuple
    constraints: Constraints = field(default_factory=Constraints)
    oracle: bool = False

    def __post_init__(self):
        object.__setattr__(self, "signals", tuple(norm(*e) for e in self.signals))
        object.__setattr__(self, "X", frozenset(self.X))
        if self.role not in ROLES:
            raise PreconditionError(f"unknown role {self.role!r}")
        want = 1 if self.role == DETERMINER else 2
        if len(self.signals) != want:
            raise PreconditionError(f"{self.role} needs {want} signal edge(s)")
        for e in self.signals:
            if not self.graph.has_edge(*e):
                raise PreconditionError(f"signal edge {e} not in graph")
        if not self.X or not self.X <= set(self.targets.colors):
            raise PreconditionError("X must be a nonempty subset of the palette")
        if self.role == NEGATIVE and len(self.X) < 2:
            raise PreconditionError("a negative sender needs |X| >= 2")

    @property
    def signal_vertices(self) -> list[int]:
        return sorted({v for e in self.signals for v in e})

    def to_json(self) -> dict:
        from ramseymin.graph6 import to_graph6

        return {
            "graph6": to_graph6(self.graph),
            "signals": [list(e) for e in self.signals],
            "X": sorted(self.X),
            "role": self.role,
            "targets": str(self.targets),
            "constraints": self.constraints.to_json(),
            "oracle": self.oracle,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "GadgetSpec":
        from ramseymin.graph import parse_targets
        from ramseymin.graph6 import from_graph6

        return cls(
            from_graph6(doc["graph6"]),
            tuple(tuple(e) for e in doc["signals"]),
            frozenset(doc["X"]),
            parse_role(doc["role"]),
            parse_targets(doc["targets"]),
            Constraints.from_json(doc.get("constraints")),
            bool(doc.get("oracle", False)),
        )


def oracle_determiner(X: Iterable[int], targets: TargetTuple) -> GadgetSpec:
    X = frozenset(X)
    return GadgetSpec(Graph.from_edges(2, [(0, 1)]), ((0, 1),), X, DETERMINER, targets,
                      Constraints({(0, 1): X}), oracle=True)


def oracle_sender(X: Iterable[int], positive: bool, targets: TargetTuple) -> GadgetSpec:
    X = frozenset(X)
    g = Graph.from_edges(4, [(0, 1), (2, 3)])
    cons = Constraints({(0, 1): X, (2, 3): X}, (((0, 1), (2, 3), positive),))
    return GadgetSpec(g, ((0, 1), (2, 3)), X, POSITIVE if positive else NEGATIVE, targets, cons, oracle=True)


# -- verification ---------------------------------------------------------------


@dataclass
class AxiomResult:
    name: str
    passed: bool | None  # None = undecided (budget)
    witness: object = None


@dataclass
class GadgetReport:
    axioms: list  # three AxiomResult entries
    exhaustive: bool
    nodes: int = 0

    @property
    def valid(self) -> bool:
        return self.exhaustive and all(a.passed for a in self.axioms)

    def to_json(self) -> dict:
        def enc(w):
            if isinstance(w, list):
                return [enc(x) for x in w]
            if isinstance(w, dict) and all(isinstance(k, tuple) for k in w):
                return {"coloring": coloring_to_json(w)}
            return w

        return {
            "valid": self.valid,
            "exhaustive": self.exhaustive,
            "axioms": [{"name": a.name, "passed": a.passed, "witness": enc(a.witness)} for a in self.axioms],
        }


def _pin(cons: Constraints, pins: Sequence[tuple[Edge, int]]) -> Constraints:
    for e, c in pins:
        cons = cons.force(e, c)
    return cons


def _run_axioms(spec: GadgetSpec, forbidden, required, budget: int) -> GadgetReport:
    """Shared driver: axiom 1 = not arrowing, 2 = forbidden pins all fail,
    3 = required pins all succeed.  Pins are lists of (edge, colour)."""
    g, T, base = spec.graph, spec.targets, spec.constraints
    nodes = 0
    exhaustive = True
    names = ("D", "S")[spec.role != DETERMINER]

    out = search(g, T, base, budget=budget)
    nodes += out.nodes
    if out.status == "budget":
        ax1 = AxiomResult(f"{names}1", None, "budget exceeded")
        exhaustive = False
    elif out.coloring is None:
        ax1 = AxiomResult(f"{names}1", False, {"arrows": True, "nodes": out.nodes})
    else:
        ax1 = AxiomResult(f"{names}1", True, out.coloring)

    ax2 = AxiomResult(f"{names}2", True)
    for pins in forbidden:
        out = search(g, T, _pin(base, pins), budget=budget)
        nodes += out.nodes
        if out.status == "budget":
            exhaustive = False
            ax2 = AxiomResult(f"{names}2", None, {"undecided": [list(c for _, c in pins)]})
            continue
        if out.coloring is not None:
            ax2 = AxiomResult(f"{names}2", False, out.coloring)
            break

    ax3 = AxiomResult(f"{names}3", True, [])
    for pins in required:
        out = search(g, T, _pin(base, pins), budget=budget)
        nodes += out.nodes
        if out.status == "budget":
            exhaustive = False
            ax3 = AxiomResult(f"{names}3", None, {"undecided": [c for _, c in pins]})
            continue
        if out.coloring is None:
            ax3 = AxiomResult(f"{names}3", False, {"missing": [c for _, c in pins]})
            break
        if ax3.passed:
            ax3.witness.append(out.coloring)
    return GadgetReport([ax1, ax2, ax3], exhaustive, nodes)


def verify_determiner(spec: GadgetSpec, *, budget: int = DEFAULT_BUDGET) -> GadgetReport:
    if spec.role != DETERMINER:
        raise PreconditionError("not a determiner spec")
    d = spec.signals[0]
    colors = list(spec.targets.colors)
    forbidden = [[(d, c)] for c in colors if c not in spec.X]
    required = [[(d, c)] for c in sorted(spec.X)]
    return _run_axioms(spec, forbidden, required, budget)


def verify_sender(spec: GadgetSpec, *, budget: int = DEFAULT_BUDGET) -> GadgetReport:
    """All ordered colour pairs on (e, f) are tried, so both orientations of
    the signal pair are covered."""
    if spec.role == DETERMINER:
        raise PreconditionError("not a sender spec")
    e, f = spec.signals
    positive = spec.role == POSITIVE
    forbidden, required = [], []
    for c1, c2 in itertools.product(spec.targets.colors, repeat=2):
        ok = c1 in spec.X and c2 in spec.X and (c1 == c2) == positive
        (required if ok else forbidden).append([(e, c1), (f, c2)])
    return _run_axioms(spec, forbidden, required, budget)


def verify(spec: GadgetSpec, *, budget: int = DEFAULT_BUDGET) -> GadgetReport:
    if spec.role == DETERMINER:
        return verify_determiner(spec, budget=budget)
    return verify_sender(spec, budget=budget)


# -- attachment -------------------------------------------------------------------


class Builder:
    """Mutable edge list plus constraints, used while assembling a gadget
    or host graph; ``freeze`` produces the immutable Graph."""

    def __init__(self, n: int = 0):
        self.n = n
        self.edges: set = set()
        self.cons = Constraints()
        self.labels: list = [None] * n

    def vertex(self, label=None) -> int:
        self.n += 1
        self.labels.append(label)
        return self.n - 1

    def add_edge(self, u: int, v: int):
        if u == v:
            raise PreconditionError("loop")
        self.edges.add(norm(u, v))

    def path(self, a: int, b: int, length: int, tag=None) -> list[Edge]:
        """Fresh internal vertices; returns the path's edges in order."""
        if length < 1:
            raise PreconditionError("path length must be >= 1")
        seq = [a] + [self.vertex((tag, i)) for i in range(1, length)] + [b]
        out = []
        for x, y in zip(seq, seq[1:]):
            self.add_edge(x, y)
            out.append(norm(x, y))
        return out

    def force(self, e: Edge, colors):
        self.cons = self.cons.restrict(e, colors)

    def attach(self, gadget: GadgetSpec, host_edges: Sequence[Edge]):
        """Copy ``gadget`` so its signal edges coincide with ``host_edges``.

        Signal endpoints are identified in the order given; every other
        gadget vertex is fresh.
        """
        if len(host_edges) != len(gadget.signals):
            raise PreconditionError("wrong number of host edges for this gadget")
        vmap = {}
        for (a, b), (x, y) in zip(gadget.signals, host_edges):
            for s, h in ((a, x), (b, y)):
                if vmap.get(s, h) != h:
                    raise PreconditionError("signal edges share a vertex inconsistently")
                vmap[s] = h
        for s in range(gadget.graph.n):
            if s not in vmap:
                vmap[s] = self.vertex(("gadget", s))
        for u, v in gadget.graph.edges():
            self.add_edge(vmap[u], vmap[v])
        self.cons = self.cons.merge(gadget.constraints.relabel(vmap))
        return vmap

    def freeze(self) -> Graph:
        labels = None
        if any(x is not None for x in self.labels):
            labels = tuple(x if x is not None else i for i, x in enumerate(self.labels))
        return Graph.from_edges(self.n, sorted(self.edges), labels)


def compose_complement_determiner(d_red: GadgetSpec, k: int, ell: int | None = None) -> GadgetSpec:
    """Fresh C_k with signal edge e; a copy of d_red on every other edge.

    Under targets (C_k, C_ell) with k < ell, every free colouring puts the
    non-signal edges in colour 1, so e must take colour 2.
    """
    T = d_red.targets
    if d_red.role != DETERMINER or d_red.X != frozenset([1]):
        raise PreconditionError("need a {1}-determiner")
    h1, h2 = T.targets[0], T.targets[-1]
    if T.q != 2 or not isinstance(h1, Cycle) or not isinstance(h2, Cycle):
        raise PreconditionError("need a pair of cycle targets")
    if h1.length != k:
        raise PreconditionError(f"first target is C{h1.length}, not C{k}")
    if ell is not None and h2.length != ell:
        raise PreconditionError(f"second target is C{h2.length}, not C{ell}")
    if k >= h2.length:
        raise PreconditionError("need k < ell")
    b = Builder(k)
    cyc = cycle_graph(k).edges()
    for e in cyc:
        b.add_edge(*e)
    signal = (0, 1)
    for e in cyc:
        if e != signal:
            b.attach(d_red, [e])
    return GadgetSpec(b.freeze(), (signal,), {2}, DETERMINER, T, b.cons, oracle=d_red.oracle)


def determiner_from_minimal(g: Graph, hcopy: Sequence[int], e: Edge, targets: TargetTuple) -> GadgetSpec:
    """D = G - (H - e) for a clique H of G containing e; X = clique colours."""
    e = norm(*e)
    hs = sorted(set(hcopy))
    for u, v in itertools.combinations(hs, 2):
        if not g.has_edge(u, v):
            raise PreconditionError(f"{hs} is not a clique of G (missing {u}-{v})")
    if e[0] not in hs or e[1] not in hs:
        raise PreconditionError(f"edge {e} not inside the clique {hs}")
    drop = [f for f in itertools.combinations(hs, 2) if f != e]
    X = targets.clique_colors
    if not X:
        raise PreconditionError("target tuple has no clique colours")
    return GadgetSpec(g.remove_edges(drop), (e,), X, DETERMINER, targets)


def build_cycle_determiner(dk: GadgetSpec, h: int) -> GadgetSpec:
    """K_h with signal edge f and a copy of dk on every other edge."""
    if h < 2:
        raise PreconditionError("need h >= 2")
    if dk.role != DETERMINER:
        raise PreconditionError("need a determiner")
    T = dk.targets
    X = T.cycle_colors
    if not X:
        raise PreconditionError("target tuple has no cycle colours")
    b = Builder(h)
    base = complete_graph(h).edges()
    for e in base:
        b.add_edge(*e)
    f = (0, 1)
    for e in base:
        if e != f:
            b.attach(dk, [e])
    return GadgetSpec(b.freeze(), (f,), X, DETERMINER, T, b.cons, oracle=dk.oracle)


def build_set_sender(
    s: Graph,
    e: Edge,
    f: Edge,
    d: GadgetSpec,
    positive: bool,
    X: Iterable[int],
    s_constraints: Constraints | None = None,
) -> GadgetSpec:
    """Sender skeleton s with a copy of determiner d glued onto each of its edges."""
    e, f = norm(*e), norm(*f)
    for x in (e, f):
        if not s.has_edge(*x):
            raise PreconditionError(f"signal edge {x} not in sender graph")
    if d.role != DETERMINER:
        raise PreconditionError("need a determiner")
    b = Builder(s.n)
    for x in s.edges():
        b.add_edge(*x)
    if s_constraints is not None:
        b.cons = b.cons.merge(s_constraints)
    for x in s.edges():
        b.attach(d, [x])
    role = POSITIVE if positive else NEGATIVE
    return GadgetSpec(b.freeze(), (e, f), X, role, d.targets, b.cons, oracle=d.oracle)


# -- safety -----------------------------------------------------------------------


def _target_length(targets: TargetTuple) -> int:
    lengths = [h.length for h in targets if isinstance(h, Cycle)]
    if not lengths:
        raise PreconditionError("structural safety needs a cycle target")
    return max(lengths)


def check_structural_safety(spec: GadgetSpec, ell: int | None = None) -> bool:
    """Girth at least ell and, for senders, signal edges at distance >= ell + 1."""
    ell = ell if ell is not None else _target_length(spec.targets)
    gi = girth(spec.graph)
    if gi is not None and gi < ell:
        return False
    if len(spec.signals) == 2:
        d = edge_distance(spec.graph, *spec.signals)
        if d is not None and d < ell + 1:
            return False
    return True


@dataclass
class ProbeResult:
    passed: bool
    counterexample: dict | None = None
    probes: int = 0


def bounded_safety_probe(spec: GadgetSpec, phi: Coloring, m: int, *, budget: int = 10**6) -> ProbeResult:
    """Try every attachment F on at most m vertices touching the gadget only
    in signal vertices, with every free colouring of F agreeing with phi on
    shared edges; fail if some union colouring is not free.

    An attachment glued at a signal edge contains that edge, so F always
    includes every signal edge whose two ends it uses.
    """
    g, T = spec.graph, spec.targets
    if m > 6:
        raise PreconditionError("probe size capped at 6 vertices")
    if not is_free(g, T, phi):
        raise PreconditionError("phi is not a free colouring of the gadget")
    if m <= 1:
        return ProbeResult(True)
    sig = spec.signal_vertices
    probes = 0
    for k in range(min(m, len(sig)) + 1):
        for shared in itertools.combinations(sig, k):
            fresh = list(range(g.n, g.n + m - k))
            pool = list(shared) + fresh
            mandatory = [e for e in spec.signals if e[0] in shared and e[1] in shared]
            optional = [norm(*p) for p in itertools.combinations(pool, 2) if norm(*p) not in mandatory]
            n_all = g.n + m - k
            for mask in range(1 << len(optional)):
                chosen = [optional[i] for i in range(len(optional)) if mask >> i & 1]
                if all(g.has_edge(*x) for x in chosen):
                    continue  # nothing outside the gadget
                f_edges = mandatory + chosen
                own = [x for x in f_edges if not g.has_edge(*x)]
                shared_edges = {x: phi[x] for x in f_edges if g.has_edge(*x)}
                fgraph = Graph.from_edges(n_all, f_edges)
                union = Graph.from_edges(n_all, g.edges() + own)
                for cols in itertools.product(T.colors, repeat=len(own)):
                    probes += 1
                    if probes > budget:
                        raise BudgetExceeded(probes, "safety probe")
                    psi = dict(shared_edges)
                    psi.update(zip(own, cols))
                    if monochromatic_copy(fgraph, T, psi) is not None:
                        continue
                    total = dict(phi)
                    total.update(psi)
                    hit = monochromatic_copy(union, T, total)
                    if hit is not None:
                        return ProbeResult(False, {
                            "F": [list(x) for x in f_edges],
                            "psi": coloring_to_json(psi),
                            "color": hit[0],
                            "copy": list(hit[1]),
                        }, probes)
    return ProbeResult(True, None, probes)


# -- search -----------------------------------------------------------------------


def search_gadget(
    role: str,
    X: Iterable[int],
    targets: TargetTuple,
    vertex_budget: int,
    graphs: Iterable[Graph],
    *,
    budget: int = DEFAULT_BUDGET,
) -> GadgetSpec | None:
    """First graph in the stream (with some signal choice) passing all axioms."""
    X = frozenset(X)
    for g in graphs:
        if g.n > vertex_budget or g.num_edges() == 0:
            continue
        edges = g.edges()
        if role == DETERMINER:
            choices = [(e,) for e in edges]
        else:
            choices = [(e, f) for e, f in itertools.combinations(edges, 2)]
        first = True
        for sig in choices:
            try:
                spec = GadgetSpec(g, sig, X, role, targets)
            except PreconditionError:
                continue
            if first:
                # axiom 1 does not depend on the signal choice
                rep = arrows(g, targets, budget=budget)
                if rep.arrows:
                    break
                first = False
            report = verify(spec, budget=budget)
            if not report.exhaustive:
                raise BudgetExceeded(report.nodes, "gadget search")
            if report.valid:
                return spec
    return None


def achievable_signal_colors(spec: GadgetSpec) -> set:
    """Brute force: tuples of signal-edge colours over all free colourings
    admitted by the constraints."""
    g, T = spec.graph, spec.targets
    edges = g.edges()
    seen = set()
    for cols in itertools.product(T.colors, repeat=len(edges)):
        col = dict(zip(edges, cols))
        if spec.constraints.admits(col) and is_free(g, T, col):
            seen.add(tuple(col[e] for e in spec.signals))
    return seen


def parse_role(text: str) -> str:
    aliases = {"determiner": DETERMINER, "positive": POSITIVE, "negative": NEGATIVE,
               POSITIVE: POSITIVE, NEGATIVE: NEGATIVE}
    if text not in aliases:
        raise PreconditionError(f"unknown role {text!r}")
    return aliases[text]

