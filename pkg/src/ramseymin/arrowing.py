"""Exact arrowing decisions by backtracking over edge colourings.

Edges are coloured one at a time in a fixed order (edges whose colour is
already pinned first, then the rest in canonical order), colours ascending.
After each assignment only copies of the target through the new edge are
looked for, so a colour class is rejected the moment it becomes non-free.
Because the order is static the first complete colouring found is the
lexicographically least free colouring, whatever the thread count.
"""

from __future__ import annotations

import itertools
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from ramseymin.graph import (
    Clique,
    Cycle,
    Edge,
    Graph,
    LemmaViolation,
    PreconditionError,
    TargetTuple,
    Tree,
    common_clique_vertex,
    contains_target,
    embed_tree,
    has_clique,
    has_path,
    norm,
)

DEFAULT_BUDGET = 10**8

Coloring = dict  # Edge -> colour in 1..q


class BudgetExceeded(RuntimeError):
    def __init__(self, nodes: int, what: str = "search"):
        super().__init__(f"budget exceeded after {nodes} nodes ({what})")
        self.nodes = nodes


@dataclass(frozen=True)
class Constraints:
    """Restrictions on admissible colourings.

    ``allowed`` maps an edge to the colours it may take; ``links`` holds
    ``(e, f, equal)`` triples requiring equal (or distinct) colours on e and
    f.  A plain partial colouring is the special case of singleton sets.
    Gadgets simulated by constraints ("oracle gadgets") are expressed here.
    """

    allowed: Mapping[Edge, frozenset] = field(default_factory=dict)
    links: tuple = ()

    @classmethod
    def forced(cls, coloring: Mapping[Edge, int] | None) -> "Constraints":
        return cls({norm(*e): frozenset([c]) for e, c in (coloring or {}).items()})

    def restrict(self, edge: Edge, colors) -> "Constraints":
        e = norm(*edge)
        colors = frozenset(colors)
        allowed = dict(self.allowed)
        allowed[e] = allowed[e] & colors if e in allowed else colors
        return Constraints(allowed, self.links)

    def force(self, edge: Edge, color: int) -> "Constraints":
        return self.restrict(edge, [color])

    def link(self, e: Edge, f: Edge, equal: bool) -> "Constraints":
        return Constraints(self.allowed, self.links + ((norm(*e), norm(*f), bool(equal)),))

    def merge(self, other: "Constraints") -> "Constraints":
        out = self
        for e, cs in other.allowed.items():
            out = out.restrict(e, cs)
        return Constraints(out.allowed, out.links + tuple(other.links))

    def relabel(self, vmap: Mapping[int, int] | Sequence[int]) -> "Constraints":
        def m(e):
            return norm(vmap[e[0]], vmap[e[1]])

        out = Constraints()
        for e, cs in self.allowed.items():
            out = out.restrict(m(e), cs)
        return Constraints(out.allowed, tuple((m(e), m(f), eq) for e, f, eq in self.links))

    def is_empty(self) -> bool:
        return not self.allowed and not self.links

    def admits(self, coloring: Mapping[Edge, int]) -> bool:
        for e, cs in self.allowed.items():
            if e in coloring and coloring[e] not in cs:
                return False
        for e, f, eq in self.links:
            if e in coloring and f in coloring and (coloring[e] == coloring[f]) != eq:
                return False
        return True

    def to_json(self) -> dict:
        return {
            "allowed": [[e[0], e[1], sorted(cs)] for e, cs in sorted(self.allowed.items())],
            "links": [[list(e), list(f), eq] for e, f, eq in self.links],
        }

    @classmethod
    def from_json(cls, doc: dict | None) -> "Constraints":
        if not doc:
            return cls()
        allowed = {norm(u, v): frozenset(cs) for u, v, cs in doc.get("allowed", [])}
        links = tuple((norm(*e), norm(*f), bool(eq)) for e, f, eq in doc.get("links", []))
        return cls(allowed, links)


@dataclass
class SearchOutcome:
    status: str  # "found" | "none" | "budget"
    coloring: Coloring | None
    nodes: int
    seconds: float = 0.0
    violation: tuple | None = None


@dataclass
class ArrowReport:
    arrows: bool
    witness: Coloring | None
    nodes: int
    seconds: float
    violation: tuple | None = None


# -- colourings -------------------------------------------------------------


def color_class(g: Graph, coloring: Mapping[Edge, int], color: int) -> Graph:
    return Graph.from_edges(g.n, [e for e in g.edges() if coloring.get(e) == color])


def monochromatic_copy(g: Graph, targets: TargetTuple, coloring: Mapping[Edge, int]):
    """First (colour, witness) with a copy of that colour's target, else None.

    Deliberately independent of the search engine: it rebuilds each colour
    class and calls the generic subgraph test.
    """
    for c in targets.colors:
        w = contains_target(color_class(g, coloring, c), targets.target(c))
        if w is not None:
            return c, w
    return None


def is_free(g: Graph, targets: TargetTuple, coloring: Mapping[Edge, int], total: bool = True) -> bool:
    edges = g.edges()
    if total and set(coloring) != set(edges):
        return False
    if any(c not in targets.colors for c in coloring.values()):
        return False
    if not total and not set(coloring) <= set(edges):
        return False
    return monochromatic_copy(g, targets, coloring) is None


def coloring_to_json(coloring: Mapping[Edge, int]) -> list:
    return [[u, v, c] for (u, v), c in sorted(coloring.items())]


def coloring_from_json(doc) -> Coloring:
    return {norm(u, v): int(c) for u, v, c in doc}


# -- the engine ---------------------------------------------------------------


def _creates(h, cadj, ecount: int, u: int, v: int) -> bool:
    """Does the colour class (with uv already added) contain h through uv?"""
    if isinstance(h, Clique):
        if h.t == 2:
            return True
        return has_clique(cadj, cadj[u] & cadj[v], h.t - 2)
    if isinstance(h, Cycle):
        return has_path(cadj, v, u, h.length - 1, (1 << u) | (1 << v))
    if isinstance(h, Tree):
        tedges = h.graph.edges()
        if ecount < len(tedges):
            return False
        n = len(cadj)
        for a, b in tedges:
            if embed_tree(cadj, n, h, (a, b, u, v)) is not None:
                return True
            if embed_tree(cadj, n, h, (a, b, v, u)) is not None:
                return True
        return False
    raise TypeError(f"unknown target {h!r}")


@dataclass
class _Problem:
    g: Graph
    targets: TargetTuple
    order: list  # positions -> edge
    doms: list  # positions -> tuple of colours
    links: list  # positions -> list of (earlier position, equal)
    sym_from: int  # positions in (sym_from, sym_to) must be non-decreasing
    sym_to: int


def _prepare(g: Graph, targets: TargetTuple, constraints: Constraints, symmetry: bool | None):
    edges = g.edges()
    eset = set(edges)
    q = targets.q
    for e in constraints.allowed:
        if e not in eset:
            raise PreconditionError(f"constrained edge {e} not in graph")
    for e, f, _ in constraints.links:
        if e not in eset or f not in eset:
            raise PreconditionError(f"linked edge pair {(e, f)} not in graph")
    full = tuple(range(1, q + 1))
    dom_of = {}
    for e in edges:
        if e in constraints.allowed:
            bad = [c for c in constraints.allowed[e] if not 1 <= c <= q]
            if bad:
                raise PreconditionError(f"colour {bad[0]} outside palette 1..{q}")
            dom_of[e] = tuple(sorted(constraints.allowed[e]))
        else:
            dom_of[e] = full
    pinned = [e for e in edges if len(dom_of[e]) == 1]
    rest = [e for e in edges if len(dom_of[e]) != 1]
    order = pinned + rest
    pos = {e: i for i, e in enumerate(order)}
    links = [[] for _ in order]
    for e, f, eq in constraints.links:
        a, b = pos[e], pos[f]
        if a == b:
            if not eq:
                dom_of[e] = ()
            continue
        lo, hi = min(a, b), max(a, b)
        links[hi].append((lo, eq))
    doms = [dom_of[e] for e in order]
    if symmetry is None:
        symmetry = constraints.is_empty() and g.is_complete() and g.n >= 3
    sym_from = sym_to = 0
    if symmetry:
        if not (constraints.is_empty() and g.is_complete()):
            raise PreconditionError("vertex-orbit pruning needs an unconstrained complete host")
        # order is canonical here, so positions 0..n-2 are the edges at vertex 0
        sym_from, sym_to = 0, g.n - 1
    return _Problem(g, targets, order, doms, links, sym_from, sym_to)


def _forced_violation(g: Graph, targets: TargetTuple, constraints: Constraints):
    pinned = {e: next(iter(cs)) for e, cs in constraints.allowed.items() if len(cs) == 1}
    if not pinned:
        return None
    return monochromatic_copy(Graph.from_edges(g.n, pinned), targets, pinned)


def _dfs(p: _Problem, budget: int) -> tuple[str, Coloring | None, int]:
    g, order, doms, links = p.g, p.order, p.doms, p.links
    m = len(order)
    q = p.targets.q
    targets = [None] + list(p.targets.targets)
    cadj = [[0] * g.n for _ in range(q + 1)]
    ecount = [0] * (q + 1)
    color = [0] * m
    choice = [-1] * m
    nodes = 0
    i = 0
    if m == 0:
        return "found", {}, 0
    while True:
        if i == m:
            return "found", {order[k]: color[k] for k in range(m)}, nodes
        u, v = order[i]
        # undo the previous colour at this position, if any
        if color[i]:
            c = color[i]
            cadj[c][u] &= ~(1 << v)
            cadj[c][v] &= ~(1 << u)
            ecount[c] -= 1
            color[i] = 0
        dom = doms[i]
        k = choice[i] + 1
        placed = False
        while k < len(dom):
            c = dom[k]
            k += 1
            if p.sym_from < i < p.sym_to and c < color[i - 1]:
                continue
            ok = True
            for j, eq in links[i]:
                if (color[j] == c) != eq:
                    ok = False
                    break
            if not ok:
                continue
            nodes += 1
            if nodes > budget:
                return "budget", None, nodes
            ca = cadj[c]
            ca[u] |= 1 << v
            ca[v] |= 1 << u
            ecount[c] += 1
            if _creates(targets[c], ca, ecount[c], u, v):
                ca[u] &= ~(1 << v)
                ca[v] &= ~(1 << u)
                ecount[c] -= 1
                continue
            color[i] = c
            choice[i] = k - 1
            placed = True
            break
        if placed:
            i += 1
            continue
        choice[i] = -1
        i -= 1
        if i < 0:
            return "none", None, nodes


def _job(args):
    p, budget = args
    return _dfs(p, budget)


def search(
    g: Graph,
    targets: TargetTuple,
    constraints: Constraints | None = None,
    *,
    budget: int = DEFAULT_BUDGET,
    symmetry: bool | None = None,
    threads: int = 1,
) -> SearchOutcome:
    """Look for a free colouring of g satisfying the constraints."""
    constraints = constraints or Constraints()
    start = time.perf_counter()
    p = _prepare(g, targets, constraints, symmetry)
    violation = _forced_violation(g, targets, constraints)
    if violation is not None:
        return SearchOutcome("none", None, 0, time.perf_counter() - start, violation)
    if threads <= 1:
        status, col, nodes = _dfs(p, budget)
        return SearchOutcome(status, col, nodes, time.perf_counter() - start)

    # split on the first few free positions; each prefix is an independent
    # job, and the least prefix with a solution wins
    free = [i for i, d in enumerate(p.doms) if len(d) > 1]
    depth = 0
    width = 1
    while depth < len(free) and width < 4 * threads:
        width *= len(p.doms[free[depth]])
        depth += 1
    jobs = []
    for prefix in itertools.product(*(p.doms[i] for i in free[:depth])):
        doms = list(p.doms)
        for i, c in zip(free[:depth], prefix):
            doms[i] = (c,)
        jobs.append((_Problem(p.g, p.targets, p.order, doms, p.links, p.sym_from, p.sym_to), budget))
    total = 0
    with ProcessPoolExecutor(max_workers=threads) as pool:
        for status, col, nodes in pool.map(_job, jobs):
            total += nodes
            if status != "none":
                return SearchOutcome(status, col, total, time.perf_counter() - start)
    return SearchOutcome("none", None, total, time.perf_counter() - start)


def find_free_coloring(
    g: Graph,
    targets: TargetTuple,
    forced: Mapping[Edge, int] | Constraints | None = None,
    *,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
) -> Coloring | None:
    """Least free colouring extending ``forced``; None if there is none.

    Raises BudgetExceeded when the node budget runs out first.
    """
    cons = forced if isinstance(forced, Constraints) else Constraints.forced(forced)
    out = search(g, targets, cons, budget=budget, threads=threads)
    if out.status == "budget":
        raise BudgetExceeded(out.nodes)
    return out.coloring


def arrows(
    g: Graph,
    targets: TargetTuple,
    constraints: Constraints | None = None,
    *,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
) -> ArrowReport:
    out = search(g, targets, constraints, budget=budget, threads=threads)
    if out.status == "budget":
        raise BudgetExceeded(out.nodes, f"arrows on {g.n} vertices")
    if out.coloring is not None and not is_free(g, targets, out.coloring):
        raise LemmaViolation("search returned a colouring that fails the independent re-check")
    return ArrowReport(out.coloring is None, out.coloring, out.nodes, out.seconds, out.violation)


# -- Ramsey-minimality ----------------------------------------------------------


@dataclass
class MinimalityReport:
    minimal: bool
    failing: Edge | str | None
    witnesses: dict  # edge (original labels) -> free colouring of G - e
    kept: list  # vertices kept after dropping isolated ones
    coloring: Coloring | None = None  # free colouring of G when G does not arrow


def is_ramsey_minimal(
    g: Graph, targets: TargetTuple, constraints: Constraints | None = None, *, budget: int = DEFAULT_BUDGET
) -> MinimalityReport:
    core, kept = g.drop_isolated()
    cons = constraints.relabel({v: i for i, v in enumerate(kept)}) if constraints else None
    rep = arrows(core, targets, cons, budget=budget)
    if not rep.arrows:
        back = {norm(kept[a], kept[b]): c for (a, b), c in rep.witness.items()}
        return MinimalityReport(False, "not Ramsey", {}, kept, back)
    witnesses = {}
    for e in core.edges():
        sub = core.remove_edges([e])
        sub_cons = None
        if cons is not None:
            sub_cons = Constraints(
                {f: cs for f, cs in cons.allowed.items() if f != e},
                tuple(x for x in cons.links if e not in (x[0], x[1])),
            )
        rep = arrows(sub, targets, sub_cons, budget=budget)
        orig = norm(kept[e[0]], kept[e[1]])
        if rep.arrows:
            return MinimalityReport(False, orig, witnesses, kept)
        witnesses[orig] = {norm(kept[a], kept[b]): c for (a, b), c in rep.witness.items()}
    return MinimalityReport(True, None, witnesses, kept)


def minimal_subgraph(g: Graph, targets: TargetTuple, *, budget: int = DEFAULT_BUDGET) -> Graph:
    """Greedily delete edges (canonical order) while the graph still arrows."""
    if not arrows(g, targets, budget=budget).arrows:
        raise PreconditionError("graph does not arrow the targets")
    cur = g
    for e in g.edges():
        cand = cur.remove_edges([e])
        if arrows(cand, targets, budget=budget).arrows:
            cur = cand
    return cur


def ramsey_number(targets: TargetTuple, n_max: int, *, budget: int = DEFAULT_BUDGET) -> int | None:
    """Least n <= n_max with K_n arrowing the targets."""
    from ramseymin.graph import complete_graph

    for n in range(1, n_max + 1):
        if arrows(complete_graph(n), targets, budget=budget).arrows:
            return n
    return None


# -- proof replays --------------------------------------------------------------

RED, BLUE = 1, 2


def extend_low_degree_coloring(g: Graph, v: int, phi: Mapping[Edge, int], t: int, ell: int) -> Coloring:
    """Extend a (K_t, C_ell)-free colouring of G - v to all of G.

    All edges at v go red unless the red graph on N(v) holds a K_{t-1}; then
    the edge to a vertex common to all those red (t-1)-cliques goes blue.
    """
    targets = TargetTuple.of(Clique(t), Cycle(ell))
    if ell < 4:
        raise PreconditionError("need ell >= 4")
    if g.degree(v) > 2 * (t - 1) - 1:
        raise PreconditionError(f"deg(v) = {g.degree(v)} exceeds 2(t-1)-1")
    rest = g.isolate(v)
    if set(phi) != set(rest.edges()) or not is_free(rest, targets, phi):
        raise PreconditionError("phi is not a free colouring of G - v")
    out = dict(phi)
    nbrs = g.neighbors(v)
    red_nbhd, back = color_class(rest, phi, RED).induced(nbrs)
    if has_clique(red_nbhd.adj, (1 << red_nbhd.n) - 1, t - 1):
        u = back[common_clique_vertex(red_nbhd, t)]
    else:
        u = None
    for w in nbrs:
        out[norm(v, w)] = BLUE if w == u else RED
    if not is_free(g, targets, out):
        raise LemmaViolation(f"extension at vertex {v} produced a non-free colouring")
    return out


@dataclass
class SplitOutcome:
    coloring: Coloring | None
    failure: str | None = None
    kept_at_apex: list = field(default_factory=list)


def palette_split_recolor(
    g: Graph,
    v: int,
    q1: int,
    q2: int,
    t: int,
    ell: int,
    degree_budget: int,
    *,
    budget: int = DEFAULT_BUDGET,
) -> SplitOutcome:
    """Recolour G from a free colouring of G - v by splitting the palette.

    G' takes the clique-coloured edges of G - v plus min(degree_budget - 1,
    deg v) edges at v; G' is recoloured with the clique colours and G - G'
    with the cycle colours.  Fails (coloring None) if either half arrows.
    """
    if ell < 4 or t < 3 or q1 < 1 or q2 < 1:
        raise PreconditionError("need ell >= 4, t >= 3, q1, q2 >= 1")
    full = TargetTuple.mixed(q1, q2, ell, t)
    rest = g.isolate(v)
    phi = find_free_coloring(rest, full, budget=budget)
    if phi is None:
        return SplitOutcome(None, "G - v arrows the full tuple")
    at_v = [norm(v, w) for w in g.neighbors(v)]
    keep = at_v[: max(0, min(degree_budget - 1, len(at_v)))]
    g_prime_edges = [e for e, c in phi.items() if c > q1] + keep
    g_prime = Graph.from_edges(g.n, g_prime_edges)
    g_rest = g.remove_edges(g_prime_edges)
    cliques = TargetTuple((Clique(t),) * q2)
    cycles = TargetTuple((Cycle(ell),) * q1)
    rep1 = arrows(g_prime, cliques, budget=budget)
    if rep1.arrows:
        return SplitOutcome(None, f"G' arrows K{t} in {q2} colours", keep)
    rep2 = arrows(g_rest, cycles, budget=budget)
    if rep2.arrows:
        return SplitOutcome(None, f"G - G' arrows C{ell} in {q1} colours", keep)
    out = {e: c + q1 for e, c in rep1.witness.items()}
    out.update(rep2.witness)
    if not is_free(g, full, out):
        raise LemmaViolation("combined palette-split colouring is not free")
    return SplitOutcome(out, None, keep)
