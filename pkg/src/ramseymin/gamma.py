"""Random uniform hypergraphs with short cycles removed, and their blow-ups.

The pipeline: sample an h-uniform binomial hypergraph with edge probability
p_h = A n^{-(h-1) + 1/(ell-1)}, prune Berge cycles of length < ell by
deleting their least hyperedge, then blow every survivor up into a clique.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from ramseymin.arrowing import BudgetExceeded, ramsey_number
from ramseymin.graph import (
    MAX_VERTICES,
    Clique,
    Cycle,
    Graph,
    PreconditionError,
    TargetTuple,
    bits,
    cliques_of,
    norm,
)

ENUMERATE_LIMIT = 10**6


@dataclass(frozen=True)
class HyperGraph:
    n: int
    h: int
    edges: tuple  # sorted tuples, in lexicographic order

    def __post_init__(self):
        es = tuple(sorted(tuple(sorted(e)) for e in self.edges))
        for e in es:
            if len(set(e)) != self.h or len(e) != self.h:
                raise PreconditionError(f"hyperedge {e} does not have {self.h} distinct vertices")
            if e[0] < 0 or e[-1] >= self.n:
                raise PreconditionError(f"hyperedge {e} outside [n]")
        if len(set(es)) != len(es):
            raise PreconditionError("duplicate hyperedge")
        object.__setattr__(self, "edges", es)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def without(self, indices) -> "HyperGraph":
        drop = set(indices)
        return HyperGraph(self.n, self.h, tuple(e for i, e in enumerate(self.edges) if i not in drop))

    def to_json(self) -> dict:
        return {"n": self.n, "h": self.h, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_json(cls, doc: dict) -> "HyperGraph":
        return cls(doc["n"], doc["h"], tuple(tuple(e) for e in doc["edges"]))


@dataclass(frozen=True)
class GammaParams:
    n: int
    ell: int
    t: int
    q1: int = 1
    q2: int = 1
    A: float = 1.0
    seed: int = 0
    h: int | None = None  # derived from (q2, t) when omitted

    def __post_init__(self):
        if self.h is None:
            object.__setattr__(self, "h", clique_ramsey_number(self.q2, self.t))
        if self.h < self.t:
            raise PreconditionError("need h >= t")
        if self.ell < 3 or self.A <= 0 or self.n < 1:
            raise PreconditionError("need ell >= 3, A > 0 and n >= 1")
        if self.p_h > 1:
            raise PreconditionError(f"p_h = {self.p_h} exceeds 1")

    @property
    def p_h(self) -> float:
        return self.A * self.n ** (-(self.h - 1) + 1 / (self.ell - 1))


def clique_ramsey_number(q: int, t: int, *, n_max: int = 8, budget: int = 10**6) -> int:
    """r_q(K_t) by the arrowing engine, for the few cases that are cheap."""
    if q < 1:
        raise PreconditionError("need q >= 1")
    try:
        r = ramsey_number(TargetTuple((Clique(t),) * q), n_max, budget=budget)
    except BudgetExceeded:
        r = None
    if r is None:
        raise PreconditionError(f"r_{q}(K_{t}) is not desk-computable here; pass h explicitly")
    return r


# -- sampling -----------------------------------------------------------------------


def _unrank(r: int, n: int, h: int) -> tuple:
    """The r-th h-subset of [n] in colex order."""
    out = []
    hi = n
    for k in range(h, 0, -1):
        # largest c with comb(c, k) <= r
        lo, top = k - 1, hi - 1
        while lo < top:
            mid = (lo + top + 1) // 2
            if math.comb(mid, k) <= r:
                lo = mid
            else:
                top = mid - 1
        out.append(lo)
        r -= math.comb(lo, k)
        hi = lo
    return tuple(sorted(out))


def sample_hypergraph(params: GammaParams, method: str = "auto") -> HyperGraph:
    """Binomial h-uniform hypergraph on [n], reproducible from the seed.

    ``enumerate`` flips one coin per h-subset; ``skip`` jumps between chosen
    subsets with geometric gaps over the colex ranking, which has the same
    distribution and is what makes n in the thousands affordable.
    """
    n, h, p = params.n, params.h, params.p_h
    total = math.comb(n, h)
    rng = np.random.default_rng(params.seed)
    if p <= 0 or total == 0:
        return HyperGraph(n, h, ())
    if p >= 1:
        return HyperGraph(n, h, tuple(itertools.combinations(range(n), h)))
    if method == "auto":
        method = "enumerate" if total <= ENUMERATE_LIMIT else "skip"
    if method == "enumerate":
        coins = rng.random(total) < p
        subsets = itertools.combinations(range(n), h)
        return HyperGraph(n, h, tuple(e for e, keep in zip(subsets, coins) if keep))
    if method != "skip":
        raise PreconditionError(f"unknown sampling method {method!r}")
    chosen = []
    pos = -1
    batch = max(16, int(total * p * 1.2) + 16)
    while True:
        gaps = rng.geometric(p, size=batch)
        for g in gaps:
            pos += int(g)
            if pos >= total:
                return HyperGraph(n, h, tuple(_unrank(r, n, h) for r in chosen))
            chosen.append(pos)


# -- Berge cycles -------------------------------------------------------------------


def find_short_berge_cycles(hg: HyperGraph, ell: int) -> list[tuple]:
    """All Berge cycles of length 2..ell-1, one representative per cycle.

    A cycle is returned as (e_1, v_1, ..., e_s, v_s) with hyperedge indices
    and vertices alternating, v_i in e_i and e_{i+1}.  The representative
    starts at the least hyperedge index and, of the two directions, the one
    whose second hyperedge is smaller (for s = 2: whose first vertex is
    smaller).
    """
    if ell < 2:
        raise PreconditionError("need ell >= 2")
    edges = hg.edges
    sets = [set(e) for e in edges]
    incident = [[] for _ in range(hg.n)]
    for i, e in enumerate(edges):
        for v in e:
            incident[v].append(i)
    out = []
    max_len = ell - 1

    for start in range(len(edges)):
        seq = [start]
        used_v = []

        def extend(cur: int):
            s = len(seq)
            # try to close: v_s in e_s and e_1, distinct from used vertices
            if s >= 2:
                for v in sorted(sets[cur] & sets[start]):
                    if v in used_v:
                        continue
                    if s == 2 and not used_v[0] < v:
                        continue
                    if s >= 3 and not seq[1] < seq[-1]:
                        continue
                    cyc = []
                    for k in range(s):
                        cyc.append(seq[k])
                        cyc.append(used_v[k] if k < s - 1 else v)
                    out.append(tuple(cyc))
            if s == max_len:
                return
            for v in sorted(sets[cur]):
                if v in used_v:
                    continue
                for nxt in incident[v]:
                    if nxt <= start or nxt in seq:
                        continue
                    seq.append(nxt)
                    used_v.append(v)
                    extend(nxt)
                    seq.pop()
                    used_v.pop()

        extend(start)
    return out


@dataclass
class Cleaning:
    hypergraph: HyperGraph
    removed: list  # removed hyperedges (as vertex tuples), in removal order
    rounds: int
    cycles_found: int

    @property
    def removal_fraction(self) -> float:
        total = self.hypergraph.num_edges + len(self.removed)
        return len(self.removed) / total if total else 0.0


def remove_short_cycles(hg: HyperGraph, ell: int) -> Cleaning:
    """Delete the least hyperedge of every short cycle, re-scanning until none is left."""
    cur = hg
    removed = []
    rounds = 0
    found = 0
    while True:
        cycles = find_short_berge_cycles(cur, ell)
        if not cycles:
            return Cleaning(cur, removed, rounds, found)
        rounds += 1
        found += len(cycles)
        gone = set()
        for cyc in cycles:
            members = cyc[0::2]
            if gone.intersection(members):
                continue
            gone.add(min(members))
        removed += [cur.edges[i] for i in sorted(gone)]
        cur = cur.without(gone)


# -- blow-up and classification ---------------------------------------------------------


@dataclass
class BlowUp:
    graph: Graph
    hyperedges: tuple  # hyperedge vertex tuples, index = clique id
    owners: dict = field(default_factory=dict)  # graph edge -> list of clique ids

    def clique_edges(self, i: int) -> list:
        return [norm(u, v) for u, v in itertools.combinations(self.hyperedges[i], 2)]


def blow_up(hg: HyperGraph) -> BlowUp:
    if hg.n > MAX_VERTICES:
        raise PreconditionError(f"{hg.n} vertices exceeds the graph cap")
    owners: dict = {}
    for i, e in enumerate(hg.edges):
        for u, v in itertools.combinations(e, 2):
            owners.setdefault(norm(u, v), []).append(i)
    g = Graph.from_edges(hg.n, sorted(owners))
    return BlowUp(g, hg.edges, owners)


def _all_cycles(g: Graph, length: int) -> list[tuple]:
    out = []
    adj = g.adj
    for s in range(g.n):
        higher = ~((1 << (s + 1)) - 1)
        path = [s]

        def extend(v: int, used: int):
            if len(path) == length:
                if adj[v] >> s & 1 and path[1] < path[-1]:
                    out.append(tuple(path))
                return
            for w in bits(adj[v] & higher & ~used):
                path.append(w)
                extend(w, used | (1 << w))
                path.pop()

        extend(s, 1 << s)
    return out


@dataclass
class CopyCounts:
    hyperedge_copies: int
    non_hyperedge: list


def classify_copies(g: Graph, bu: BlowUp, target) -> CopyCounts:
    """Split the copies of a clique or cycle in g (a subgraph of the blow-up)
    into those inside a single hyperedge and the rest."""
    if isinstance(target, Clique):
        h = len(bu.hyperedges[0]) if bu.hyperedges else target.t
        if target.t > h:
            raise PreconditionError("clique larger than the hyperedges")
        copies = cliques_of(g, target.t)
    elif isinstance(target, Cycle):
        copies = _all_cycles(g, target.length)
    else:
        raise PreconditionError("only cliques and cycles are classified")
    hsets = [frozenset(e) for e in bu.hyperedges]
    by_vertex: dict = {}
    for i, e in enumerate(bu.hyperedges):
        for v in e:
            by_vertex.setdefault(v, []).append(i)
    inside = 0
    outside = []
    for c in copies:
        vs = set(c)
        if any(vs <= hsets[i] for i in by_vertex.get(c[0], [])):
            inside += 1
        else:
            outside.append(c)
    return CopyCounts(inside, outside)


def check_transversal(sub: Graph, bu: BlowUp) -> bool:
    """Exactly one edge of ``sub`` in every hyperedge clique."""
    counts = [0] * len(bu.hyperedges)
    for e in sub.edges():
        if e not in bu.owners:
            raise PreconditionError(f"edge {e} is not in the blow-up")
        for i in bu.owners[e]:
            counts[i] += 1
    return all(c == 1 for c in counts)


def structure_check(sub: Graph, bu: BlowUp) -> bool:
    """Every edge of ``sub`` lies in a hyperedge clique fully present in ``sub``."""
    for e in sub.edges():
        if e not in bu.owners:
            raise PreconditionError(f"edge {e} is not in the blow-up")
        if not any(all(sub.has_edge(*f) for f in bu.clique_edges(i)) for i in bu.owners[e]):
            return False
    return True


def least_edge_transversal(bu: BlowUp) -> Graph:
    """One edge (the least) from each hyperedge clique."""
    return Graph.from_edges(bu.graph.n, sorted({bu.clique_edges(i)[0] for i in range(len(bu.hyperedges))}))


def statistics(params: GammaParams, *, copy_targets=()) -> dict:
    hg = sample_hypergraph(params)
    expected = math.comb(params.n, params.h) * params.p_h
    clean = remove_short_cycles(hg, params.ell)
    leftover = find_short_berge_cycles(clean.hypergraph, params.ell)
    report = {
        "n": params.n,
        "h": params.h,
        "ell": params.ell,
        "A": params.A,
        "seed": params.seed,
        "p_h": params.p_h,
        "edges": hg.num_edges,
        "expected_edges": expected,
        "relative_deviation": (hg.num_edges - expected) / expected if expected else 0.0,
        "removed": len(clean.removed),
        "removal_fraction": clean.removal_fraction,
        "short_cycles_after": len(leftover),
    }
    if copy_targets:
        bu = blow_up(clean.hypergraph)
        report["non_hyperedge_copies"] = {
            str(f): len(classify_copies(bu.graph, bu, f).non_hyperedge) for f in copy_targets
        }
    return report
