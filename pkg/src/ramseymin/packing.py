"""The packing parameter: exact search over colour patterns.

A colour pattern is a list of q2 edge-disjoint graphs on [n], one per clique
colour q1+1..q1+q2.  It is valid for parameter t when every graph is
K_{t+1}-free and every vertex colouring lambda: [n] -> [q] either repeats a
cycle colour (1..q1) or puts a K_t of G_j on the vertices of colour j for
some clique colour j.  P_{q1,q2}(t) is the least n carrying a valid pattern.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

from ramseymin.arrowing import BudgetExceeded
from ramseymin.graph import Graph, LemmaViolation, PreconditionError, has_clique, norm
from ramseymin.graph6 import from_graph6, to_graph6

DEFAULT_BUDGET = 10**7


@dataclass(frozen=True)
class ColorPattern:
    n: int
    q1: int
    graphs: tuple  # G_{q1+1}, ..., G_{q1+q2}

    def __post_init__(self):
        object.__setattr__(self, "graphs", tuple(self.graphs))
        if self.q1 < 0:
            raise PreconditionError("q1 must be >= 0")
        seen = set()
        for g in self.graphs:
            if g.n != self.n:
                raise PreconditionError("pattern graphs must share the vertex set [n]")
            for e in g.edges():
                if e in seen:
                    raise PreconditionError(f"pattern graphs are not edge-disjoint (edge {e})")
                seen.add(e)

    @property
    def q2(self) -> int:
        return len(self.graphs)

    @property
    def q(self) -> int:
        return self.q1 + self.q2

    def graph_of(self, color: int) -> Graph:
        """Pattern graph of clique colour ``color`` (in q1+1..q)."""
        return self.graphs[color - self.q1 - 1]

    def with_isolated_vertex(self) -> "ColorPattern":
        return ColorPattern(self.n + 1, self.q1, tuple(Graph.from_edges(self.n + 1, g.edges()) for g in self.graphs))

    def to_json(self) -> dict:
        return {"n": self.n, "q1": self.q1, "graphs": [to_graph6(g) for g in self.graphs]}

    @classmethod
    def from_json(cls, doc: dict) -> "ColorPattern":
        graphs = tuple(from_graph6(s) for s in doc["graphs"])
        return cls(doc["n"], doc["q1"], graphs)


def pattern_from_labels(n: int, q1: int, q2: int, labels: Sequence[int]) -> ColorPattern:
    """Pattern from one label per pair of [n] (canonical order); 0 = unused,
    j >= 1 = pair belongs to the j-th pattern graph."""
    pairs = list(itertools.combinations(range(n), 2))
    graphs = tuple(Graph.from_edges(n, [p for p, c in zip(pairs, labels) if c == j]) for j in range(1, q2 + 1))
    return ColorPattern(n, q1, graphs)


# -- verification -------------------------------------------------------------------


@dataclass
class PatternVerdict:
    valid: bool
    counterexample: tuple | None = None  # lambda as a tuple of colours (vertex order)
    reason: str | None = None


def lambda_defeats(p: ColorPattern, t: int, lam: Sequence[int]) -> bool:
    """True when lambda satisfies neither (a) nor (b).  Plain re-check."""
    if len(lam) != p.n or any(not 1 <= c <= p.q for c in lam):
        raise PreconditionError("lambda must map [n] into [q]")
    cyc = [c for c in lam if c <= p.q1]
    if len(cyc) != len(set(cyc)):
        return False
    for j in range(p.q1 + 1, p.q + 1):
        g = p.graph_of(j)
        mask = sum(1 << v for v in range(p.n) if lam[v] == j)
        if has_clique(g.adj, mask, t):
            return False
    return True


def _clique_colouring(p: ColorPattern, t: int, verts: list[int]) -> list[int] | None:
    """Give every vertex of ``verts`` a clique colour so that no G_j has a K_t
    on its colour-j vertices; least such assignment or None."""
    if not verts:
        return []
    if p.q2 == 0:
        return None
    classes = [0] * p.q2
    out = [0] * len(verts)

    def go(i: int) -> bool:
        if i == len(verts):
            return True
        v = verts[i]
        for j in range(p.q2):
            adj = p.graphs[j].adj
            # adding v creates a K_t iff the neighbours of v in the class hold a K_{t-1}
            if t <= 1 or has_clique(adj, classes[j] & adj[v], t - 1):
                continue
            classes[j] |= 1 << v
            out[i] = p.q1 + 1 + j
            if go(i + 1):
                return True
            classes[j] &= ~(1 << v)
        return False

    return out if go(0) else None


def verify_pattern(p: ColorPattern, t: int) -> PatternVerdict:
    if t < 1:
        raise PreconditionError("need t >= 1")
    for j, g in enumerate(p.graphs):
        if has_clique(g.adj, (1 << p.n) - 1, t + 1):
            return PatternVerdict(False, None, f"P1: graph {p.q1 + 1 + j} contains K{t + 1}")
    # only lambdas with cycle-colour classes of size <= 1 can violate (a);
    # which cycle colours they use is irrelevant, so use 1..s in order
    for s in range(min(p.q1, p.n) + 1):
        for chosen in itertools.combinations(range(p.n), s):
            rest = [v for v in range(p.n) if v not in chosen]
            cols = _clique_colouring(p, t, rest)
            if cols is None:
                continue
            lam = [0] * p.n
            for i, v in enumerate(chosen):
                lam[v] = i + 1
            for v, c in zip(rest, cols):
                lam[v] = c
            return PatternVerdict(False, tuple(lam), "P2")
    return PatternVerdict(True)


# -- exact computation -----------------------------------------------------------------


@dataclass
class PackingCertificate:
    value: int
    witness: ColorPattern
    t: int
    attestation: list = field(default_factory=list)  # per n: nodes, leaves, classes

    def to_json(self) -> dict:
        return {"value": self.value, "t": self.t, "witness": self.witness.to_json(), "attestation": self.attestation}


def _canonical(labels: tuple, n: int, q2: int, perms_v, pair_index) -> tuple:
    best = None
    pairs = list(itertools.combinations(range(n), 2))
    for sigma in perms_v:
        moved = [0] * len(pairs)
        for (u, v), c in zip(pairs, labels):
            moved[pair_index[norm(sigma[u], sigma[v])]] = c
        for pi in itertools.permutations(range(1, q2 + 1)):
            cand = tuple(pi[c - 1] if c else 0 for c in moved)
            if best is None or cand < best:
                best = cand
    return best


def _relaxation_fails(n: int, q1: int, q2: int, t: int, labels: list, depth: int, pairs) -> bool:
    """Give every undecided pair to every graph at once; if even that
    superpattern fails (P2), no completion can succeed."""
    adjs = []
    for j in range(1, q2 + 1):
        adj = [0] * n
        for k, (u, v) in enumerate(pairs):
            if k >= depth or labels[k] == j:
                adj[u] |= 1 << v
                adj[v] |= 1 << u
        adjs.append(tuple(adj))
    relaxed = _LooseGraphs(n, q1, adjs)
    return relaxed.has_bad_lambda(t)


@dataclass
class _LooseGraphs:
    """Pattern-like object without the edge-disjointness invariant."""

    n: int
    q1: int
    adjs: list

    def has_bad_lambda(self, t: int) -> bool:
        q2 = len(self.adjs)
        for s in range(min(self.q1, self.n) + 1):
            for chosen in itertools.combinations(range(self.n), s):
                rest = [v for v in range(self.n) if v not in chosen]
                classes = [0] * q2

                def go(i: int) -> bool:
                    if i == len(rest):
                        return True
                    v = rest[i]
                    for j in range(q2):
                        adj = self.adjs[j]
                        if has_clique(adj, classes[j] & adj[v], t - 1):
                            continue
                        classes[j] |= 1 << v
                        if go(i + 1):
                            return True
                        classes[j] &= ~(1 << v)
                    return False

                if (rest == [] or q2 > 0) and go(0):
                    return True
        return False


def _search_n(n: int, q1: int, q2: int, t: int, budget: int, counter: list):
    pairs = list(itertools.combinations(range(n), 2))
    pair_index = {p: i for i, p in enumerate(pairs)}
    perms_v = list(itertools.permutations(range(n)))
    labels = [0] * len(pairs)
    adj = [[0] * n for _ in range(q2 + 1)]
    seen = set()
    stats = {"n": n, "nodes": 0, "leaves": 0, "classes": 0}

    def go(k: int):
        counter[0] += 1
        stats["nodes"] += 1
        if counter[0] > budget:
            raise BudgetExceeded(counter[0], "pattern search")
        if _relaxation_fails(n, q1, q2, t, labels, k, pairs):
            return None
        if k == len(pairs):
            stats["leaves"] += 1
            key = _canonical(tuple(labels), n, q2, perms_v, pair_index)
            if key in seen:
                return None
            seen.add(key)
            stats["classes"] += 1
            p = pattern_from_labels(n, q1, q2, labels)
            return p if verify_pattern(p, t).valid else None
        u, v = pairs[k]
        for c in range(q2, -1, -1):
            if c:
                a = adj[c]
                # P1: the new edge must not close a K_{t+1}
                if has_clique(a, a[u] & a[v], t - 1):
                    continue
                a[u] |= 1 << v
                a[v] |= 1 << u
            labels[k] = c
            found = go(k + 1)
            labels[k] = 0
            if c:
                a[u] &= ~(1 << v)
                a[v] &= ~(1 << u)
            if found is not None:
                return found
        return None

    return go(0), stats


def compute_p(q1: int, q2: int, t: int, n_max: int, *, budget: int = DEFAULT_BUDGET) -> PackingCertificate | None:
    """Least n <= n_max carrying a valid pattern; None if there is none.

    Within each n, pairs are labelled in canonical order trying the densest
    label first (graph q2 down to unused), and the first valid pattern in
    that order is returned.  Isomorphic leaves (vertex relabelling together
    with clique-colour relabelling) are checked once.
    """
    if t < 2 or q1 < 0 or q2 < 0 or q1 + q2 < 1:
        raise PreconditionError("need t >= 2, q1, q2 >= 0 and q1 + q2 >= 1")
    if q2 == 0:
        # pigeonhole: with no clique colours, (a) holds iff n > q1
        n = q1 + 1
        if n > n_max:
            return None
        p = ColorPattern(n, q1, ())
        if not verify_pattern(p, t).valid or verify_pattern(ColorPattern(q1, q1, ()), t).valid:
            raise LemmaViolation("pigeonhole value for q2 = 0 failed re-verification")
        return PackingCertificate(n, p, t, [{"n": n, "closed_form": True}])
    counter = [0]
    attest = []
    for n in range(1, n_max + 1):
        found, stats = _search_n(n, q1, q2, t, budget, counter)
        attest.append(stats)
        if found is not None:
            return PackingCertificate(n, found, t, attest)
    return None


# -- lemmas -------------------------------------------------------------------------------


def drop_to_subpattern(p: ColorPattern, q1: int, t: int) -> ColorPattern:
    """Turn a valid (0, q) pattern into a (q1, q - q1) pattern by keeping
    the last q - q1 graphs."""
    if p.q1 != 0:
        raise PreconditionError("input pattern must have q1 = 0")
    if not 0 <= q1 < p.q2 or t < 2:
        raise PreconditionError("need 0 <= q1 < q and t >= 2")
    if not verify_pattern(p, t).valid:
        raise PreconditionError("input pattern is not valid")
    if q1 == 0:
        return p
    sub = ColorPattern(p.n, q1, p.graphs[q1:])
    verdict = verify_pattern(sub, t)
    if not verdict.valid:
        raise LemmaViolation(f"sub-pattern failed verification: {verdict}")
    return sub


def verify_subset_clique_property(p: ColorPattern, t: int, q: int) -> bool:
    """Every ceil(n/q)-subset of [n] holds a K_t in every pattern graph."""
    if not p.graphs:
        return True
    if q < 1:
        raise PreconditionError("need q >= 1")
    size = math.ceil(p.n / q)
    for subset in itertools.combinations(range(p.n), size):
        mask = sum(1 << v for v in subset)
        for g in p.graphs:
            if not has_clique(g.adj, mask, t):
                return False
    return True
