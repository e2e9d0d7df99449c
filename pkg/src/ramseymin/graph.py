"""Small-graph substrate.

Graphs are immutable and store adjacency as one Python ``int`` bitset per
vertex.  Edges are always reported as ``(u, v)`` with ``u < v`` and
enumerated in lexicographic order, which is the canonical edge order used by
every search in the package.
"""

from __future__ import annotations

import itertools
import re
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

Edge = tuple[int, int]

MAX_VERTICES = 1 << 14


class PreconditionError(ValueError):
    """An operation was called outside its documented domain."""


class LemmaViolation(RuntimeError):
    """A combinatorial lemma the code relies on failed on a concrete input.

    This is never expected to be raised; it is a loud abort, not a result.
    """


def norm(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


def bits(x: int) -> Iterator[int]:
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def popcount(x: int) -> int:
    return bin(x).count("1")


@dataclass(frozen=True)
class Graph:
    n: int
    adj: tuple[int, ...]
    labels: tuple | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.n > MAX_VERTICES:
            raise PreconditionError(f"{self.n} vertices exceeds the cap of {MAX_VERTICES}")
        if len(self.adj) != self.n:
            raise PreconditionError("adjacency length does not match vertex count")
        full = (1 << self.n) - 1
        for v, a in enumerate(self.adj):
            if a >> v & 1:
                raise PreconditionError(f"loop at vertex {v}")
            if a & ~full:
                raise PreconditionError(f"vertex {v} has a neighbour outside the vertex set")
            for w in bits(a):
                if not self.adj[w] >> v & 1:
                    raise PreconditionError(f"asymmetric adjacency between {v} and {w}")

    # -- construction ---------------------------------------------------

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]], labels=None) -> "Graph":
        adj = [0] * n
        for u, v in edges:
            if u == v:
                raise PreconditionError(f"loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise PreconditionError(f"edge {(u, v)} outside vertex set of size {n}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, tuple(adj), tuple(labels) if labels is not None else None)

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, (0,) * n)

    # -- queries --------------------------------------------------------

    def edges(self) -> list[Edge]:
        out = []
        for u in range(self.n):
            for v in bits(self.adj[u] >> (u + 1)):
                out.append((u, u + 1 + v))
        return out

    def num_edges(self) -> int:
        return sum(popcount(a) for a in self.adj) // 2

    def has_edge(self, u: int, v: int) -> bool:
        return 0 <= u < self.n and 0 <= v < self.n and bool(self.adj[u] >> v & 1)

    def neighbors(self, v: int) -> list[int]:
        return list(bits(self.adj[v]))

    def degree(self, v: int) -> int:
        return popcount(self.adj[v])

    def min_degree(self) -> int:
        return min((self.degree(v) for v in range(self.n)), default=0)

    def is_complete(self) -> bool:
        full = (1 << self.n) - 1
        return all(a | (1 << v) == full for v, a in enumerate(self.adj))

    def label(self, v: int):
        return self.labels[v] if self.labels is not None else v

    # -- derived graphs -------------------------------------------------

    def remove_edges(self, edges: Iterable[Sequence[int]]) -> "Graph":
        adj = list(self.adj)
        for u, v in edges:
            if not self.has_edge(u, v):
                raise PreconditionError(f"edge {(u, v)} not in graph")
            adj[u] &= ~(1 << v)
            adj[v] &= ~(1 << u)
        return Graph(self.n, tuple(adj), self.labels)

    def add_edges(self, edges: Iterable[Sequence[int]]) -> "Graph":
        adj = list(self.adj)
        for u, v in edges:
            if u == v:
                raise PreconditionError(f"loop at vertex {u}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return Graph(self.n, tuple(adj), self.labels)

    def isolate(self, v: int) -> "Graph":
        """G - v, keeping v as an isolated vertex so edge names are unchanged."""
        return self.remove_edges([(v, w) for w in bits(self.adj[v])])

    def induced(self, vertices: Sequence[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph relabelled to 0..k-1, plus the map new -> old."""
        vs = list(vertices)
        index = {v: i for i, v in enumerate(vs)}
        edges = [(index[u], index[w]) for u in vs for w in bits(self.adj[u]) if w in index and index[u] < index[w]]
        labels = [self.label(v) for v in vs] if self.labels is not None else None
        return Graph.from_edges(len(vs), edges, labels), vs

    def drop_isolated(self) -> tuple["Graph", list[int]]:
        return self.induced([v for v in range(self.n) if self.adj[v]])

    def union_disjoint(self, other: "Graph") -> "Graph":
        shift = self.n
        return Graph.from_edges(self.n + other.n, self.edges() + [(u + shift, v + shift) for u, v in other.edges()])

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        seen = 1
        frontier = 1
        while frontier:
            nxt = 0
            for v in bits(frontier):
                nxt |= self.adj[v]
            frontier = nxt & ~seen
            seen |= nxt
        return seen == (1 << self.n) - 1

    def is_forest(self) -> bool:
        return girth(self) is None

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edges()})"


# -- standard graphs ------------------------------------------------------


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, itertools.combinations(range(n), 2))


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    """Path on n vertices."""
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def star_graph(leaves: int) -> Graph:
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


def complete_multipartite(parts: Sequence[int]) -> Graph:
    owner = [p for p, size in enumerate(parts) for _ in range(size)]
    n = len(owner)
    return Graph.from_edges(n, [(u, v) for u, v in itertools.combinations(range(n), 2) if owner[u] != owner[v]])


# -- targets --------------------------------------------------------------


@dataclass(frozen=True)
class Clique:
    t: int

    def __post_init__(self):
        if self.t < 2:
            raise PreconditionError("clique target needs t >= 2")

    @property
    def order(self) -> int:
        return self.t

    def __str__(self) -> str:
        return f"K{self.t}"


@dataclass(frozen=True)
class Cycle:
    length: int

    def __post_init__(self):
        if self.length < 3:
            raise PreconditionError("cycle target needs length >= 3")

    @property
    def order(self) -> int:
        return self.length

    def __str__(self) -> str:
        return f"C{self.length}"


@dataclass(frozen=True)
class Tree:
    """An explicit tree, stored relabelled in BFS order from vertex 0.

    The BFS labelling guarantees every vertex i > 0 has its parent among
    0..i-1, which the embedding search relies on.
    """

    graph: Graph
    parent: tuple[int, ...] = field(init=False, compare=False)

    def __post_init__(self):
        g = self.graph
        if g.n < 1 or not g.is_connected() or g.num_edges() != g.n - 1:
            raise PreconditionError("tree target must be connected and acyclic")
        order, parent_of = [0], {0: -1}
        queue = deque([0])
        while queue:
            v = queue.popleft()
            for w in bits(g.adj[v]):
                if w not in parent_of:
                    parent_of[w] = v
                    order.append(w)
                    queue.append(w)
        pos = {v: i for i, v in enumerate(order)}
        relabelled = Graph.from_edges(g.n, [(pos[u], pos[v]) for u, v in g.edges()])
        object.__setattr__(self, "graph", relabelled)
        object.__setattr__(self, "parent", tuple(-1 if v == 0 else pos[parent_of[v]] for v in order))

    @property
    def order(self) -> int:
        return self.graph.n

    def __str__(self) -> str:
        from ramseymin.graph6 import to_graph6

        return f"T:{to_graph6(self.graph)}"


Target = Clique | Cycle | Tree


def path_tree(k: int) -> Tree:
    return Tree(path_graph(k))


def star_tree(leaves: int) -> Tree:
    return Tree(star_graph(leaves))


@dataclass(frozen=True)
class TargetTuple:
    """Ordered targets; target i (0-based) belongs to colour i + 1."""

    targets: tuple

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(self.targets))
        if not self.targets:
            raise PreconditionError("need at least one target")

    @classmethod
    def of(cls, *targets) -> "TargetTuple":
        return cls(tuple(targets))

    @classmethod
    def mixed(cls, q1: int, q2: int, ell: int, t: int) -> "TargetTuple":
        """q1 cycles C_ell followed by q2 cliques K_t."""
        return cls((Cycle(ell),) * q1 + (Clique(t),) * q2)

    @property
    def q(self) -> int:
        return len(self.targets)

    @property
    def colors(self) -> range:
        return range(1, self.q + 1)

    @property
    def cycle_colors(self) -> tuple[int, ...]:
        return tuple(i + 1 for i, h in enumerate(self.targets) if isinstance(h, Cycle))

    @property
    def clique_colors(self) -> tuple[int, ...]:
        return tuple(i + 1 for i, h in enumerate(self.targets) if isinstance(h, Clique))

    def target(self, color: int):
        return self.targets[color - 1]

    def permuted(self, perm: Sequence[int]) -> "TargetTuple":
        """New tuple whose colour perm[i] carries the old colour i+1's target."""
        out = [None] * self.q
        for i, p in enumerate(perm):
            out[p - 1] = self.targets[i]
        return TargetTuple(tuple(out))

    def __iter__(self):
        return iter(self.targets)

    def __len__(self):
        return self.q

    def __str__(self) -> str:
        return ",".join(str(h) for h in self.targets)


# -- subgraph detection ---------------------------------------------------


def _clique_in(adj, cand: int, k: int) -> list[int] | None:
    """Lexicographically least k-clique inside the vertex set ``cand``."""
    if k == 0:
        return []
    if popcount(cand) < k:
        return None
    for v in bits(cand):
        rest = cand & adj[v] & ~((1 << (v + 1)) - 1)
        sub = _clique_in(adj, rest, k - 1)
        if sub is not None:
            return [v] + sub
    return None


def has_clique(adj, cand: int, k: int) -> bool:
    if k <= 0:
        return True
    if popcount(cand) < k:
        return False
    if k == 1:
        return True
    while cand:
        v = cand.bit_length() - 1
        cand &= ~(1 << v)
        if has_clique(adj, cand & adj[v], k - 1):
            return True
        if popcount(cand) < k:
            return False
    return False


def has_path(adj, src: int, dst: int, length: int, avoid: int) -> bool:
    """Is there a simple src-dst path with exactly ``length`` edges avoiding ``avoid``?"""
    if length == 1:
        return bool(adj[src] >> dst & 1)
    if length == 2:
        return bool(adj[src] & adj[dst] & ~avoid)
    cand = adj[src] & ~avoid & ~(1 << dst)
    for w in bits(cand):
        if has_path(adj, w, dst, length - 1, avoid | (1 << w)):
            return True
    return False


def _least_cycle(adj, n: int, length: int) -> list[int] | None:
    """Least cycle as a vertex sequence starting at its minimum, second < last."""
    for s in range(n):
        higher = ~((1 << (s + 1)) - 1)
        path = [s]

        def extend(v: int, used: int) -> list[int] | None:
            if len(path) == length:
                if adj[v] >> s & 1 and path[1] < path[-1]:
                    return list(path)
                return None
            for w in bits(adj[v] & higher & ~used):
                path.append(w)
                found = extend(w, used | (1 << w))
                path.pop()
                if found:
                    return found
            return None

        found = extend(s, 1 << s)
        if found:
            return found
    return None


def embed_tree(adj, n: int, tree: Tree, anchor: tuple[int, int, int, int] | None = None) -> list[int] | None:
    """Map tree vertices injectively onto host vertices; image list or None.

    ``anchor`` = (a, b, u, w) pins tree vertex a to u and b to w (ab must be a
    tree edge).  Vertices are placed in BFS order; each must be adjacent to
    the images of all tree neighbours placed before it.
    """
    k = tree.order
    tadj = tree.graph.adj
    image = [-1] * k
    used = 0
    if anchor is not None:
        a, b, u, w = anchor
        image[a], image[b] = u, w
        used = (1 << u) | (1 << w)
    full = (1 << n) - 1

    def place(i: int, used: int) -> bool:
        if i == k:
            return True
        if image[i] != -1:
            return place(i + 1, used)
        mask = full & ~used
        for j in bits(tadj[i]):
            if image[j] != -1:
                mask &= adj[image[j]]
        for x in bits(mask):
            image[i] = x
            if place(i + 1, used | (1 << x)):
                return True
        image[i] = -1
        return False

    return image if place(0, used) else None


def contains_target(g: Graph, h) -> tuple | None:
    """Canonically least copy of ``h`` in ``g``, or None.

    Cliques give a sorted vertex tuple; cycles a vertex sequence starting at
    the least vertex with second entry below the last; trees the sorted edge
    set of the lexicographically least embedding.
    """
    if isinstance(h, Clique):
        found = _clique_in(g.adj, (1 << g.n) - 1, h.t)
        return tuple(found) if found is not None else None
    if isinstance(h, Cycle):
        found = _least_cycle(g.adj, g.n, h.length)
        return tuple(found) if found is not None else None
    if isinstance(h, Tree):
        image = embed_tree(g.adj, g.n, h)
        if image is None:
            return None
        return tuple(sorted(norm(image[u], image[v]) for u, v in h.graph.edges()))
    raise TypeError(f"unknown target {h!r}")


def girth(g: Graph) -> int | None:
    best = None
    for s in range(g.n):
        dist = {s: 0}
        parent = {s: -1}
        queue = deque([s])
        while queue:
            v = queue.popleft()
            if best is not None and 2 * dist[v] + 1 >= best:
                break
            for w in bits(g.adj[v]):
                if w not in dist:
                    dist[w] = dist[v] + 1
                    parent[w] = v
                    queue.append(w)
                elif parent[v] != w:
                    length = dist[v] + dist[w] + 1
                    if best is None or length < best:
                        best = length
    return best


def set_distance(g: Graph, a: Iterable[int], b: Iterable[int]) -> int | None:
    targets = 0
    for v in b:
        targets |= 1 << v
    frontier = 0
    for v in a:
        frontier |= 1 << v
    seen = frontier
    d = 0
    while frontier:
        if frontier & targets:
            return d
        nxt = 0
        for v in bits(frontier):
            nxt |= g.adj[v]
        frontier = nxt & ~seen
        seen |= nxt
        d += 1
    return None


def edge_distance(g: Graph, e: Edge, f: Edge) -> int | None:
    for x in (e, f):
        if not g.has_edge(*x):
            raise PreconditionError(f"edge {x} not in graph")
    return set_distance(g, e, f)


def cliques_of(g: Graph, k: int) -> list[tuple[int, ...]]:
    out = []

    def grow(clique: list[int], cand: int):
        if len(clique) == k:
            out.append(tuple(clique))
            return
        for v in bits(cand):
            grow(clique + [v], cand & g.adj[v] & ~((1 << (v + 1)) - 1))

    grow([], (1 << g.n) - 1)
    return out


def common_clique_vertex(g: Graph, t: int) -> int:
    """A vertex lying in every K_{t-1} of g (least such vertex).

    Requires fewer than 2(t-1) vertices, at least one K_{t-1} and no K_t;
    under those conditions such a vertex always exists.
    """
    if t < 3:
        raise PreconditionError("need t >= 3")
    if g.n >= 2 * (t - 1):
        raise PreconditionError(f"graph has {g.n} >= 2(t-1) = {2 * (t - 1)} vertices")
    if has_clique(g.adj, (1 << g.n) - 1, t):
        raise PreconditionError(f"graph contains K_{t}")
    common = (1 << g.n) - 1
    seen = False
    for clique in cliques_of(g, t - 1):
        seen = True
        mask = 0
        for v in clique:
            mask |= 1 << v
        common &= mask
    if not seen:
        raise PreconditionError(f"graph contains no K_{t - 1}")
    if not common:
        raise LemmaViolation(f"K_{t}-free graph on {g.n} vertices with no vertex common to all K_{t - 1}: {g!r}")
    return (common & -common).bit_length() - 1


# -- target spec strings ----------------------------------------------------

_ITEM = re.compile(r"^(K(\d+)|C(\d+)|P(\d+)|S(\d+)|T:([?-~]+?))(?:x(\d+))?$")


def parse_targets(text: str) -> TargetTuple:
    """Parse e.g. ``"C4x2,K3"``: comma list of K<t>, C<l>, T:<graph6>,
    P<k> (path on k vertices) or S<k> (star with k leaves), each with an
    optional ``x<count>`` repeat."""
    out = []
    for raw in text.split(","):
        item = raw.strip()
        m = _ITEM.match(item)
        if m is None:
            raise PreconditionError(f"bad target {item!r}")
        k, c, p, s, g6, rep = m.group(2, 3, 4, 5, 6, 7)
        if k:
            h = Clique(int(k))
        elif c:
            h = Cycle(int(c))
        elif p:
            h = path_tree(int(p))
        elif s:
            h = star_tree(int(s))
        else:
            from ramseymin.graph6 import from_graph6

            h = Tree(from_graph6(g6))
        count = int(rep) if rep else 1
        if count < 1:
            raise PreconditionError(f"bad repeat count in {item!r}")
        out += [h] * count
    return TargetTuple(tuple(out))
