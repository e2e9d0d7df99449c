"""graph6 encoding (McKay's format) plus small JSON helpers for graphs."""

from __future__ import annotations

from typing import Iterable, Iterator

from ramseymin.graph import Graph, PreconditionError

HEADER = ">>graph6<<"


def _encode_n(n: int) -> str:
    if n < 0:
        raise PreconditionError("negative vertex count")
    if n <= 62:
        return chr(n + 63)
    if n <= 258047:
        return "~" + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))
    if n <= 68719476735:
        return "~~" + "".join(chr(((n >> s) & 63) + 63) for s in (30, 24, 18, 12, 6, 0))
    raise PreconditionError("graph too large for graph6")


def _decode_n(data: bytes) -> tuple[int, int]:
    if not data:
        raise PreconditionError("empty graph6 string")
    if data[0] != 126:
        return data[0] - 63, 1
    if len(data) > 1 and data[1] == 126:
        chunk, start = data[2:8], 8
    else:
        chunk, start = data[1:4], 4
    if len(chunk) not in (3, 6) or len(data) < start:
        raise PreconditionError("truncated graph6 size field")
    n = 0
    for c in chunk:
        if not 63 <= c <= 126:
            raise PreconditionError(f"invalid graph6 character {chr(c)!r}")
        n = (n << 6) | (c - 63)
    return n, start


def to_graph6(g: Graph, header: bool = False) -> str:
    out = [HEADER] if header else []
    out.append(_encode_n(g.n))
    acc = 0
    nbits = 0
    chars = []
    for j in range(1, g.n):
        row = g.adj[j]
        for i in range(j):
            acc = (acc << 1) | (row >> i & 1)
            nbits += 1
            if nbits == 6:
                chars.append(chr(acc + 63))
                acc = nbits = 0
    if nbits:
        chars.append(chr((acc << (6 - nbits)) + 63))
    out.append("".join(chars))
    return "".join(out)


def from_graph6(text: str) -> Graph:
    s = text.strip()
    if s.startswith(HEADER):
        s = s[len(HEADER):]
    if s.startswith(":") or s.startswith(";") or s.startswith("&"):
        raise PreconditionError("sparse6 / digraph6 input is not graph6")
    data = s.encode("ascii", errors="strict")
    n, pos = _decode_n(data)
    body = data[pos:]
    need = (n * (n - 1) // 2 + 5) // 6
    if len(body) != need:
        raise PreconditionError(f"graph6 body has {len(body)} bytes, expected {need} for n={n}")
    for c in body:
        if not 63 <= c <= 126:
            raise PreconditionError(f"invalid graph6 character {chr(c)!r}")
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            byte = body[k // 6] - 63
            if byte >> (5 - k % 6) & 1:
                edges.append((i, j))
            k += 1
    if k % 6:
        tail = body[-1] - 63
        if tail & ((1 << (6 - k % 6)) - 1):
            raise PreconditionError("nonzero graph6 padding bits")
    return Graph.from_edges(n, edges)


def read_graph6_lines(lines: Iterable[str]) -> Iterator[Graph]:
    for line in lines:
        line = line.strip()
        if line:
            yield from_graph6(line)


def graph_to_json(g: Graph) -> dict:
    doc = {"n": g.n, "graph6": to_graph6(g), "edges": [list(e) for e in g.edges()]}
    if g.labels is not None:
        doc["labels"] = [str(x) for x in g.labels]
    return doc


def graph_from_json(doc: dict) -> Graph:
    if "edges" in doc:
        g = Graph.from_edges(doc["n"], doc["edges"], doc.get("labels"))
        if "graph6" in doc and to_graph6(g) != doc["graph6"]:
            raise PreconditionError("graph6 and edge list disagree")
        return g
    return from_graph6(doc["graph6"])
