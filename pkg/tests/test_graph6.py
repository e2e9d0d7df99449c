import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import to_nx
from ramseymin.graph import Graph, PreconditionError, complete_graph, petersen_graph
from ramseymin.graph6 import HEADER, from_graph6, graph_from_json, graph_to_json, read_graph6_lines, to_graph6


def test_known_strings():
    assert to_graph6(complete_graph(6)) == "E~~w"
    assert to_graph6(Graph.empty(0)) == "?"
    assert to_graph6(Graph.empty(1)) == "@"
    assert to_graph6(petersen_graph()) == nx.to_graph6_bytes(to_nx(petersen_graph()), header=False).decode().strip()


def test_header_round_trip():
    g = petersen_graph()
    s = to_graph6(g, header=True)
    assert s.startswith(HEADER)
    assert from_graph6(s) == g


@pytest.mark.parametrize("n", [62, 63, 64, 200, 300])
def test_size_field_boundaries(n):
    g = Graph.from_edges(n, [(0, n - 1), (1, 2)])
    s = to_graph6(g)
    assert s == nx.to_graph6_bytes(to_nx(g), header=False).decode().strip()
    assert from_graph6(s) == g


def test_rejects_bad_input():
    with pytest.raises(PreconditionError):
        from_graph6("E~~")  # truncated body
    with pytest.raises(PreconditionError):
        from_graph6(":Fa@x^")  # sparse6
    assert from_graph6("B_").edges() == [(0, 1)]
    with pytest.raises(PreconditionError):
        from_graph6("B@")  # only 3 bits used, low padding bit set


def test_read_lines_skips_blanks():
    gs = list(read_graph6_lines(["E~~w\n", "\n", "?"]))
    assert [g.n for g in gs] == [6, 0]


def test_json_round_trip():
    g = Graph.from_edges(3, [(0, 1)], labels=["a", "b", "c"])
    doc = graph_to_json(g)
    assert doc["labels"] == ["a", "b", "c"]
    assert graph_from_json(doc) == g
    doc["graph6"] = "B?"
    with pytest.raises(PreconditionError):
        graph_from_json(doc)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 70), st.data())
def test_round_trip_and_networkx_agree(n, data):
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    edges = data.draw(st.lists(st.sampled_from(pairs), unique=True, max_size=40)) if pairs else []
    g = Graph.from_edges(n, edges)
    s = to_graph6(g)
    assert from_graph6(s) == g
    assert s == nx.to_graph6_bytes(to_nx(g), header=False).decode().strip()
    back = nx.from_graph6_bytes(s.encode())
    assert sorted(tuple(sorted(e)) for e in back.edges()) == g.edges()
