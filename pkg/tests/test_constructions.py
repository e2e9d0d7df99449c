import pytest

from oracles import brute_is_free
from ramseymin.constructions import (
    build_clique_cycle_host,
    build_cycle_cycle_host,
    build_packing_host,
    build_tree_clique_host,
    skeleton_dichotomy,
)
from ramseymin.gadgets import GadgetSpec, oracle_determiner
from ramseymin.graph import Graph, PreconditionError, complete_graph, path_tree, star_tree
from ramseymin.graph6 import to_graph6
from ramseymin.packing import ColorPattern, compute_p


def pattern_11():
    return compute_p(1, 1, 2, 6).witness


@pytest.mark.parametrize("build,n,deg", [
    (lambda: build_cycle_cycle_host(4, 5), 3 + 3 * 1 + 3 * 2 + 1, 3),
    (lambda: build_clique_cycle_host(3, 4), 4 + 2 * 1 + 1, 4),
    (lambda: build_clique_cycle_host(4, 5), 6 + 3 * 2 + 1, 6),
    (lambda: build_tree_clique_host(3, 2), 3 + 2 * 1, 2),
    (lambda: build_tree_clique_host(3, 3), 3 + 2 * 3, 2),
    (lambda: build_packing_host(pattern_11(), 4, 3), 4 + 6 * 1 + 1, 4),
])
def test_vertex_counts_and_apex_degree(build, n, deg):
    host = build()
    assert host.graph.n == n
    assert host.apex_degree == deg


@pytest.mark.parametrize("host", [
    build_cycle_cycle_host(4, 5),
    build_clique_cycle_host(3, 4),
    build_packing_host(compute_p(1, 1, 2, 6).witness, 4, 3),
    build_packing_host(compute_p(1, 1, 2, 6).witness, 4, 3, "oracle"),
    build_packing_host(compute_p(0, 2, 2, 6).witness, 4, 3),
    build_packing_host(compute_p(0, 2, 2, 6).witness, 4, 3, "oracle"),
    build_tree_clique_host(3, 2),
    build_tree_clique_host(3, 3),
], ids=["cycle-cycle", "clique-cycle", "packing", "packing-lib", "packing-q1=0", "packing-q1=0-lib",
        "tree-clique-2", "tree-clique-3"])
def test_dichotomy(host):
    d = skeleton_dichotomy(host)
    assert d.holds
    w = d.apexless_witness
    assert host.constraints.admits(w)
    assert brute_is_free(host.without_apex(), host.targets, w)


def test_builders_are_deterministic():
    a = build_packing_host(pattern_11(), 4, 3, "oracle")
    b = build_packing_host(pattern_11(), 4, 3, "oracle")
    assert a.to_json() == b.to_json()
    assert to_graph6(build_cycle_cycle_host(4, 6).graph) == to_graph6(build_cycle_cycle_host(4, 6).graph)


def test_forced_colours_follow_palette():
    host = build_clique_cycle_host(3, 4)
    forced = host.forced
    assert set(forced) == set(host.graph.edges()) - {e for e in host.graph.edges() if host.apex in e}
    assert all(c == 1 for (u, v), c in forced.items() if u < 4 and v < 4)


def test_packing_library_has_matching_per_palette():
    p = compute_p(0, 2, 2, 6).witness
    plain = build_packing_host(p, 4, 3)
    lib = build_packing_host(p, 4, 3, "oracle")
    assert lib.graph.n == plain.graph.n + 2 * 2
    assert lib.graph.num_edges() == plain.graph.num_edges() + 2
    assert lib.provenance["mode"] == "library"


def test_real_determiner_fills_paths():
    edge = Graph.from_edges(2, [(0, 1)])
    T = build_cycle_cycle_host(4, 5).targets
    d = GadgetSpec(edge, [(0, 1)], {1}, "determiner", T, oracle_determiner({1}, T).constraints)
    host = build_cycle_cycle_host(4, 5, d_red=d)
    assert host.provenance["mode"] == "gadget"
    assert skeleton_dichotomy(host).holds


def test_wrong_gadget_rejected():
    T = build_cycle_cycle_host(4, 5).targets
    with pytest.raises(PreconditionError):
        build_cycle_cycle_host(4, 5, d_red=oracle_determiner({2}, T))


@pytest.mark.parametrize("call", [
    lambda: build_cycle_cycle_host(5, 5),
    lambda: build_cycle_cycle_host(3, 5),
    lambda: build_clique_cycle_host(2, 4),
    lambda: build_clique_cycle_host(3, 3),
    lambda: build_tree_clique_host(2, 3),
    lambda: build_tree_clique_host(3, 4, path_tree(3)),
    lambda: build_packing_host(ColorPattern(3, 1, (complete_graph(3),)), 4, 3),
    lambda: build_packing_host(pattern_11(), 3, 3),
])
def test_preconditions(call):
    with pytest.raises(PreconditionError):
        call()


def test_tree_clique_host_with_star():
    star = star_tree(2)
    host = build_tree_clique_host(3, 3, star)
    assert skeleton_dichotomy(host).holds


def test_apex_removal_isolates_only_apex():
    host = build_cycle_cycle_host(4, 5)
    g = host.without_apex()
    assert g.n == host.graph.n
    assert g.degree(host.apex) == 0
    assert g.num_edges() == host.graph.num_edges() - 3
