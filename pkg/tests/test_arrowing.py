import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import all_graphs, brute_arrows, brute_first_free, brute_is_free
from ramseymin.arrowing import (
    BudgetExceeded,
    Constraints,
    arrows,
    extend_low_degree_coloring,
    find_free_coloring,
    is_free,
    is_ramsey_minimal,
    minimal_subgraph,
    palette_split_recolor,
    ramsey_number,
    search,
)
from ramseymin.graph import (
    Clique,
    Cycle,
    Graph,
    PreconditionError,
    TargetTuple,
    complete_graph,
    cycle_graph,
    path_tree,
    star_tree,
)

K33 = TargetTuple.of(Clique(3), Clique(3))
SMALL_TARGETS = [
    K33,
    TargetTuple.of(Clique(3), Cycle(4)),
    TargetTuple.of(Cycle(4), Cycle(4)),
    TargetTuple.of(Clique(3), path_tree(3)),
    TargetTuple.of(Cycle(3), star_tree(2)),
    TargetTuple.of(Clique(2), Clique(3)),
    TargetTuple.of(Clique(3), Clique(3), Cycle(4)),
]


@st.composite
def small_graphs(draw, max_n=6, max_edges=9):
    n = draw(st.integers(1, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    es = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=max_edges)) if pairs else []
    return Graph.from_edges(n, es)


def test_k5_has_free_coloring():
    col = find_free_coloring(complete_graph(5), K33)
    assert col is not None
    assert brute_is_free(complete_graph(5), K33, col)


def test_k6_arrows_triangles():
    assert find_free_coloring(complete_graph(6), K33) is None
    rep = arrows(complete_graph(6), K33)
    assert rep.arrows and rep.witness is None and rep.nodes > 0


def test_forced_edge_on_c4():
    T = TargetTuple.of(Cycle(4), Cycle(4))
    col = find_free_coloring(cycle_graph(4), T, {(0, 1): 1})
    assert col[(0, 1)] == 1
    assert len(set(col.values())) == 2


def test_forced_violation_is_reported():
    g = complete_graph(3)
    out = search(g, K33, Constraints.forced({(0, 1): 1, (0, 2): 1, (1, 2): 1}))
    assert out.status == "none"
    assert out.violation == (1, (0, 1, 2))


def test_forced_edge_must_exist():
    with pytest.raises(PreconditionError):
        find_free_coloring(cycle_graph(4), K33, {(0, 2): 1})
    with pytest.raises(PreconditionError):
        find_free_coloring(cycle_graph(4), K33, {(0, 1): 3})


def test_chvatal_small_instance():
    T = TargetTuple.of(Clique(3), path_tree(3))
    assert arrows(complete_graph(5), T).arrows
    assert not arrows(complete_graph(4), T).arrows


def test_edgeless_never_arrows():
    for T in SMALL_TARGETS:
        assert not arrows(Graph.empty(4), T).arrows


def test_k2_target_blocks_its_colour():
    T = TargetTuple.of(Clique(2), Clique(2))
    assert arrows(Graph.from_edges(2, [(0, 1)]), T).arrows
    rep = is_ramsey_minimal(Graph.from_edges(2, [(0, 1)]), T)
    assert rep.minimal


def test_ramsey_numbers():
    assert ramsey_number(K33, 7) == 6
    assert ramsey_number(TargetTuple.of(Cycle(4), Clique(3)), 8) == 7
    assert ramsey_number(TargetTuple.of(Cycle(4), Cycle(4)), 7) == 6


def test_budget_is_a_third_outcome():
    out = search(complete_graph(6), K33, budget=10)
    assert out.status == "budget"
    with pytest.raises(BudgetExceeded):
        arrows(complete_graph(6), K33, budget=10)


def test_minimality_examples():
    rep = is_ramsey_minimal(complete_graph(6), K33)
    assert rep.minimal and len(rep.witnesses) == 15
    for e, col in rep.witnesses.items():
        assert brute_is_free(complete_graph(6).remove_edges([e]), K33, col)
    pendant = complete_graph(6).union_disjoint(Graph.empty(1)).add_edges([(5, 6)])
    rep = is_ramsey_minimal(pendant, K33)
    assert not rep.minimal and rep.failing == (5, 6)
    rep = is_ramsey_minimal(complete_graph(5), K33)
    assert rep.failing == "not Ramsey" and is_free(complete_graph(5), K33, rep.coloring)


def test_isolated_vertices_do_not_spoil_minimality():
    g = complete_graph(6).union_disjoint(Graph.empty(2))
    assert is_ramsey_minimal(g, K33).minimal


def test_minimal_subgraph_of_k7_for_c4_k3():
    T = TargetTuple.of(Cycle(4), Clique(3))
    m = minimal_subgraph(complete_graph(7), T)
    assert is_ramsey_minimal(m, T).minimal


def test_threads_do_not_change_the_witness():
    T = TargetTuple.of(Clique(3), Cycle(4))
    g = complete_graph(5)
    one = search(g, T, threads=1)
    two = search(g, T, threads=2)
    assert one.coloring == two.coloring
    assert search(complete_graph(6), K33, threads=2).coloring is None


def test_symmetry_breaking_keeps_the_least_witness():
    for T in (K33, TargetTuple.of(Clique(3), Cycle(4)), TargetTuple.of(Cycle(4), Cycle(4))):
        g = complete_graph(5)
        on = search(g, T, symmetry=True).coloring
        off = search(g, T, symmetry=False).coloring
        assert on == off
    with pytest.raises(PreconditionError):
        search(cycle_graph(5), K33, symmetry=True)


def test_symmetry_breaking_agrees_with_brute_force_on_k4():
    for T in SMALL_TARGETS[:5]:
        assert search(complete_graph(4), T, symmetry=True).coloring == brute_first_free(complete_graph(4), T)


@settings(max_examples=60, deadline=None)
@given(small_graphs(max_n=5, max_edges=7), st.sampled_from(SMALL_TARGETS[:6]))
def test_duality_and_least_witness_against_brute_force(g, T):
    expected = brute_first_free(g, T)
    got = find_free_coloring(g, T)
    assert got == expected
    assert arrows(g, T).arrows == (expected is None) == brute_arrows(g, T)


@settings(max_examples=60, deadline=None)
@given(small_graphs(max_n=5, max_edges=7), st.sampled_from(SMALL_TARGETS[:6]), st.data())
def test_forced_consistency(g, T, data):
    es = g.edges()
    if not es:
        return
    picked = data.draw(st.lists(st.sampled_from(es), unique=True, max_size=3))
    forced = {e: data.draw(st.sampled_from(list(T.colors))) for e in picked}
    got = find_free_coloring(g, T, forced)
    assert got == brute_first_free(g, T, forced)
    if got is not None:
        assert all(got[e] == c for e, c in forced.items())
        assert is_free(g, T, got)


@settings(max_examples=40, deadline=None)
@given(small_graphs(max_n=6, max_edges=12), st.sampled_from(SMALL_TARGETS), st.data())
def test_monotone_under_adding_edges(g, T, data):
    if not arrows(g, T).arrows:
        return
    pairs = list(itertools.combinations(range(g.n), 2))
    extra = data.draw(st.lists(st.sampled_from(pairs), unique=True, max_size=3))
    assert arrows(g.add_edges(extra), T).arrows


@settings(max_examples=40, deadline=None)
@given(small_graphs(max_n=6, max_edges=10), st.data())
def test_colour_symmetry(g, data):
    T = TargetTuple.of(Clique(3), Cycle(4), Clique(3))
    perm = data.draw(st.permutations([1, 2, 3]))
    T2 = T.permuted(perm)
    r1, r2 = arrows(g, T), arrows(g, T2)
    assert r1.arrows == r2.arrows
    if r1.witness is not None:
        mapped = {e: perm[c - 1] for e, c in r1.witness.items()}
        assert is_free(g, T2, mapped)


def test_permuting_identical_targets_keeps_witness_valid():
    g = complete_graph(5)
    col = find_free_coloring(g, K33)
    swapped = {e: 3 - c for e, c in col.items()}
    assert is_free(g, K33, swapped)


def test_link_constraints():
    g = Graph.from_edges(4, [(0, 1), (2, 3)])
    T = TargetTuple.of(Clique(3), Clique(3))
    eq = Constraints().link((0, 1), (2, 3), True).force((0, 1), 2)
    assert find_free_coloring(g, T, eq) == {(0, 1): 2, (2, 3): 2}
    ne = Constraints().link((0, 1), (2, 3), False).force((2, 3), 1)
    assert find_free_coloring(g, T, ne) == {(0, 1): 2, (2, 3): 1}
    both = Constraints().link((0, 1), (2, 3), False).link((0, 1), (2, 3), True)
    assert find_free_coloring(g, T, both) is None


# -- extension lemma -----------------------------------------------------------


def test_extension_degree_zero_returns_phi():
    g = Graph.from_edges(4, [(0, 1), (1, 2)])
    phi = {(0, 1): 1, (1, 2): 2}
    assert extend_low_degree_coloring(g, 3, phi, 3, 4) == phi


def test_extension_worked_example():
    # v = 0, N(v) = {a, b, c} = {1, 2, 3}, red edges ab, ac inside N(v)
    g = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)])
    phi = {(1, 2): 1, (1, 3): 1}
    out = extend_low_degree_coloring(g, 0, phi, 3, 4)
    assert out[(0, 1)] == 2 and out[(0, 2)] == 1 and out[(0, 3)] == 1
    assert brute_is_free(g, TargetTuple.of(Clique(3), Cycle(4)), out)


def test_extension_preconditions():
    g = complete_graph(5)
    with pytest.raises(PreconditionError):
        extend_low_degree_coloring(g, 0, {}, 3, 4)  # degree 4 > 3
    g = Graph.from_edges(3, [(0, 1), (1, 2)])
    with pytest.raises(PreconditionError):
        extend_low_degree_coloring(g, 0, {}, 3, 4)  # phi misses (1, 2)
    with pytest.raises(PreconditionError):
        extend_low_degree_coloring(g, 0, {(1, 2): 1}, 3, 3)  # ell < 4


def _random_instance(rng, max_n=8, max_deg=3):
    T = TargetTuple.of(Clique(3), Cycle(4))
    while True:
        n = rng.randint(2, max_n)
        v = rng.randrange(n)
        others = [x for x in range(n) if x != v]
        nbrs = rng.sample(others, rng.randint(0, min(max_deg, len(others))))
        rest = [(a, b) for a, b in itertools.combinations(others, 2) if rng.random() < 0.45]
        g = Graph.from_edges(n, rest + [(v, w) for w in nbrs])
        phi = _random_free_coloring(g.isolate(v), T, rng)
        if phi is not None:
            return g, v, phi


def _random_free_coloring(g, T, rng):
    """A free colouring found by search from a random pin, else the least one."""
    es = g.edges()
    if es:
        pin = {rng.choice(es): rng.choice([1, 2])}
        col = find_free_coloring(g, T, pin)
        if col is not None:
            return col
    return find_free_coloring(g, T)


def test_extension_randomised():
    rng = random.Random(20240601)
    T = TargetTuple.of(Clique(3), Cycle(4))
    for _ in range(200):
        g, v, phi = _random_instance(rng)
        out = extend_low_degree_coloring(g, v, phi, 3, 4)
        assert brute_is_free(g, T, out) if g.num_edges() <= 10 else is_free(g, T, out)
        assert all(out[e] == c for e, c in phi.items())


def test_extension_exhaustive_small_graphs():
    """Every graph on <= 5 vertices, every vertex of degree <= 3 and every
    free colouring of G - v extends."""
    T = TargetTuple.of(Clique(3), Cycle(4))
    count = 0
    for n in range(2, 6):
        for g in all_graphs(n):
            for v in range(n):
                if g.degree(v) > 3:
                    continue
                rest = g.isolate(v)
                es = rest.edges()
                for cols in itertools.product((1, 2), repeat=len(es)):
                    phi = dict(zip(es, cols))
                    if not is_free(rest, T, phi):
                        continue
                    out = extend_low_degree_coloring(g, v, phi, 3, 4)
                    assert is_free(g, T, out)
                    count += 1
    assert count > 1000


# -- palette split ---------------------------------------------------------------


def test_palette_split_on_k4():
    out = palette_split_recolor(complete_graph(4), 0, 1, 1, 3, 4, 3)
    assert out.coloring is not None
    assert brute_is_free(complete_graph(4), TargetTuple.mixed(1, 1, 4, 3), out.coloring)


def test_palette_split_isolated_apex():
    g = complete_graph(4).union_disjoint(Graph.empty(1))
    out = palette_split_recolor(g, 4, 1, 1, 3, 4, 3)
    assert out.coloring is not None and out.kept_at_apex == []


def test_palette_split_fails_on_ramsey_graph():
    # K_7 arrows (C_4, K_3), so no splitting can give a free colouring
    out = palette_split_recolor(complete_graph(7), 0, 1, 1, 3, 4, 3)
    assert out.coloring is None and out.failure


def test_palette_split_budget_is_distinct():
    with pytest.raises(BudgetExceeded):
        palette_split_recolor(complete_graph(7), 0, 1, 1, 3, 4, 3, budget=5)


def test_k4_k3_ramsey_number_within_default_budget():
    T = TargetTuple.of(Clique(4), Clique(3))
    assert not arrows(complete_graph(8), T).arrows
    assert arrows(complete_graph(9), T).arrows


def test_extension_over_graph_atlas():
    """Every graph on <= 7 vertices up to isomorphism, every vertex of degree
    <= 3, with colourings of G - v drawn by search (least one and one per pinned
    colour of the first edge)."""
    import networkx as nx

    T = TargetTuple.of(Clique(3), Cycle(4))
    runs = 0
    for a in nx.graph_atlas_g()[1:]:
        g = Graph.from_edges(a.number_of_nodes(), a.edges())
        for v in range(g.n):
            if g.degree(v) > 3:
                continue
            rest = g.isolate(v)
            phis = [find_free_coloring(rest, T)]
            if rest.num_edges():
                e = rest.edges()[0]
                phis += [find_free_coloring(rest, T, {e: c}) for c in (1, 2)]
            for phi in phis:
                if phi is None:
                    continue
                out = extend_low_degree_coloring(g, v, phi, 3, 4)
                assert brute_is_free(g, T, out)
                runs += 1
    assert runs > 3000
