import itertools

import pytest
from hypothesis import given, settings, strategies as st

import networkx as nx

from oracles import to_nx
from ramseymin.graph import Graph, LemmaViolation, PreconditionError, complete_graph, cycle_graph
from ramseymin.packing import (
    ColorPattern,
    compute_p,
    drop_to_subpattern,
    lambda_defeats,
    pattern_from_labels,
    verify_pattern,
    verify_subset_clique_property,
)


def _has_clique(g, k):
    if k <= 0:
        return True
    return any(len(c) >= k for c in nx.find_cliques(g)) if g.number_of_nodes() else False


def brute_valid(p, t):
    """Every lambda in [q]^n checked directly; P1 checked with networkx."""
    for g in p.graphs:
        if _has_clique(to_nx(g), t + 1):
            return False
    for lam in itertools.product(range(1, p.q + 1), repeat=p.n):
        cyc = [c for c in lam if c <= p.q1]
        if len(cyc) != len(set(cyc)):
            continue
        ok = False
        for j in range(p.q1 + 1, p.q + 1):
            verts = [v for v in range(p.n) if lam[v] == j]
            sub = to_nx(p.graph_of(j)).subgraph(verts)
            if _has_clique(sub, t):
                ok = True
                break
        if not ok:
            return False
    return True


def brute_p(q1, q2, t, n_max):
    for n in range(1, n_max + 1):
        m = n * (n - 1) // 2
        for labels in itertools.product(range(q2 + 1), repeat=m):
            if brute_valid(pattern_from_labels(n, q1, q2, labels), t):
                return n
    return None


@st.composite
def patterns(draw, max_n=5):
    n = draw(st.integers(1, max_n))
    q1 = draw(st.integers(0, 2))
    q2 = draw(st.integers(0, 2))
    m = n * (n - 1) // 2
    labels = draw(st.lists(st.integers(0, q2), min_size=m, max_size=m))
    return pattern_from_labels(n, q1, q2, labels)


# -- examples -----------------------------------------------------------------------


def test_c4_pattern_valid():
    p = ColorPattern(4, 1, (cycle_graph(4),))
    assert verify_pattern(p, 2).valid


def test_p1_failure_has_no_counterexample():
    p = ColorPattern(3, 0, (complete_graph(3),))
    v = verify_pattern(p, 2)
    assert not v.valid and v.counterexample is None and v.reason.startswith("P1")


def test_two_cycle_colours_on_two_vertices_invalid():
    v = verify_pattern(ColorPattern(2, 2, ()), 2)
    assert not v.valid
    assert v.counterexample == (1, 2)
    assert verify_pattern(ColorPattern(3, 2, ()), 2).valid


def test_pattern_validation():
    with pytest.raises(PreconditionError):
        ColorPattern(3, 0, (complete_graph(3), complete_graph(3)))
    with pytest.raises(PreconditionError):
        ColorPattern(3, 0, (complete_graph(4),))
    with pytest.raises(PreconditionError):
        ColorPattern(3, -1, ())
    with pytest.raises(PreconditionError):
        lambda_defeats(ColorPattern(2, 1, ()), 2, (1, 3))


def test_json_round_trip():
    p = ColorPattern(4, 1, (cycle_graph(4),))
    assert ColorPattern.from_json(p.to_json()) == p


@settings(max_examples=150, deadline=None)
@given(patterns(), st.integers(1, 3))
def test_verify_matches_full_lambda_enumeration(p, t):
    v = verify_pattern(p, t)
    assert v.valid == brute_valid(p, t)
    if v.counterexample is not None:
        assert lambda_defeats(p, t, v.counterexample)


@settings(max_examples=100, deadline=None)
@given(patterns(max_n=4), st.integers(1, 3))
def test_isolated_vertex_keeps_validity(p, t):
    if verify_pattern(p, t).valid:
        assert verify_pattern(p.with_isolated_vertex(), t).valid


# -- exact values ----------------------------------------------------------------------


@pytest.mark.parametrize("q1,q2,t,n_max", [
    (0, 1, 2, 4),
    (0, 2, 2, 4),
    (1, 1, 2, 4),
    (2, 1, 2, 4),
    (0, 1, 3, 4),
    (1, 0, 2, 3),
    (0, 2, 2, 3),
])
def test_compute_p_matches_brute_force(q1, q2, t, n_max):
    cert = compute_p(q1, q2, t, n_max)
    expected = brute_p(q1, q2, t, n_max)
    assert (cert.value if cert else None) == expected
    if cert is not None:
        assert verify_pattern(cert.witness, t).valid
        assert brute_valid(cert.witness, t)


def test_known_values():
    assert compute_p(0, 2, 2, 6).value == 4
    assert compute_p(1, 1, 2, 6).value == 4
    for q1 in range(1, 4):
        assert compute_p(q1, 0, 3, 6).value == q1 + 1
    assert compute_p(3, 0, 2, 3) is None


def test_q1_plus_one_when_no_clique_colours():
    cert = compute_p(2, 0, 2, 5)
    assert cert.witness == ColorPattern(3, 2, ())
    assert cert.attestation[0]["closed_form"]


def test_search_respects_budget():
    from ramseymin.arrowing import BudgetExceeded

    with pytest.raises(BudgetExceeded):
        compute_p(0, 2, 3, 8, budget=50)


def test_adding_cycle_colours_raises_value():
    for t in (2, 3):
        base = compute_p(0, 1, t, 7).value
        values = [compute_p(q1, 1, t, 7).value for q1 in (1, 2)]
        assert values[0] >= base + 1 and values[1] >= values[0] + 1


def test_one_cycle_one_clique_colour():
    for t in (2, 3):
        cert = compute_p(1, 1, t, 7)
        assert cert.value == 2 * t


def test_preconditions():
    for args in ((0, 0, 2, 3), (1, 1, 1, 3), (-1, 1, 2, 3)):
        with pytest.raises(PreconditionError):
            compute_p(*args)


# -- lemmas ----------------------------------------------------------------------------


def test_drop_to_subpattern_on_witnesses():
    for q2, t in ((2, 2), (1, 2), (1, 3)):
        cert = compute_p(0, q2, t, 6)
        assert cert is not None
        for q1 in range(q2):
            sub = drop_to_subpattern(cert.witness, q1, t)
            assert sub.q1 == q1 and sub.q2 == q2 - q1
            assert brute_valid(sub, t) if sub.n <= 5 else verify_pattern(sub, t).valid


def test_drop_to_subpattern_errors():
    p = compute_p(0, 2, 2, 6).witness
    with pytest.raises(PreconditionError):
        drop_to_subpattern(p, 2, 2)
    with pytest.raises(PreconditionError):
        drop_to_subpattern(ColorPattern(4, 1, (cycle_graph(4),)), 0, 2)
    with pytest.raises(PreconditionError):
        drop_to_subpattern(ColorPattern(2, 0, (Graph.from_edges(2, []),)), 0, 2)


def test_drop_to_subpattern_reports_violation(monkeypatch):
    import ramseymin.packing as P

    p = compute_p(0, 2, 2, 6).witness
    real = P.verify_pattern
    monkeypatch.setattr(P, "verify_pattern", lambda q, t: real(q, t) if q.q1 == 0 else P.PatternVerdict(False))
    with pytest.raises(LemmaViolation):
        drop_to_subpattern(p, 1, 2)


def test_subset_clique_property():
    p = compute_p(0, 2, 2, 6).witness
    assert verify_subset_clique_property(p, 2, 2) is False
    assert verify_subset_clique_property(ColorPattern(4, 0, (complete_graph(4),)), 3, 4) is False
    assert verify_subset_clique_property(ColorPattern(4, 0, (complete_graph(4),)), 2, 2) is True
    assert verify_subset_clique_property(ColorPattern(3, 2, ()), 2, 2) is True
