import itertools
from math import prod

import networkx as nx
import pytest

from gwloc.graph_enum import (UnstableModuliError, count_by_profile,
                              enumerate_backbones, enumerate_graphs)
from gwloc.target_model import CurveClass, proj_bundle, projective_space


def test_p1_degree_one():
    m = projective_space(1)
    graphs = enumerate_graphs(m, CurveClass(1, None), 0)
    assert len(graphs) == 1
    assert graphs[0].aut_factor == 1


def test_p1_degree_two_unmarked():
    m = projective_space(1)
    graphs = enumerate_graphs(m, CurveClass(2, None), 0)
    assert len(graphs) == 3
    profiles = sorted((len(g.edges), g.degrees(), g.aut_factor) for g in graphs)
    assert profiles == [(1, (2,), 2), (2, (1, 1), 2), (2, (1, 1), 2)]


def test_p1_degree_two_one_marking():
    # independent double enumeration gives six classes (see the brute-force
    # cross-check below); the double edge and each path carry the marking at
    # either a distinguished end or the middle
    m = projective_space(1)
    graphs = enumerate_graphs(m, CurveClass(2, None), 1)
    assert len(graphs) == 6


def test_point_target_three_markings():
    m = projective_space(0)
    graphs = enumerate_graphs(m, CurveClass(0, None), 3)
    assert len(graphs) == 1
    assert graphs[0].aut_factor == 1
    assert graphs[0].markings == (0, 0, 0)


def test_unstable_error():
    m = projective_space(1)
    with pytest.raises(UnstableModuliError):
        enumerate_graphs(m, CurveClass(0, None), 2)


def test_count_by_profile_p1():
    m = projective_space(1)
    table = count_by_profile(m, CurveClass(2, None), 0)
    assert table == {(1, (2,)): 1, (2, (1, 1)): 2}


def test_count_by_profile_p2_lines():
    m = projective_space(2)
    table = count_by_profile(m, CurveClass(1, None), 0)
    assert table == {(1, (1,)): 3}


def test_no_duplicates_and_class_conservation():
    m = proj_bundle(1, (0, 1))
    graphs = enumerate_graphs(m, CurveClass(1, 1), 2)
    keys = [g.key for g in graphs]
    assert len(keys) == len(set(keys))
    for g in graphs:
        db = sum(m.class_of_line(li).d_base * d for (_, _, li, d) in g.edges)
        dh = sum(m.class_of_line(li).d_h * d for (_, _, li, d) in g.edges)
        assert (db, dh) == (1, 1)
        assert len(g.markings) == 2


def test_marking_exhaustiveness():
    m = projective_space(2)
    for g in enumerate_graphs(m, CurveClass(1, None), 2):
        assert all(0 <= v < len(g.vertices) for v in g.markings)


# ---------------------------------------------------------------------------
# independent brute-force cross-validation
# ---------------------------------------------------------------------------

def _labeled_trees(v):
    """All labeled trees on v vertices via sequence decoding."""
    if v == 1:
        yield []
        return
    if v == 2:
        yield [(0, 1)]
        return
    for seq in itertools.product(range(v), repeat=v - 2):
        degree = [1] * v
        for s in seq:
            degree[s] += 1
        seq_list = list(seq)
        edges = []
        ptr = 0
        leaves = sorted(i for i in range(v) if degree[i] == 1)
        import heapq
        heap = list(leaves)
        heapq.heapify(heap)
        deg = degree[:]
        for s in seq_list:
            leaf = heapq.heappop(heap)
            edges.append((leaf, s))
            deg[s] -= 1
            if deg[s] == 1:
                heapq.heappush(heap, s)
        u = heapq.heappop(heap)
        w = heapq.heappop(heap)
        edges.append((u, w))
        yield edges


def _brute_force_count(model, cls, n):
    """Count isomorphism classes of marked decorated trees by exhaustive
    generation and graph-isomorphism dedupe (small cases only)."""
    d_total = (cls.d_base, cls.d_h or 0)
    found = []
    max_edges = d_total[0] + max(0, (d_total[1] or 0)) + (
        max(model.spec.twists) * d_total[0] if model.kind == "proj_bundle" else 0)
    for v in range(2, max_edges + 2):
        for edges in _labeled_trees(v):
            for labels in itertools.product(range(len(model.fixed_points)), repeat=v):
                lines = []
                ok = True
                for (a, b) in edges:
                    li = model.line_between.get((labels[a], labels[b]))
                    if li is None:
                        ok = False
                        break
                    lines.append(li)
                if not ok:
                    continue
                for degs in itertools.product(range(1, sum(d_total) + 1), repeat=len(edges)):
                    db = sum(model.class_of_line(li).d_base * d for li, d in zip(lines, degs))
                    dh = sum((model.class_of_line(li).d_h or 0) * d for li, d in zip(lines, degs))
                    if (db, dh) != d_total:
                        continue
                    for marks in itertools.product(range(v), repeat=n):
                        g = nx.Graph()
                        for i in range(v):
                            g.add_node(i, fp=labels[i],
                                       marks=tuple(sorted(j for j, mv in enumerate(marks) if mv == i)))
                        for (a, b), li, d in zip(edges, lines, degs):
                            g.add_edge(a, b, line=li, degree=d)
                        found.append(g)
    classes = []
    nm = nx.algorithms.isomorphism.categorical_node_match(["fp", "marks"], [None, None])
    em = nx.algorithms.isomorphism.categorical_edge_match(["line", "degree"], [None, None])
    for g in found:
        if not any(nx.is_isomorphic(g, rep, node_match=nm, edge_match=em) for rep in classes):
            classes.append(g)
    return len(classes)


@pytest.mark.parametrize("d,n", [(1, 0), (1, 1), (2, 0), (2, 1), (3, 0), (2, 2)])
def test_cross_validation_p1(d, n):
    m = projective_space(1)
    got = len(enumerate_graphs(m, CurveClass(d, None), n))
    expected = _brute_force_count(m, CurveClass(d, None), n)
    assert got == expected


@pytest.mark.parametrize("d,n", [(1, 0), (1, 1), (1, 2), (2, 0)])
def test_cross_validation_p2(d, n):
    m = projective_space(2)
    got = len(enumerate_graphs(m, CurveClass(d, None), n))
    expected = _brute_force_count(m, CurveClass(d, None), n)
    assert got == expected


@pytest.mark.parametrize("cls,n", [(CurveClass(0, 1), 0), (CurveClass(1, 0), 1), (CurveClass(1, 1), 0)])
def test_cross_validation_bundle(cls, n):
    m = proj_bundle(1, (0, 0))
    got = len(enumerate_graphs(m, cls, n))
    expected = _brute_force_count(m, cls, n)
    assert got == expected


def test_aut_factor_weighted_count():
    # sum over classes of (v! / |Aut|) equals the number of labeled
    # representatives, checked on P1 degree 2 with one marking
    import math
    m = projective_space(1)
    graphs = enumerate_graphs(m, CurveClass(2, None), 1)
    by_vertices = {}
    for g in graphs:
        by_vertices.setdefault(len(g.vertices), []).append(g)
    # 3-vertex classes: middle at either pole, marking middle/end
    three = by_vertices[3]
    labeled = sum(math.factorial(3) // g.aut for g in three)
    # labeled count: 3 trees x 2 middle labels x 3 marking slots = 18
    assert labeled == 18
