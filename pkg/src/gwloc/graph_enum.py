"""Enumeration of decorated trees indexing torus-fixed loci of genus-0
stable map spaces, with exact automorphism factors.

A decorated tree carries a fixed point at each vertex, an invariant line and
covering degree at each edge, and (optionally) an assignment of markings to
vertices.  All degree lives on edges; contracted components correspond to
vertices and are handled by the engine's vertex factors.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import prod

import networkx as nx

from .target_model import CurveClass, TargetModel


class UnstableModuliError(Exception):
    pass


@dataclass(frozen=True)
class Flag:
    vertex: int
    edge: int


@dataclass(frozen=True)
class DecoratedGraph:
    """Isomorphism class of a decorated (optionally marked) tree.

    vertices: fixed point index per vertex slot
    edges:    (u, v, line index, degree)
    markings: vertex slot per marking (empty tuple when unmarked)
    aut:      order of the decoration-preserving automorphism group
    """

    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int, int, int], ...]
    markings: tuple[int, ...]
    aut: int
    key: tuple

    @property
    def aut_factor(self) -> int:
        return self.aut * prod((e[3] for e in self.edges), start=1)

    def degrees(self) -> tuple[int, ...]:
        return tuple(sorted(e[3] for e in self.edges))

    def valence(self, v: int) -> int:
        return sum(1 for (a, b, _, _) in self.edges if v in (a, b))

    def markings_at(self, v: int) -> tuple[int, ...]:
        return tuple(i for i, mv in enumerate(self.markings) if mv == v)


@lru_cache(maxsize=None)
def _factorial(n: int) -> int:
    r = 1
    for i in range(2, n + 1):
        r *= i
    return r


def _centroids(n: int, adj: dict[int, list[tuple[int, object]]]) -> list[int]:
    """Tree centroid(s): vertices minimizing the largest component left
    after their removal (trees here are tiny, so the direct scan is fine)."""
    if n == 1:
        return [0]

    def max_comp(u):
        comp = []
        for v, _ in adj[u]:
            cnt = 0
            stack = [(v, u)]
            while stack:
                a, p = stack.pop()
                cnt += 1
                for b, _ in adj[a]:
                    if b != p:
                        stack.append((b, a))
            comp.append(cnt)
        return max(comp) if comp else 0

    vals = [max_comp(u) for u in range(n)]
    m = min(vals)
    return [u for u in range(n) if vals[u] == m]


def _encode_rooted(root: int, parent: int, adj, vkeys):
    items = []
    aut = 1
    for v, ekey in adj[root]:
        if v == parent:
            continue
        enc, a = _encode_rooted(v, root, adj, vkeys)
        items.append((ekey, enc))
        aut *= a
    items.sort()
    i = 0
    while i < len(items):
        j = i
        while j < len(items) and items[j] == items[i]:
            j += 1
        aut *= _factorial(j - i)
        i = j
    return (vkeys[root], tuple(items)), aut


def _canonical(n, adj, vkeys):
    """Canonical key and automorphism count of a decorated tree."""
    cents = _centroids(n, adj)
    if len(cents) == 1:
        enc, aut = _encode_rooted(cents[0], -1, adj, vkeys)
        return ("c", enc), aut
    c1, c2 = cents
    ekey = next(ek for v, ek in adj[c1] if v == c2)
    e1, a1 = _encode_rooted(c1, c2, adj, vkeys)
    e2, a2 = _encode_rooted(c2, c1, adj, vkeys)
    if e2 < e1:
        e1, e2 = e2, e1
    aut = a1 * a2 * (2 if e1 == e2 else 1)
    return ("b", ekey, e1, e2), aut


def _class_tuple(model: TargetModel, cls: CurveClass) -> tuple[int, int]:
    return (cls.d_base, cls.d_h or 0)


def _edge_budget(model: TargetModel, cls: CurveClass) -> int:
    db, dh = _class_tuple(model, cls)
    if model.kind == "projective_space":
        return db
    a_max = max(model.spec.twists)
    return db + max(0, dh + a_max * db)


def _tree_shapes(v: int):
    if v == 1:
        yield {0: []}
        return
    if v == 2:
        yield {0: [1], 1: [0]}
        return
    for g in nx.nonisomorphic_trees(v):
        yield {u: sorted(g.neighbors(u)) for u in g.nodes}


def _enumerate_decorated(model: TargetModel, cls: CurveClass):
    """All labeled decorated trees (before dedupe) as (verts, edges)."""
    db_target, dh_target = _class_tuple(model, cls)
    n_fp = len(model.fixed_points)
    budget = _edge_budget(model, cls)
    for n_edges in range(1, budget + 1):
        v = n_edges + 1
        for shape in _tree_shapes(v):
            edge_list = sorted({(min(a, b), max(a, b)) for a in shape for b in shape[a]})
            # assign fixed points by DFS over vertex slots
            order = sorted(shape)
            for labels in _label_assignments(model, shape, order, n_fp):
                lines = []
                ok = True
                for (a, b) in edge_list:
                    li = model.line_between.get((labels[a], labels[b]))
                    if li is None:
                        ok = False
                        break
                    lines.append(li)
                if not ok:
                    continue
                for degs in _degree_assignments(model, lines, db_target, dh_target):
                    edges = tuple((a, b, li, d) for (a, b), li, d in zip(edge_list, lines, degs))
                    yield tuple(labels), edges


def _label_assignments(model: TargetModel, shape, order, n_fp):
    labels = [-1] * len(order)

    def ok(slot, fp):
        for nb in shape[slot]:
            if labels[nb] != -1 and (labels[nb], fp) not in model.line_between:
                return False
        return True

    def rec(i):
        if i == len(order):
            yield tuple(labels)
            return
        slot = order[i]
        for fp in range(n_fp):
            if ok(slot, fp):
                labels[slot] = fp
                yield from rec(i + 1)
                labels[slot] = -1

    yield from rec(0)


def _degree_assignments(model: TargetModel, lines, db_target, dh_target):
    classes = [_class_tuple(model, model.class_of_line(li)) for li in lines]
    a_max = max(model.spec.twists) if model.kind == "proj_bundle" else 0
    n = len(lines)
    horiz_after = [0] * (n + 1)
    vert_after = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        horiz_after[i] = horiz_after[i + 1] + (1 if classes[i][0] > 0 else 0)
        vert_after[i] = vert_after[i + 1] + (1 if classes[i][0] == 0 else 0)
    degs = [0] * n

    def rec(i, db, dh):
        if i == n:
            if db == 0 and dh == 0:
                yield tuple(degs)
            return
        cb, ch = classes[i]
        if cb > 0:
            dmax = (db - horiz_after[i + 1]) // cb
        else:
            dmax = dh + a_max * db - vert_after[i + 1]
        for d in range(1, dmax + 1):
            ndb = db - d * cb
            ndh = dh - d * ch
            if ndb < horiz_after[i + 1] or ndh + a_max * ndb < vert_after[i + 1]:
                continue
            degs[i] = d
            yield from rec(i + 1, ndb, ndh)

    yield from rec(0, db_target, dh_target)


def _vertex_keys(model, verts, markings_at):
    return [
        (model.fixed_points[fp].label, tuple(sorted(markings_at[i])))
        for i, fp in enumerate(verts)
    ]


def _adjacency(verts, edges):
    adj = {i: [] for i in range(len(verts))}
    for (a, b, li, d) in edges:
        adj[a].append((b, (li, d)))
        adj[b].append((a, (li, d)))
    return adj


def enumerate_backbones(model: TargetModel, cls: CurveClass) -> list[DecoratedGraph]:
    """Unmarked decorated trees, one per isomorphism class, deterministic
    order; memoized per (model, class)."""
    cache_key = (cls.d_base, cls.d_h)
    cached = model._backbone_cache.get(cache_key)
    if cached is not None:
        return cached
    out: dict[tuple, DecoratedGraph] = {}
    if cls.is_zero():
        for fp in model.fixed_points:
            key = ("c", ((fp.label, ()), ()))
            out[key] = DecoratedGraph((fp.index,), (), (), 1, key)
    else:
        for verts, edges in _enumerate_decorated(model, cls):
            adj = _adjacency(verts, edges)
            vkeys = _vertex_keys(model, verts, {i: () for i in range(len(verts))})
            key, aut = _canonical(len(verts), adj, vkeys)
            if key not in out:
                out[key] = DecoratedGraph(verts, edges, (), aut, key)
    result = [out[k] for k in sorted(out)]
    model._backbone_cache[cache_key] = result
    return result


def enumerate_graphs(model: TargetModel, cls: CurveClass, n: int) -> list[DecoratedGraph]:
    """Marked decorated trees, one per isomorphism class, deterministic
    order, with aut_factor = |Aut| * prod of edge degrees."""
    if cls.is_zero() and n < 3:
        raise UnstableModuliError("unstable moduli problem")
    if not model.is_effective(cls):
        return []
    out: dict[tuple, DecoratedGraph] = {}
    for bb in enumerate_backbones(model, cls):
        v = len(bb.vertices)
        for marks in _all_assignments(n, v):
            at = {i: [] for i in range(v)}
            for m_idx, slot in enumerate(marks):
                at[slot].append(m_idx)
            adj = _adjacency(bb.vertices, bb.edges)
            vkeys = _vertex_keys(model, bb.vertices, at)
            key, aut = _canonical(v, adj, vkeys)
            if key not in out:
                out[key] = DecoratedGraph(bb.vertices, bb.edges, marks, aut, key)
    # class conservation sanity: each graph's edge classes sum to cls
    for g in out.values():
        db = sum(model.class_of_line(li).d_base * d for (_, _, li, d) in g.edges)
        dh = sum((model.class_of_line(li).d_h or 0) * d for (_, _, li, d) in g.edges)
        if (db, dh) != _class_tuple(model, cls):
            raise AssertionError("edge classes do not sum to the requested class")
    return [out[k] for k in sorted(out)]


def _all_assignments(n: int, v: int):
    if n == 0:
        yield ()
        return
    idx = [0] * n
    while True:
        yield tuple(idx)
        i = n - 1
        while i >= 0 and idx[i] == v - 1:
            idx[i] = 0
            i -= 1
        if i < 0:
            return
        idx[i] += 1


def count_by_profile(model: TargetModel, cls: CurveClass, n: int) -> dict[tuple[int, tuple[int, ...]], int]:
    """Graph counts bucketed by (edge count, sorted edge degrees)."""
    table: dict[tuple[int, tuple[int, ...]], int] = {}
    for g in enumerate_graphs(model, cls, n):
        key = (len(g.edges), g.degrees())
        table[key] = table.get(key, 0) + 1
    return table
