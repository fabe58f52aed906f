import math

import numpy as np
import pytest

from lochness import ends as E
from lochness import minimal_cover as C
from lochness import periodic_map as P
from lochness.errors import ResourceLimitError


def _brute_components(g, r, R):
    # plain BFS from scratch, components by repeated flood fill over an explicit edge list
    dist = {g.root: 0}
    layer = [g.root]
    for d in range(1, R + 1):
        nxt = []
        for v in layer:
            for w in g.neighbors(v):
                if w not in dist:
                    dist[w] = d
                    nxt.append(w)
        layer = nxt
    outer = {v for v, d in dist.items() if d > r}
    label = {}
    for v in outer:
        if v in label:
            continue
        label[v] = v
        todo = [v]
        while todo:
            x = todo.pop()
            for y in g.neighbors(x):
                if y in outer and y not in label:
                    label[y] = v
                    todo.append(y)
    return len({label[v] for v in outer if dist[v] == R})


def test_ball_examples():
    assert len(E.ball(E.line_graph(), 3)) == 7
    assert len(E.ball(E.grid2(), 2)) == 13
    assert len(E.ball(E.tree(4), 2)) == 17
    with pytest.raises(ValueError):
        E.ball(E.line_graph(), -1)
    with pytest.raises(ResourceLimitError):
        E.ball(E.grid2(), 30, cap=100)


def test_probe_examples():
    assert E.ends_probe(E.line_graph(), 3, 10).components == 2
    assert E.ends_probe(E.grid2(), 3, 10).components == 1
    assert E.ends_probe(E.tree(4), 2, 8).components == 36
    with pytest.raises(ValueError):
        E.ends_probe(E.line_graph(), 4, 4)


@pytest.mark.parametrize("d", [3, 4, 5])
@pytest.mark.parametrize("r", [0, 1, 2, 3, 4])
def test_tree_closed_form(d, r):
    R = r + 3 if d == 5 and r == 4 else r + 4
    assert E.ends_probe(E.tree(d), r, R).components == E.tree_probe_count(d, r)


@pytest.mark.parametrize("name", ["line", "grid", "hex", "tree3"])
def test_probe_matches_brute_force(name):
    g = E.named_graph(name)
    for r, R in ((1, 4), (2, 6), (3, 7)):
        assert E.ends_probe(g, r, R).components == _brute_components(g, r, R)


def test_certificates():
    assert E.one_end_certificate(E.hex_cayley_H()).passed
    assert E.one_end_certificate(E.hxh_cayley()).passed
    line = E.one_end_certificate(E.line_graph())
    assert not line.passed
    assert [p.components for p in line.probes] == [2, 2, 2, 2]
    assert "probes only" in str(line)
    with pytest.raises(ValueError):
        E.one_end_certificate(E.line_graph(), ())


def test_certificate_stops_at_cap():
    rep = E.one_end_certificate(E.grid2(), cap=200, stop_at_cap=True)
    assert rep.passed and rep.skipped
    assert len(rep.probes) + len(rep.skipped) == len(E.DEFAULT_SCHEDULE)
    with pytest.raises(ResourceLimitError):
        E.one_end_certificate(E.grid2(), cap=200)


def test_hex_structure():
    g = E.hex_cayley_H()
    assert E.degrees(g, 4) == {3}
    assert E.is_symmetric(g, 4)
    v = g.root
    for s in "abc":
        assert E.hex_step(E.hex_step(v, s), s) == v
    w = v
    for s in "abcabc":
        w = E.hex_step(w, s)
    assert w == v


def _girth(g, radius):
    best = math.inf
    for start in E.ball(g, 2):
        dist, parent = {start: 0}, {start: None}
        queue = [start]
        for v in queue:
            if dist[v] > radius:
                break
            for w in g.neighbors(v):
                if w not in dist:
                    dist[w], parent[w] = dist[v] + 1, v
                    queue.append(w)
                elif parent[v] != w:
                    best = min(best, dist[v] + dist[w] + 1)
    return best


def test_hex_girth_six():
    assert _girth(E.hex_cayley_H(), 5) == 6


def test_product_structure():
    hh = E.product_graph(E.hex_cayley_H(), E.hex_cayley_H())
    assert E.degrees(hh, 2) == {6}
    assert E.is_symmetric(hh, 2)
    assert len(E.ball(hh, 3)) == len(E.ball(E.hxh_cayley(), 3))
    sizes = [len(E.ball(E.hex_cayley_H(), k)) for k in range(4)]
    conv = [sum(sizes[i] - (sizes[i - 1] if i else 0) for i in range(a + 1))
            for a in range(4)]
    assert conv == sizes


def _float_coxeter_sizes(p, q, R):
    m = {(0, 1): p, (1, 2): q, (0, 2): 2}
    B = np.eye(3)
    for (i, j), mij in m.items():
        B[i, j] = B[j, i] = -math.cos(math.pi / mij)
    gens = []
    for i in range(3):
        S = np.eye(3)
        S[i, :] -= 2 * B[i, :]
        gens.append(S)

    def key(M):
        return tuple(np.round(M, 6).ravel())

    seen = {key(np.eye(3))}
    layer = [np.eye(3)]
    sizes = [1]
    for _ in range(R):
        nxt = []
        for M in layer:
            for S in gens:
                N = M @ S
                k = key(N)
                if k not in seen:
                    seen.add(k)
                    nxt.append(N)
        layer = nxt
        sizes.append(len(seen))
    return sizes


@pytest.mark.parametrize("pq", [(6, 4), (4, 5), (3, 7)])
def test_hyperbolic_exact_matches_float(pq):
    g = E.hyperbolic_flag_graph(*pq)
    exact = [len(E.ball(g, k)) for k in range(9)]
    assert exact == _float_coxeter_sizes(*pq, 8)
    assert E.degrees(g, 3) == {3}
    assert E.is_symmetric(g, 3)


def test_hyperbolic_relations():
    root, step = E.coxeter_pq(6, 4)
    for word, n in (((0, 1), 6), ((1, 2), 4), ((0, 2), 2)):
        v = root
        for _ in range(n):
            for i in word:
                v = step(v, i)
        assert v == root
    v = root
    for i in (0, 1) * 3:
        v = step(v, i)
    assert v != root


def test_hyperbolic_sizes_and_layers():
    g = E.hyperbolic_flag_graph(6, 4)
    assert [len(E.ball(g, k)) for k in range(9)] == [1, 4, 9, 17, 29, 46, 70, 103, 148]
    clipped = E.hyperbolic_flag_graph(6, 4, layers=3)
    assert len(E.ball(clipped, 10)) == 17


@pytest.mark.parametrize("pq", [(4, 4), (3, 6), (6, 3), (2, 9), (5, 4 // 2)])
def test_hyperbolic_rejects_non_hyperbolic(pq):
    with pytest.raises(ValueError):
        E.hyperbolic_flag_graph(*pq)


def test_tree_rejects_small_degree():
    with pytest.raises(ValueError):
        E.tree(2)


@pytest.mark.parametrize("name", ["3.6.3.6", "4.8.8"])
def test_flag_graph_of_periodic(name):
    g = E.flag_graph_of(P.build_tiling(name))
    assert E.degrees(g, 3) == {3}
    assert E.is_symmetric(g, 3)


def test_flag_graph_of_finite():
    from lochness.flag_system import cube
    g = E.flag_graph_of(cube())
    assert len(E.ball(g, 50)) == 48
    with pytest.raises(TypeError):
        E.flag_graph_of("cube")


def test_dual_graph_of_patch():
    pm = P.build_tiling("3.6.3.6")
    cp = C.cover_patch(pm, r=14)
    g = E.dual_graph_of(cp)
    # the base face of the cover is a hexagon (p = 6) with six neighbours
    assert len(g.neighbors(g.root)) == 6
    assert E.is_symmetric(g, 2)


def test_cover_dual_graph_is_hxh_like():
    g = E.cover_dual_graph(P.build_tiling("3.6.3.6"))
    assert E.degrees(g, 2) == {6}
    assert E.is_symmetric(g, 2)
    hxh = E.hxh_cayley()
    assert [len(E.ball(g, k)) for k in range(5)] == [len(E.ball(hxh, k)) for k in range(5)]


def test_cover_dual_graph_vertex_side():
    g = E.cover_dual_graph(P.build_tiling("4.8.8"), vertices=True)
    assert E.degrees(g, 2) == {3}


def test_named_graphs_and_dot():
    assert E.named_graph("tree:5").name == "tree5"
    assert E.named_graph("hyperbolic:4:5").name == "hyperbolic{4,5}"
    with pytest.raises(KeyError):
        E.named_graph("moebius")
    dot = E.ball_to_dot(E.hex_cayley_H(), 1)
    assert dot.startswith('graph "hex" {') and dot.count("--") == 3
    assert E.ball_to_dot(E.hex_cayley_H(), 2) == E.ball_to_dot(E.hex_cayley_H(), 2)


def test_probe_counts_stabilise():
    for g in (E.grid2(), E.hex_cayley_H()):
        counts = [E.ends_probe(g, 2, R).components for R in range(4, 10)]
        assert all(a >= b for a, b in zip(counts, counts[1:]))
