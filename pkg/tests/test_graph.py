import math

import numpy as np
import pytest

from eondpp.graph import (
    DisconnectedError, Network, NetworkError, gabriel_edges, gabriel_generate, is_connected,
    shortest_path_metrics,
)
from eondpp.spectrum import CU, SpectrumSet

from conftest import build
from oracles import floyd_warshall, gabriel_edge_set


def test_out_arcs_triangle():
    net = build(3, 4, [(0, 1, 1), (1, 2, 1), (0, 2, 1)])
    assert [(eid, w) for eid, w, _ in net.out_arcs(0)] == [(0, 1), (2, 2)]


def test_out_arcs_parallel_edges():
    net = build(2, 4, [(0, 1, 1), (0, 1, 2)])
    arcs = net.out_arcs(0)
    assert len(arcs) == 2
    assert {eid for eid, _, _ in arcs} == {0, 1}


def test_out_arcs_isolated_and_invalid():
    net = build(3, 4, [(0, 1, 1)])
    assert net.out_arcs(2) == []
    with pytest.raises(NetworkError):
        net.out_arcs(3)


def test_construction_rejects_bad_edges():
    net = Network(3, 4)
    with pytest.raises(NetworkError):
        net.add_edge(1, 1, 1.0)
    with pytest.raises(NetworkError):
        net.add_edge(0, 1, 0.0)
    with pytest.raises(NetworkError):
        net.add_edge(0, 5, 1.0)
    with pytest.raises(NetworkError):
        net.add_edge(0, 1, 1.0, SpectrumSet.parse("0-4"))
    net.add_edge(0, 1, 1.0, edge_id=7)
    with pytest.raises(NetworkError):
        net.add_edge(1, 2, 1.0, edge_id=7)


def test_spectrum_shared_by_both_directions():
    net = build(2, 4, [(0, 1, 1)])
    net.allocate([0], CU(1, 2))
    (eid, _, _), = net.out_arcs(1)
    assert net.edge(eid).available == SpectrumSet.parse("0-0,3-3")
    net.release([0], CU(1, 2))
    assert net.edge(0).available == SpectrumSet.full(4)


def test_allocate_is_all_or_nothing():
    net = build(3, 4, [(0, 1, 1), (1, 2, 1)])
    net.allocate([1], CU(0, 0))
    with pytest.raises(ValueError):
        net.allocate([0, 1], CU(0, 1))
    assert net.edge(0).available == SpectrumSet.full(4)


def test_gabriel_two_points():
    net = gabriel_generate(2, 10_000, rng_seed=3)
    assert net.n_edges == 1


def test_gabriel_collinear_excludes_long_edge():
    pts = np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]])
    assert gabriel_edges(pts) == [(0, 1), (1, 2)]


def test_gabriel_point_on_circle_does_not_block():
    # (0,1) lies exactly on the circle with diameter (-1,0)-(1,0)
    pts = np.array([[-1.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    assert (0, 1) in gabriel_edges(pts)


def test_gabriel_rejects_tiny_n():
    with pytest.raises(NetworkError):
        gabriel_generate(1, 10_000, 0)


@pytest.mark.parametrize("seed", range(5))
def test_gabriel_25_matches_brute_force_checker(seed):
    net = gabriel_generate(25, 10_000, seed)
    edges = {(min(e.u, e.v), max(e.u, e.v)) for e in net.edges}
    assert edges == gabriel_edge_set(net.coordinates)
    assert is_connected(net)
    side = math.sqrt(25 * 10_000)
    assert all(0 <= x <= side and 0 <= y <= side for x, y in net.coordinates)
    for e in net.edges:
        (x1, y1), (x2, y2) = net.coordinates[e.u], net.coordinates[e.v]
        assert e.length_km == pytest.approx(math.hypot(x1 - x2, y1 - y2), abs=1e-6)
        assert e.available == SpectrumSet.full(net.omega)


def test_metrics_path_graph():
    net = build(3, 4, [(0, 1, 1), (1, 2, 1)])
    alpha, diam = shortest_path_metrics(net)
    assert alpha == pytest.approx(4 / 3)
    assert diam == 2


def test_metrics_single_edge():
    net = build(2, 4, [(0, 1, 7.5)])
    assert shortest_path_metrics(net) == (1.0, 7.5)


def test_metrics_disconnected():
    net = build(3, 4, [(0, 1, 1)])
    with pytest.raises(DisconnectedError):
        shortest_path_metrics(net)


@pytest.mark.parametrize("seed", range(5))
def test_metrics_match_floyd_warshall(seed):
    net = gabriel_generate(10, 10_000, seed)
    n = net.n_vertices
    d = floyd_warshall(n, [(e.u, e.v, e.length_km) for e in net.edges])
    # random lengths make shortest paths unique; walk each one along tight edges
    hops = []
    for s in range(n):
        for t in range(s + 1, n):
            k, cur = 0, s
            while cur != t:
                nxt = min((w for w in range(n) if w != cur and any(
                    {e.u, e.v} == {cur, w} and math.isclose(e.length_km + d[w][t], d[cur][t], rel_tol=1e-12)
                    for e in net.edges)))
                cur, k = nxt, k + 1
            hops.append(k)
    alpha, diam = shortest_path_metrics(net)
    assert alpha == pytest.approx(sum(hops) / len(hops))
    assert diam == pytest.approx(max(d[s][t] for s in range(n) for t in range(n)))


def test_json_round_trip(tmp_path):
    net = gabriel_generate(12, 10_000, 4, omega=16)
    net.allocate([net.edges[0].id], CU(2, 5))
    path = tmp_path / "g.json"
    net.save(path)
    again = Network.load(path)
    assert again == net
    assert again.to_json() == net.to_json()
    doc = net.to_dict()
    assert list(doc) == ["omega", "vertices", "edges"]
    assert list(doc["edges"][0]) == ["id", "u", "v", "length_km", "available"]
    assert doc["edges"][0]["available"] == "0-1,6-15"


def test_json_rejects_malformed():
    with pytest.raises(NetworkError):
        Network.from_dict({"omega": 4, "vertices": [{"id": 0}], "edges": [{"u": 0}]})
    with pytest.raises(NetworkError):
        Network.from_dict({"omega": 4, "vertices": [{"id": 1}], "edges": []})


def test_copy_is_independent():
    net = build(2, 4, [(0, 1, 1)])
    twin = net.copy()
    twin.allocate([0], CU(0, 0))
    assert net.edge(0).available == SpectrumSet.full(4)
