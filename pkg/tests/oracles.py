"""Independent reference computations used by the tests.

Nothing here calls into the search code; each oracle recomputes its answer
by brute force from the raw inputs.
"""
import heapq
import itertools
import math

import numpy as np


def units_mask(runs, omega):
    """Per-unit membership array of a run list."""
    m = np.zeros(omega, dtype=bool)
    for lo, hi in runs:
        m[lo:hi + 1] = True
    return m


def runs_of_mask(mask):
    runs = []
    for k, grp in itertools.groupby(enumerate(mask), key=lambda p: bool(p[1])):
        if k:
            idx = [i for i, _ in grp]
            runs.append((idx[0], idx[-1]))
    return runs


def gabriel_ok(points, u, v):
    """True iff no third point lies strictly inside the circle with diameter uv."""
    (ux, uy), (vx, vy) = points[u], points[v]
    cx, cy = (ux + vx) / 2, (uy + vy) / 2
    r2 = ((ux - vx) ** 2 + (uy - vy) ** 2) / 4
    for w, (wx, wy) in enumerate(points):
        if w in (u, v):
            continue
        if (wx - cx) ** 2 + (wy - cy) ** 2 < r2 * (1 - 1e-12):
            return False
    return True


def gabriel_edge_set(points):
    n = len(points)
    return {(u, v) for u in range(n) for v in range(u + 1, n) if gabriel_ok(points, u, v)}


def floyd_warshall(n, edges):
    """All-pairs (length, hops) using the minimum hop count among shortest paths."""
    inf = math.inf
    d = [[inf] * n for _ in range(n)]
    for i in range(n):
        d[i][i] = 0.0
    for u, v, length in edges:
        if length < d[u][v]:
            d[u][v] = d[v][u] = length
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if d[i][k] + d[k][j] < d[i][j]:
                    d[i][j] = d[i][k] + d[k][j]
    return d


def plain_dijkstra(n, arcs, s):
    dist = [math.inf] * n
    prev = [None] * n
    dist[s] = 0.0
    heap = [(0.0, s)]
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist[u]:
            continue
        for eid, w, length in arcs[u]:
            if d + length < dist[w]:
                dist[w] = d + length
                prev[w] = (u, eid)
                heapq.heappush(heap, (dist[w], w))
    return dist, prev


def spectrum_scan_single(net, s, t, units_fn, cost_fn, excluded=()):
    """Cheapest feasible single path by scanning every CU and filtering edges.

    For each block ``[lo, lo+k-1]`` keep only edges whose free units cover it,
    take the length-shortest path, and accept it when the block is big enough.
    """
    best = None
    n = net.n_vertices
    for k in range(1, net.omega + 1):
        for lo in range(0, net.omega - k + 1):
            hi = lo + k - 1
            arcs = [[] for _ in range(n)]
            for e in net.edges:
                if e.id in excluded:
                    continue
                if any(a <= lo and hi <= b for a, b in e.available.runs):
                    arcs[e.u].append((e.id, e.v, e.length_km))
                    arcs[e.v].append((e.id, e.u, e.length_km))
            dist, _ = plain_dijkstra(n, arcs, s)
            if dist[t] == math.inf:
                continue
            u = units_fn(dist[t])
            if u == math.inf or u > k:
                continue
            c = cost_fn(dist[t])
            if best is None or c < best:
                best = c
    return best
