"""Network model, Gabriel-graph generation and shortest-path metrics.

The topology is undirected but exposed as directed arcs: every edge record
yields one arc leaving each of its endpoints, and both arcs share the edge's
available-unit set.  Edge identity (the id) is what disjointness is about.
"""
from __future__ import annotations

import heapq
import json
import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .spectrum import CU, SpectrumSet, add, subtract

PRECISION = 6


class NetworkError(ValueError):
    pass


class DisconnectedError(NetworkError):
    pass


@dataclass
class EdgeRecord:
    id: int
    u: int
    v: int
    length_km: float
    available: SpectrumSet

    def other(self, w: int) -> int:
        return self.v if w == self.u else self.u


@dataclass
class Network:
    n_vertices: int
    omega: int
    edges: List[EdgeRecord] = field(default_factory=list)
    coordinates: Optional[List[Tuple[float, float]]] = None

    def __post_init__(self):
        if self.n_vertices < 0:
            raise NetworkError("vertex count must be non-negative")
        if self.omega < 1:
            raise NetworkError("omega must be at least 1")
        self._index: Dict[int, EdgeRecord] = {}
        self._adj: Optional[List[List[Tuple[int, int, float]]]] = None
        for e in self.edges:
            self._check_edge(e)
            self._index[e.id] = e

    def _check_edge(self, e: EdgeRecord) -> None:
        if e.id in self._index:
            raise NetworkError(f"duplicate edge id {e.id}")
        for w in (e.u, e.v):
            if not 0 <= w < self.n_vertices:
                raise NetworkError(f"edge {e.id}: vertex {w} out of range")
        if e.u == e.v:
            raise NetworkError(f"edge {e.id}: self-loop at vertex {e.u}")
        if not e.length_km > 0:
            raise NetworkError(f"edge {e.id}: length must be positive")
        runs = e.available.runs
        if runs and runs[-1].hi >= self.omega:
            raise NetworkError(f"edge {e.id}: available units exceed omega={self.omega}")

    def add_edge(self, u: int, v: int, length_km: float,
                 available: Optional[SpectrumSet] = None,
                 edge_id: Optional[int] = None) -> EdgeRecord:
        if edge_id is None:
            edge_id = max(self._index, default=-1) + 1
        if available is None:
            available = SpectrumSet.full(self.omega)
        e = EdgeRecord(edge_id, u, v, float(length_km), available)
        self._check_edge(e)
        self.edges.append(e)
        self._index[edge_id] = e
        self._adj = None
        return e

    def edge(self, edge_id: int) -> EdgeRecord:
        return self._index[edge_id]

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def adjacency(self) -> List[List[Tuple[int, int, float]]]:
        """Per-vertex ``(edge id, target, length)`` arcs, ascending edge id."""
        if self._adj is None:
            adj: List[List[Tuple[int, int, float]]] = [[] for _ in range(self.n_vertices)]
            for e in sorted(self.edges, key=lambda r: r.id):
                adj[e.u].append((e.id, e.v, e.length_km))
                adj[e.v].append((e.id, e.u, e.length_km))
            self._adj = adj
        return self._adj

    def out_arcs(self, v: int) -> List[Tuple[int, int, float]]:
        if not 0 <= v < self.n_vertices:
            raise NetworkError(f"invalid vertex {v}")
        return list(self.adjacency()[v])

    def check_vertex(self, v: int) -> int:
        if not isinstance(v, (int, np.integer)) or not 0 <= v < self.n_vertices:
            raise NetworkError(f"invalid vertex {v!r}")
        return int(v)

    # spectrum ledger

    def allocate(self, edge_ids: Iterable[int], cu: CU) -> None:
        done = []
        try:
            for eid in edge_ids:
                e = self._index[eid]
                e.available = subtract(e.available, cu)
                done.append(e)
        except Exception:
            for e in done:
                e.available = add(e.available, cu)
            raise

    def release(self, edge_ids: Iterable[int], cu: CU) -> None:
        for eid in edge_ids:
            e = self._index[eid]
            e.available = add(e.available, cu)

    def used_units(self) -> int:
        return sum(self.omega - len(e.available) for e in self.edges)

    def utilization(self) -> float:
        total = self.omega * len(self.edges)
        return self.used_units() / total if total else 0.0

    def reset_spectrum(self) -> None:
        for e in self.edges:
            e.available = SpectrumSet.full(self.omega)

    def copy(self) -> "Network":
        return Network(
            self.n_vertices,
            self.omega,
            [EdgeRecord(e.id, e.u, e.v, e.length_km, e.available) for e in self.edges],
            list(self.coordinates) if self.coordinates is not None else None,
        )

    def path_length(self, edge_ids: Sequence[int]) -> float:
        return sum(self._index[eid].length_km for eid in edge_ids)

    def path_vertices(self, s: int, edge_ids: Sequence[int]) -> List[int]:
        verts = [s]
        for eid in edge_ids:
            e = self._index[eid]
            if verts[-1] not in (e.u, e.v):
                raise NetworkError(f"edge {eid} does not continue the path at {verts[-1]}")
            verts.append(e.other(verts[-1]))
        return verts

    def __eq__(self, other) -> bool:
        if not isinstance(other, Network):
            return NotImplemented
        return (self.n_vertices, self.omega, self.edges, self.coordinates) == (
            other.n_vertices, other.omega, other.edges, other.coordinates)

    # serialization

    def to_dict(self) -> dict:
        coords = self.coordinates
        verts = []
        for i in range(self.n_vertices):
            x, y = (coords[i] if coords is not None else (None, None))
            verts.append({
                "id": i,
                "x_km": None if x is None else round(x, PRECISION),
                "y_km": None if y is None else round(y, PRECISION),
            })
        return {
            "omega": self.omega,
            "vertices": verts,
            "edges": [
                {"id": e.id, "u": e.u, "v": e.v,
                 "length_km": round(e.length_km, PRECISION),
                 "available": e.available.to_text()}
                for e in sorted(self.edges, key=lambda r: r.id)
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "Network":
        try:
            omega = int(data["omega"])
            verts = sorted(data["vertices"], key=lambda d: d["id"])
            if [d["id"] for d in verts] != list(range(len(verts))):
                raise NetworkError("vertex ids must be dense 0..n-1")
            coords = None
            if verts and all(d.get("x_km") is not None for d in verts):
                coords = [(float(d["x_km"]), float(d["y_km"])) for d in verts]
            net = cls(len(verts), omega, coordinates=coords)
            for d in data["edges"]:
                net.add_edge(int(d["u"]), int(d["v"]), float(d["length_km"]),
                             SpectrumSet.parse(d.get("available", f"0-{omega - 1}")),
                             edge_id=int(d["id"]))
        except (KeyError, TypeError) as exc:
            raise NetworkError(f"malformed graph document: {exc!r}") from None
        return net

    @classmethod
    def from_json(cls, text: str) -> "Network":
        return cls.from_dict(json.loads(text))

    @classmethod
    def load(cls, path) -> "Network":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(fh.read())

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_json())


def gabriel_edges(points: np.ndarray) -> List[Tuple[int, int]]:
    """Pairs ``(i, j)``, ``i < j``, whose diametral circle holds no other point.

    A point ``w`` lies strictly inside the circle with diameter ``uv`` iff
    ``(u - w) . (v - w) < 0``; points on the circle do not block.
    """
    n = len(points)
    out = []
    for i in range(n):
        du = points[i] - points  # u - w for all w
        for j in range(i + 1, n):
            dv = points[j] - points
            dots = np.einsum("ij,ij->i", du, dv)
            dots[i] = dots[j] = 0.0
            if not (dots < 0).any():
                out.append((i, j))
    return out


def gabriel_generate(n: int, density_km2_per_vertex: float = 10_000.0,
                     rng_seed: int = 0, omega: int = 160) -> Network:
    """Random Gabriel graph of ``n`` uniform points in a square of area ``n * density``."""
    if n < 2:
        raise NetworkError("a Gabriel graph needs at least 2 vertices")
    if density_km2_per_vertex <= 0:
        raise NetworkError("density must be positive")
    side = math.sqrt(n * density_km2_per_vertex)
    rng = np.random.default_rng(rng_seed)
    pts = np.round(rng.uniform(0.0, side, size=(n, 2)), PRECISION)
    if len({tuple(p) for p in pts}) < n:
        raise NetworkError("coincident points generated; use another seed")
    net = Network(n, omega, coordinates=[(float(x), float(y)) for x, y in pts])
    for i, j in gabriel_edges(pts):
        length = round(float(math.hypot(*(pts[i] - pts[j]))), PRECISION)
        net.add_edge(i, j, length)
    return net


def _dijkstra_lex(adj, src: int, n: int):
    dist = [math.inf] * n
    path: List[Optional[Tuple[int, ...]]] = [None] * n
    dist[src] = 0.0
    path[src] = (src,)
    done = [False] * n
    heap = [(0.0, (src,), src)]
    while heap:
        d, p, u = heapq.heappop(heap)
        if done[u] or p != path[u]:
            continue
        done[u] = True
        for _, w, length in adj[u]:
            if done[w]:
                continue
            nd = d + length
            cand = p + (w,)
            if nd < dist[w] or (nd == dist[w] and cand < path[w]):
                dist[w] = nd
                path[w] = cand
                heapq.heappush(heap, (nd, cand, w))
    return dist, path


def all_pairs_shortest(net: Network):
    """Per-source ``(dist, vertex path)`` lists; ties go to the lexicographically smallest path."""
    adj = net.adjacency()
    return [_dijkstra_lex(adj, s, net.n_vertices) for s in range(net.n_vertices)]


def is_connected(net: Network) -> bool:
    if net.n_vertices == 0:
        return True
    adj = net.adjacency()
    seen = {0}
    stack = [0]
    while stack:
        u = stack.pop()
        for _, w, _ in adj[u]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == net.n_vertices


def shortest_path_metrics(net: Network) -> Tuple[float, float]:
    """Mean hop count and longest length over all-pairs length-shortest paths."""
    if net.n_vertices < 2:
        raise NetworkError("metrics need at least 2 vertices")
    hops = []
    longest = 0.0
    for s, (dist, path) in enumerate(all_pairs_shortest(net)):
        for t in range(s + 1, net.n_vertices):
            if path[t] is None:
                raise DisconnectedError(f"vertices {s} and {t} are disconnected")
            hops.append(len(path[t]) - 1)
            longest = max(longest, dist[t])
    return sum(hops) / len(hops), longest
