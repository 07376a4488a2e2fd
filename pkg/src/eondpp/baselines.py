"""Comparison algorithms: single-path generic Dijkstra, the edge-exclusion
heuristic built on it, and an exhaustive path-pair enumerator used as the
correctness oracle for :func:`eondpp.dppcore.dpp_search`.
"""
from __future__ import annotations

import heapq
import time
from dataclasses import dataclass
from typing import FrozenSet, Iterable, Optional, Tuple

from .costmodel import INFEASIBLE, CostModel
from .dppcore import ProtectedPair, SearchStats, PathTrait, make_pair, trait_leq
from .graph import Network, NetworkError
from .spectrum import CU, SpectrumSet, intersect

TENTATIVE, PERMANENT, DISCARDED = 0, 1, 2


class BudgetExceeded(RuntimeError):
    """The brute-force enumerator hit its pop or time cap before finishing."""


@dataclass
class SinglePathResult:
    edges: Tuple[int, ...]
    maximal_cu: CU
    cost: float
    length_km: float

    @property
    def trait(self) -> PathTrait:
        return PathTrait(self.cost, self.length_km, self.maximal_cu.lo, self.maximal_cu.hi)


class _Node:
    __slots__ = ("v", "trait", "edge", "parent", "state")

    def __init__(self, v, trait, edge, parent):
        self.v = v
        self.trait = trait
        self.edge = edge
        self.parent = parent
        self.state = TENTATIVE


def generic_dijkstra_single(net: Network, s: int, t: int, model: CostModel,
                            excluded: Iterable[int] = (),
                            stats: Optional[SearchStats] = None) -> Optional[SinglePathResult]:
    """Cheapest feasible single path, keeping incomparable traits per vertex."""
    s, t = net.check_vertex(s), net.check_vertex(t)
    if s == t:
        raise NetworkError("source and target must differ")
    st = stats if stats is not None else SearchStats()
    excluded = frozenset(excluded)
    edges = {e.id: e for e in net.edges}
    adj = net.adjacency()
    P = [[] for _ in range(net.n_vertices)]
    T = [[] for _ in range(net.n_vertices)]
    root = _Node(s, PathTrait(0.0, 0.0, 0, net.omega - 1), None, None)
    T[s].append(root)
    seq = 0
    heap = [(0.0, 0, seq, root)]
    live = 1
    found = None
    while heap:
        node = heapq.heappop(heap)[-1]
        if node.state != TENTATIVE:
            continue
        st.pops += 1
        v = node.v
        T[v].remove(node)
        P[v].append(node)
        node.state = PERMANENT
        if v == t:
            found = node
            break
        tr = node.trait
        for eid, w, length in adj[v]:
            if eid in excluded:
                continue
            st.relaxations += 1
            new_len = tr.length + length
            c = model.path_cost(new_len)
            if c == INFEASIBLE:
                continue
            for lo, hi in edges[eid].available.clip(CU(tr.lo, tr.hi)):
                if not model.decide(hi - lo + 1, new_len):
                    continue
                cand = PathTrait(c, new_len, lo, hi)
                if any(trait_leq(n.trait, cand) for n in P[w]):
                    continue
                if any(trait_leq(n.trait, cand) for n in T[w]):
                    continue
                keep = []
                for n in T[w]:
                    if trait_leq(cand, n.trait):
                        n.state = DISCARDED
                        live -= 1
                    else:
                        keep.append(n)
                T[w] = keep
                nn = _Node(w, cand, eid, node)
                T[w].append(nn)
                live += 1
                st.labels += 1
                st.labels_peak = max(st.labels_peak, live)
                seq += 1
                heapq.heappush(heap, (c, lo, seq, nn))
                st.queue_peak = max(st.queue_peak, len(heap))
    if found is None:
        return None
    path = []
    n = found
    while n.parent is not None:
        path.append(n.edge)
        n = n.parent
    path.reverse()
    tr = found.trait
    return SinglePathResult(tuple(path), CU(tr.lo, tr.hi), tr.cost, tr.length)


def edge_exclusion_pair(net: Network, s: int, t: int, model: CostModel,
                        stats: Optional[SearchStats] = None) -> Optional[ProtectedPair]:
    """Route once, drop the edges used, route again."""
    st = stats if stats is not None else SearchStats()
    started = time.perf_counter()
    first = generic_dijkstra_single(net, s, t, model, stats=st)
    second = None
    if first is not None:
        second = generic_dijkstra_single(net, s, t, model, excluded=first.edges, stats=st)
    st.time_s = time.perf_counter() - started
    if second is None:
        return None
    return make_pair((first.edges, second.edges), (first.trait, second.trait), model, st)


def _feasible_run(avail: SpectrumSet, units) -> Optional[CU]:
    if units == INFEASIBLE:
        return None
    for lo, hi in avail.runs:
        if hi - lo + 1 >= units:
            return CU(lo, hi)
    return None


def brute_force_pair(net: Network, s: int, t: int, model: CostModel,
                     max_pops: int = 2_000_000, max_seconds: Optional[float] = None,
                     stats: Optional[SearchStats] = None) -> Optional[ProtectedPair]:
    """Exhaustive increasing-cost enumeration of loop-free edge-disjoint path pairs.

    Each partial path carries the full set of units free on all its edges, so
    feasibility is checked against the exact spectrum rather than maximal CUs.
    The first path is grown to ``t`` before the second one starts; every pair
    therefore has a single derivation, and the heap pops pairs in
    non-decreasing cost.  Raises :class:`BudgetExceeded` when a cap is hit.
    """
    s, t = net.check_vertex(s), net.check_vertex(t)
    if s == t:
        raise NetworkError("source and target must differ")
    st = stats if stats is not None else SearchStats()
    started = time.perf_counter()
    adj = net.adjacency()
    avail = {e.id: e.available for e in net.edges}
    full = SpectrumSet.full(net.omega)
    # path: (vertices, edge ids, length, cost, free units)
    empty = ((s,), (), 0.0, 0.0, full)
    seq = 0
    heap = [(0.0, seq, empty, None)]
    while heap:
        st.pops += 1
        if st.pops > max_pops or (
                max_seconds is not None and time.perf_counter() - started > max_seconds):
            st.time_s = time.perf_counter() - started
            raise BudgetExceeded(f"brute force stopped after {st.pops - 1} pops")
        _, _, a, b = heapq.heappop(heap)
        growing_first = b is None
        cur = a if growing_first else b
        verts = cur[0]
        if not growing_first and verts[-1] == t:
            st.time_s = time.perf_counter() - started
            traits = []
            for p in (a, b):
                run = _feasible_run(p[4], model.units(p[2]))
                traits.append(PathTrait(p[3], p[2], run.lo, run.hi))
            return make_pair((a[1], b[1]), traits, model, st)
        if growing_first and verts[-1] == t:
            nxt = (a, ((s,), (), 0.0, 0.0, full))
            seq += 1
            heapq.heappush(heap, (model.pair_cost(a[3], 0.0), seq) + nxt)
            continue
        taken: FrozenSet[int] = frozenset(cur[1]) if growing_first else frozenset(cur[1] + a[1])
        for eid, w, length in adj[verts[-1]]:
            if eid in taken or w in verts:
                continue
            new_len = cur[2] + length
            c = model.path_cost(new_len)
            if c == INFEASIBLE:
                continue
            free = intersect(cur[4], avail[eid])
            if _feasible_run(free, model.units(new_len)) is None:
                continue
            ext = (verts + (w,), cur[1] + (eid,), new_len, c, free)
            st.relaxations += 1
            seq += 1
            if growing_first:
                heapq.heappush(heap, (c, seq, ext, None))
            else:
                heapq.heappush(heap, (model.pair_cost(a[3], c), seq, a, ext))
            st.queue_peak = max(st.queue_peak, len(heap))
    st.time_s = time.perf_counter() - started
    return None
