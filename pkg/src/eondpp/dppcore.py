"""Exact search for a cheapest pair of edge-disjoint, spectrum-feasible paths.

Generic Dijkstra runs over a search graph whose vertices are unordered pairs
``(v1, v2)`` of network vertices, ``v1 <= v2``.  A label at such a vertex is a
pair of path traits; a trait is ``(cost, length, lo, hi)`` where ``[lo, hi]``
is the maximal CU the path preserves.  Labels are partially ordered, so each
search vertex keeps sets of mutually incomparable permanent and tentative
labels.  Tentative nodes discarded by a better label stay in the heap and are
skipped when popped.
"""
from __future__ import annotations

import heapq
import time
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable, Dict, List, NamedTuple, Optional, Tuple

from .costmodel import INFEASIBLE, CostModel
from .graph import Network, NetworkError
from .spectrum import CU

TENTATIVE, PERMANENT, DISCARDED = 0, 1, 2

#: 64-bit words per stored label and per heap element
LABEL_WORDS = 15
QUEUE_WORDS = 2


class PathTrait(NamedTuple):
    cost: float
    length: float
    lo: int
    hi: int

    @property
    def cu(self) -> CU:
        return CU(self.lo, self.hi)


def trait_leq(a, b) -> bool:
    """``a`` is at least as good as ``b``: no dearer and its CU includes ``b``'s."""
    return a[0] <= b[0] and a[2] <= b[2] and b[3] <= a[3]


def label_leq(a, b) -> bool:
    return trait_leq(a[0], b[0]) and trait_leq(a[1], b[1])


class SearchTreeNode:
    """One solution ``(vertex, label, taken edge, parent)``.

    ``ext`` is the label position holding the path that ``edge`` extended and
    ``src`` the position that path had in the parent's label.  ``used`` is a
    bitmask of edge ids taken on the way from the root.
    """

    __slots__ = ("vertex", "p1", "p2", "edge", "ext", "src", "parent", "used", "state")

    def __init__(self, vertex, p1, p2, edge=None, ext=None, src=None, parent=None, used=0):
        self.vertex = vertex
        self.p1 = p1
        self.p2 = p2
        self.edge = edge
        self.ext = ext
        self.src = src
        self.parent = parent
        self.used = used
        self.state = TENTATIVE

    @property
    def label(self):
        return (self.p1, self.p2)

    def __repr__(self) -> str:
        return f"SearchTreeNode({self.vertex}, {self.p1}, {self.p2}, edge={self.edge})"


@dataclass
class SearchStats:
    pops: int = 0
    relaxations: int = 0
    labels: int = 0
    permanent: int = 0
    tentative_peak: int = 0
    labels_peak: int = 0
    queue_peak: int = 0
    vertices_touched: int = 0
    max_labels_per_vertex: int = 0
    time_s: float = 0.0

    @property
    def words_peak(self) -> int:
        return LABEL_WORDS * self.labels_peak + QUEUE_WORDS * self.queue_peak


@dataclass
class ProtectedPair:
    working: Tuple[int, ...]
    protecting: Tuple[int, ...]
    cu_working: CU
    cu_protecting: CU
    cost: float
    working_cost: float
    protecting_cost: float
    working_length_km: float = 0.0
    protecting_length_km: float = 0.0
    maximal_cu_working: Optional[CU] = None
    maximal_cu_protecting: Optional[CU] = None
    stats: Optional[SearchStats] = field(default=None, compare=False, repr=False)

    def to_dict(self) -> dict:
        return {
            "cost": self.cost,
            "working": {"edges": list(self.working), "cu": list(self.cu_working),
                        "cost": self.working_cost, "length_km": self.working_length_km},
            "protecting": {"edges": list(self.protecting), "cu": list(self.cu_protecting),
                           "cost": self.protecting_cost, "length_km": self.protecting_length_km},
        }


def allocate_cu(maximal: CU, units) -> CU:
    """First-fit block of ``units`` inside a maximal CU."""
    if units == INFEASIBLE or units > maximal.hi - maximal.lo + 1:
        raise ValueError(f"{units} units do not fit in {maximal}")
    return CU(maximal.lo, maximal.lo + int(units) - 1)


def make_pair(paths, traits, model: CostModel, stats=None) -> ProtectedPair:
    """Order two (edge ids, trait) paths as working/protecting and allocate their CUs."""
    a = (traits[0][0], paths[0][:1] or (-1,), 0)
    b = (traits[1][0], paths[1][:1] or (-1,), 1)
    w, p = (0, 1) if a <= b else (1, 0)
    tw, tp = traits[w], traits[p]
    mw, mp = CU(tw[2], tw[3]), CU(tp[2], tp[3])
    return ProtectedPair(
        working=tuple(paths[w]),
        protecting=tuple(paths[p]),
        cu_working=allocate_cu(mw, model.units(tw[1])),
        cu_protecting=allocate_cu(mp, model.units(tp[1])),
        cost=model.pair_cost(tw[0], tp[0]),
        working_cost=tw[0],
        protecting_cost=tp[0],
        working_length_km=tw[1],
        protecting_length_km=tp[1],
        maximal_cu_working=mw,
        maximal_cu_protecting=mp,
        stats=stats,
    )


def trace_node(node: SearchTreeNode, model: CostModel, stats=None) -> ProtectedPair:
    paths: List[List[int]] = [[], []]
    pos = [0, 1]  # label position, in the current node, of each final path
    n = node
    while n.parent is not None:
        for f in (0, 1):
            if pos[f] == n.ext:
                paths[f].append(n.edge)
                pos[f] = n.src
            else:
                pos[f] = 1 - n.src
        n = n.parent
    for p in paths:
        p.reverse()
    return make_pair(paths, (node.p1, node.p2), model, stats)


def trace(P: Dict, x_t, x_s, model: CostModel, stats=None) -> ProtectedPair:
    """Rebuild the pair from the permanent node at ``x_t`` back to the root at ``x_s``."""
    if not P.get(x_t):
        raise LookupError(f"no permanent solution at {x_t}")
    node = P[x_t][-1]
    root = node
    while root.parent is not None:
        root = root.parent
    if root.vertex != x_s:
        raise LookupError(f"search tree is not rooted at {x_s}")
    return trace_node(node, model, stats)


def _queue_key(cost, a, b, seq):
    if a[0] <= b[0]:
        return (cost, a[2], b[2], seq)
    return (cost, b[2], a[2], seq)


class DPPSearch:
    """One search; holds the label sets, heap and instrumentation.

    ``observer``, when given, is called as ``observer(node, self)`` right
    after each node is made permanent.
    """

    def __init__(self, net: Network, model: CostModel,
                 observer: Optional[Callable[[SearchTreeNode, "DPPSearch"], None]] = None):
        self.net = net
        self.model = model
        self.observer = observer
        self.P: Dict[Tuple[int, int], List[SearchTreeNode]] = defaultdict(list)
        self.T: Dict[Tuple[int, int], List[SearchTreeNode]] = defaultdict(list)
        self.Q: list = []
        self.stats = SearchStats()
        self._seq = 0
        self._live = 0
        self._ntent = 0

    def _push(self, cost, node):
        self._seq += 1
        heapq.heappush(self.Q, (*_queue_key(cost, node.p1, node.p2, self._seq), node))
        st = self.stats
        if len(self.Q) > st.queue_peak:
            st.queue_peak = len(self.Q)

    def run(self, s: int, t: int) -> Optional[ProtectedPair]:
        net = self.net
        s, t = net.check_vertex(s), net.check_vertex(t)
        if s == t:
            raise NetworkError("source and target must differ")
        started = time.perf_counter()
        model = self.model
        st = self.stats
        P, T = self.P, self.T
        edges = {e.id: e for e in net.edges}
        adj = net.adjacency()
        x_s, x_t = (s, s), (t, t)
        root_trait = PathTrait(0.0, 0.0, 0, net.omega - 1)
        root = SearchTreeNode(x_s, root_trait, root_trait)
        T[x_s].append(root)
        touched = {x_s}
        self._live = self._ntent = 1
        st.labels = st.labels_peak = st.tentative_peak = st.max_labels_per_vertex = 1
        self._push(0.0, root)
        found = None

        path_cost = model.path_cost
        decide = model.decide
        leq = trait_leq

        def relax(eid, w, length, v1, p1, p2, src, n_x):
            # extend the path of trait p2 by edge eid towards w; v1/p1 stay put
            st.relaxations += 1
            if (n_x.used >> eid) & 1:
                return
            new_len = p2[1] + length
            c = path_cost(new_len)
            if c == INFEASIBLE:
                return
            lo2, hi2 = p2[2], p2[3]
            for lo, hi in edges[eid].available.runs:
                if hi < lo2:
                    continue
                if lo > hi2:
                    break
                lo_c = lo if lo > lo2 else lo2
                hi_c = hi if hi < hi2 else hi2
                if not decide(hi_c - lo_c + 1, new_len):
                    continue
                pn = PathTrait(c, new_len, lo_c, hi_c)
                if w < v1 or (w == v1 and not leq(p1, pn)):
                    x = (w, v1) if w < v1 else (w, w)
                    la, lb, ext = pn, p1, 0
                else:
                    x = (v1, w)
                    la, lb, ext = p1, pn, 1
                dominated = False
                px = P.get(x, ())
                for n in px:
                    if leq(n.p1, la) and leq(n.p2, lb):
                        dominated = True
                        break
                if dominated:
                    continue
                tx = T[x]
                for n in tx:
                    if leq(n.p1, la) and leq(n.p2, lb):
                        dominated = True
                        break
                if dominated:
                    continue
                if tx:
                    keep = []
                    for n in tx:
                        if leq(la, n.p1) and leq(lb, n.p2):
                            n.state = DISCARDED
                            self._live -= 1
                            self._ntent -= 1
                        else:
                            keep.append(n)
                    if len(keep) != len(tx):
                        tx[:] = keep
                node = SearchTreeNode(x, la, lb, eid, ext, src, n_x, n_x.used | (1 << eid))
                tx.append(node)
                touched.add(x)
                st.labels += 1
                self._live += 1
                self._ntent += 1
                if self._live > st.labels_peak:
                    st.labels_peak = self._live
                if self._ntent > st.tentative_peak:
                    st.tentative_peak = self._ntent
                k = len(tx) + len(px)
                if k > st.max_labels_per_vertex:
                    st.max_labels_per_vertex = k
                self._push(model.pair_cost(la[0], lb[0]), node)

        while self.Q:
            n_x = heapq.heappop(self.Q)[-1]
            if n_x.state != TENTATIVE:
                continue
            st.pops += 1
            x = n_x.vertex
            T[x].remove(n_x)
            P[x].append(n_x)
            n_x.state = PERMANENT
            self._ntent -= 1
            st.permanent += 1
            if self.observer is not None:
                self.observer(n_x, self)
            if x == x_t:
                found = n_x
                break
            v1, v2 = x
            p1, p2 = n_x.p1, n_x.p2
            for eid, w, length in adj[v1]:
                relax(eid, w, length, v2, p2, p1, 0, n_x)
            for eid, w, length in adj[v2]:
                relax(eid, w, length, v1, p1, p2, 1, n_x)

        st.vertices_touched = len(touched)
        st.time_s = time.perf_counter() - started
        if found is None:
            return None
        return trace_node(found, model, st)


def dpp_search(net: Network, s: int, t: int, model: CostModel,
               stats: Optional[SearchStats] = None, observer=None) -> Optional[ProtectedPair]:
    """Cheapest edge-disjoint pair of feasible paths from ``s`` to ``t``, or ``None``.

    If ``stats`` is given, it is updated in place with the search counters.
    """
    search = DPPSearch(net, model, observer)
    result = search.run(s, t)
    if stats is not None:
        stats.__dict__.update(search.stats.__dict__)
    return result
