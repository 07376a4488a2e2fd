"""Event-driven simulation of dynamic protected-connection traffic.

Demands arrive as a Poisson process calibrated from the offered load, hold
for exponential times, and are routed on the current spectrum state.  Metrics
cover the post-warm-up window only; connections set up during warm-up still
occupy spectrum.
"""
from __future__ import annotations

import heapq
import logging
import math
import time
from dataclasses import asdict, dataclass, field
from typing import Callable, Dict, List, Optional

import numpy as np

from .baselines import brute_force_pair, edge_exclusion_pair
from .costmodel import Demand, ModulationModel, RMSACostModel, resolve_r1
from .dppcore import ProtectedPair, SearchStats, dpp_search
from .graph import DisconnectedError, Network, gabriel_generate, is_connected, shortest_path_metrics
from .spectrum import CU

log = logging.getLogger(__name__)

ALGORITHMS: Dict[str, Callable] = {
    "exact": dpp_search,
    "edge-exclusion": edge_exclusion_pair,
    "brute-force": brute_force_pair,
}

CSV_COLUMNS = [
    "seed", "n_vertices", "n_edges", "omega", "gamma", "load", "algorithm",
    "mean_utilization", "bbp", "searches", "time_mean_s", "time_max_s",
    "words_mean", "words_max",
]


def arrival_rate(a: float, n_edges: int, omega: int, tau: float, gamma: float, alpha: float) -> float:
    """Demands per day that would offer load ``a`` if every demand were carried."""
    return a * n_edges * omega / (2 * tau * gamma * alpha)


def draw_demand(rng: np.random.Generator, net, gamma: float,
                size_rng: Optional[np.random.Generator] = None) -> Demand:
    """Distinct uniform end nodes and ``Poisson(gamma - 1) + 1`` units.

    ``net`` is a :class:`Network` or a vertex count.
    """
    n_vertices = net if isinstance(net, (int, np.integer)) else net.n_vertices
    if gamma < 1:
        raise ValueError("gamma must be >= 1")
    size_rng = rng if size_rng is None else size_rng
    s, t = rng.choice(n_vertices, size=2, replace=False)
    g = int(size_rng.poisson(gamma - 1)) + 1
    return Demand(int(s), int(t), g)


def gamma_from_pct(pct: float, omega: int) -> int:
    return max(1, int(round(pct / 100.0 * omega)))


@dataclass
class SimConfig:
    omega: int = 160
    gamma: float = 10.0
    load: float = 1.0
    tau_days: float = 10.0
    horizon_days: float = 150.0
    warmup_days: float = 50.0
    seed: int = 0
    algorithm: str = "exact"
    n_vertices: int = 25
    density_km2: float = 10_000.0
    graph_seed: Optional[int] = None
    network: Optional[Network] = field(default=None, repr=False)
    gamma_pct: Optional[float] = None
    modulation_levels: int = 4
    r1_km: Optional[float] = None
    #: wall-clock search times are recorded only on request, so runs stay reproducible
    timing: bool = False

    def validate(self) -> None:
        if not 0 <= self.warmup_days < self.horizon_days:
            raise ValueError("need 0 <= warmup_days < horizon_days")
        if self.load < 0:
            raise ValueError("offered load must be non-negative")
        if self.tau_days <= 0:
            raise ValueError("tau must be positive")
        if self.effective_gamma() < 1:
            raise ValueError("gamma must be >= 1")
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}")

    def effective_gamma(self) -> float:
        if self.gamma_pct is not None:
            return gamma_from_pct(self.gamma_pct, self.omega)
        return self.gamma

    def build_network(self) -> Network:
        if self.network is not None:
            net = self.network.copy()
            if net.omega != self.omega:
                raise ValueError(f"network omega {net.omega} != config omega {self.omega}")
            return net
        seed = self.seed if self.graph_seed is None else self.graph_seed
        return gabriel_generate(self.n_vertices, self.density_km2, seed, self.omega)


@dataclass
class RunStats:
    seed: int
    n_vertices: int
    n_edges: int
    omega: int
    gamma: float
    load: float
    algorithm: str
    mean_utilization: float = 0.0
    bbp: float = 0.0
    demand_blocking: float = 0.0
    arrivals: int = 0
    accepted: int = 0
    blocked: int = 0
    searches: int = 0
    time_mean_s: float = 0.0
    time_max_s: float = 0.0
    words_mean: float = 0.0
    words_max: int = 0
    alpha: float = 0.0
    arrival_rate: float = 0.0

    def as_row(self, timing: bool = True) -> dict:
        row = {k: v for k, v in asdict(self).items() if k in CSV_COLUMNS}
        if not timing:
            row["time_mean_s"] = row["time_max_s"] = ""
        return {k: row[k] for k in CSV_COLUMNS}


@dataclass
class Connection:
    demand: Demand
    working: tuple
    protecting: tuple
    cu_working: CU
    cu_protecting: CU
    teardown_time: float


_TEARDOWN, _ARRIVAL = 0, 1


class Simulator:
    """One run.  ``on_event(kind, time, sim)`` is called after every event."""

    def __init__(self, config: SimConfig, on_event: Optional[Callable] = None):
        config.validate()
        self.config = config
        self.net = config.build_network()
        if not is_connected(self.net):
            raise DisconnectedError("simulated network must be connected")
        self.alpha, diameter = shortest_path_metrics(self.net)
        self.modulation = ModulationModel(config.modulation_levels,
                                          resolve_r1(config.r1_km, diameter))
        self.gamma = config.effective_gamma()
        self.rate = arrival_rate(config.load, self.net.n_edges, self.net.omega,
                                 config.tau_days, self.gamma, self.alpha)
        streams = np.random.SeedSequence(config.seed).spawn(4)
        self.rng_arrival, self.rng_ends, self.rng_size, self.rng_hold = (
            np.random.default_rng(s) for s in streams)
        self.search = ALGORITHMS[config.algorithm]
        self.active: Dict[int, Connection] = {}
        self.on_event = on_event
        self._events: list = []
        self._seq = 0
        self._used = 0
        self.now = 0.0

    def _schedule(self, when, kind, payload=None):
        self._seq += 1
        heapq.heappush(self._events, (when, kind, self._seq, payload))

    def _setup(self, key: int, demand: Demand, pair: ProtectedPair, until: float) -> None:
        self.net.allocate(pair.working, pair.cu_working)
        try:
            self.net.allocate(pair.protecting, pair.cu_protecting)
        except Exception:
            self.net.release(pair.working, pair.cu_working)
            raise
        self._used += len(pair.working) * pair.cu_working.size
        self._used += len(pair.protecting) * pair.cu_protecting.size
        self.active[key] = Connection(demand, pair.working, pair.protecting,
                                      pair.cu_working, pair.cu_protecting, until)
        self._schedule(until, _TEARDOWN, key)

    def _teardown(self, key: int) -> None:
        c = self.active.pop(key)
        self.net.release(c.working, c.cu_working)
        self.net.release(c.protecting, c.cu_protecting)
        self._used -= len(c.working) * c.cu_working.size
        self._used -= len(c.protecting) * c.cu_protecting.size

    def run(self) -> RunStats:
        cfg = self.config
        net = self.net
        total_units = net.omega * net.n_edges
        out = RunStats(cfg.seed, net.n_vertices, net.n_edges, net.omega, self.gamma,
                       cfg.load, cfg.algorithm, alpha=self.alpha, arrival_rate=self.rate)
        util_area = 0.0
        req_units = blocked_units = 0
        times: List[float] = []
        words: List[int] = []
        horizon, warmup = cfg.horizon_days, cfg.warmup_days
        if self.rate > 0:
            self._schedule(float(self.rng_arrival.exponential(1.0 / self.rate)), _ARRIVAL)
        key = 0
        while self._events and self._events[0][0] < horizon:
            when, kind, _, payload = heapq.heappop(self._events)
            lo, hi = max(self.now, warmup), min(when, horizon)
            if hi > lo and total_units:
                util_area += (hi - lo) * self._used / total_units
            self.now = when
            if kind == _TEARDOWN:
                self._teardown(payload)
            else:
                demand = draw_demand(self.rng_ends, net, self.gamma, self.rng_size)
                hold = float(self.rng_hold.exponential(cfg.tau_days))
                self._schedule(when + float(self.rng_arrival.exponential(1.0 / self.rate)), _ARRIVAL)
                model = RMSACostModel(demand.units_g, self.modulation)
                st = SearchStats()
                started = time.perf_counter() if cfg.timing else 0.0
                pair = self.search(net, demand.src, demand.dst, model, stats=st)
                elapsed = time.perf_counter() - started if cfg.timing else 0.0
                key += 1
                if pair is not None:
                    self._setup(key, demand, pair, when + hold)
                if when >= warmup:
                    out.arrivals += 1
                    req_units += demand.units_g
                    times.append(elapsed)
                    words.append(st.words_peak)
                    if pair is None:
                        out.blocked += 1
                        blocked_units += demand.units_g
                    else:
                        out.accepted += 1
            if self.on_event is not None:
                self.on_event(kind, when, self)
        lo = max(self.now, warmup)
        if horizon > lo and total_units:
            util_area += (horizon - lo) * self._used / total_units
        out.mean_utilization = util_area / (horizon - warmup)
        out.searches = len(times)
        if out.arrivals:
            out.bbp = blocked_units / req_units
            out.demand_blocking = out.blocked / out.arrivals
            out.time_mean_s = sum(times) / len(times)
            out.time_max_s = max(times)
            out.words_mean = sum(words) / len(words)
            out.words_max = max(words)
        return out

    def drain(self) -> None:
        """Tear down every connection still active, ignoring metrics."""
        while self._events:
            when, kind, _, payload = heapq.heappop(self._events)
            if kind == _TEARDOWN:
                self.now = when
                self._teardown(payload)


def run(config: SimConfig) -> RunStats:
    return Simulator(config).run()


def mean_and_rse(values) -> tuple:
    """Sample mean and relative standard error (``nan`` when undefined)."""
    vals = np.asarray(list(values), dtype=float)
    if vals.size == 0:
        return math.nan, math.nan
    mean = float(vals.mean())
    if vals.size < 2 or mean == 0:
        return mean, math.nan
    return mean, float(vals.std(ddof=1) / math.sqrt(vals.size) / abs(mean))
