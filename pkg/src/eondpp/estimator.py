"""Estimator-style front end.

``fit`` reads the network's shortest-path metrics and derives the modulation
reach; ``predict`` routes demand rows ``(src, dst, units)`` on the network's
current spectrum state.  Parameters follow the scikit-learn conventions, so
``get_params``/``set_params``/``clone`` work as usual.
"""
from __future__ import annotations

from typing import List, Optional

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils import check_array
from sklearn.utils.validation import check_is_fitted

from .baselines import brute_force_pair, edge_exclusion_pair, generic_dijkstra_single
from .costmodel import Demand, ModulationModel, RMSACostModel, resolve_r1
from .dppcore import ProtectedPair, SearchStats, dpp_search
from .graph import DisconnectedError, Network, NetworkError, is_connected, shortest_path_metrics


def check_network(net, require_connected: bool = True) -> Network:
    if not isinstance(net, Network):
        raise TypeError(f"expected a Network, got {type(net).__name__}")
    if net.n_vertices < 2:
        raise NetworkError("network needs at least 2 vertices")
    if require_connected and not is_connected(net):
        raise DisconnectedError("network is disconnected")
    return net


def check_demands(X, n_vertices: int) -> np.ndarray:
    """Coerce demands to an ``(n, 3)`` int array of ``src, dst, units``."""
    if isinstance(X, Demand):
        X = [X]
    if len(X) and isinstance(X[0], Demand):
        X = [(d.src, d.dst, d.units_g) for d in X]
    arr = check_array(X, dtype=None, ensure_2d=True, ensure_min_samples=0)
    if arr.shape[1] != 3:
        raise ValueError(f"demands need 3 columns (src, dst, units), got {arr.shape[1]}")
    if not np.all(np.mod(arr, 1) == 0):
        raise ValueError("demand entries must be integers")
    arr = arr.astype(np.int64)
    if arr.size:
        if arr[:, :2].min() < 0 or arr[:, :2].max() >= n_vertices:
            raise ValueError("demand end node out of range")
        if np.any(arr[:, 0] == arr[:, 1]):
            raise ValueError("demand end nodes must differ")
        if arr[:, 2].min() < 1:
            raise ValueError("a demand requests at least one unit")
    return arr


class ProtectedPathRouter(BaseEstimator):
    """Route demands with dedicated path protection on a fitted network.

    Parameters
    ----------
    algorithm : {"exact", "edge-exclusion", "brute-force"}
    modulation_levels : int
        Number of modulation formats.
    r1_km : float or None
        Reach of the least efficient modulation; ``None`` derives it as
        ``reach_factor`` times the longest shortest path.
    reach_factor : float
    brute_force_max_pops : int
        Pop budget for the brute-force enumerator.
    """

    _ALGOS = ("exact", "edge-exclusion", "brute-force")

    def __init__(self, algorithm: str = "exact", modulation_levels: int = 4,
                 r1_km: Optional[float] = None, reach_factor: float = 1.5,
                 brute_force_max_pops: int = 2_000_000):
        self.algorithm = algorithm
        self.modulation_levels = modulation_levels
        self.r1_km = r1_km
        self.reach_factor = reach_factor
        self.brute_force_max_pops = brute_force_max_pops

    def fit(self, X: Network, y=None):
        if self.algorithm not in self._ALGOS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        net = check_network(X)
        self.alpha_, self.diameter_km_ = shortest_path_metrics(net)
        self.modulation_ = ModulationModel(
            self.modulation_levels, resolve_r1(self.r1_km, self.diameter_km_, self.reach_factor))
        self.network_ = net
        self.n_vertices_in_ = net.n_vertices
        return self

    def cost_model(self, units: int) -> RMSACostModel:
        check_is_fitted(self, "modulation_")
        return RMSACostModel(units, self.modulation_)

    def route(self, src: int, dst: int, units: int,
              stats: Optional[SearchStats] = None) -> Optional[ProtectedPair]:
        model = self.cost_model(units)
        net = self.network_
        if self.algorithm == "exact":
            return dpp_search(net, src, dst, model, stats=stats)
        if self.algorithm == "edge-exclusion":
            return edge_exclusion_pair(net, src, dst, model, stats=stats)
        return brute_force_pair(net, src, dst, model, max_pops=self.brute_force_max_pops, stats=stats)

    def route_single(self, src: int, dst: int, units: int):
        return generic_dijkstra_single(self.network_, src, dst, self.cost_model(units))

    def predict(self, X) -> List[Optional[ProtectedPair]]:
        check_is_fitted(self, "modulation_")
        rows = check_demands(X, self.n_vertices_in_)
        return [self.route(int(s), int(t), int(g)) for s, t, g in rows]

    def predict_cost(self, X) -> np.ndarray:
        """Pair cost per demand, ``inf`` where no pair exists."""
        return np.array([np.inf if r is None else r.cost for r in self.predict(X)], dtype=float)

    def score(self, X, y=None) -> float:
        """Share of requested units that could be routed on the current state."""
        rows = check_demands(X, self.n_vertices_in_) if len(X) else np.zeros((0, 3), int)
        if not len(rows):
            return 1.0
        ok = self.predict_cost(rows) < np.inf
        return float(rows[ok, 2].sum() / rows[:, 2].sum())
