"""Dedicated path protection routing and simulation for elastic optical networks."""
from .baselines import BudgetExceeded, brute_force_pair, edge_exclusion_pair, generic_dijkstra_single
from .costmodel import Demand, ModulationModel, RMSACostModel
from .dppcore import ProtectedPair, SearchStats, dpp_search
from .estimator import ProtectedPathRouter
from .graph import Network, gabriel_generate, shortest_path_metrics
from .sim import SimConfig, RunStats, run
from .spectrum import CU, SpectrumSet

__all__ = [
    "BudgetExceeded", "CU", "Demand", "ModulationModel", "Network", "ProtectedPair",
    "ProtectedPathRouter", "RMSACostModel", "RunStats", "SearchStats", "SimConfig",
    "SpectrumSet", "brute_force_pair", "dpp_search", "edge_exclusion_pair",
    "gabriel_generate", "generic_dijkstra_single", "run", "shortest_path_metrics",
]
__version__ = "0.1.0"
