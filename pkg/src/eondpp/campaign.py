"""Batch drivers behind the CLI: oracle corroboration and simulation campaigns."""
from __future__ import annotations

import csv
import io
import itertools
import json
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence

import numpy as np

from .baselines import BudgetExceeded, brute_force_pair, edge_exclusion_pair
from .costmodel import ModulationModel, RMSACostModel
from .dppcore import SearchStats, dpp_search
from .graph import Network, gabriel_generate, is_connected, shortest_path_metrics
from .sim import CSV_COLUMNS, SimConfig, mean_and_rse, run
from .spectrum import SpectrumSet

log = logging.getLogger(__name__)

COST_RTOL = 1e-9


def costs_match(a: Optional[float], b: Optional[float]) -> bool:
    if a is None or b is None:
        return a is None and b is None
    return math.isclose(a, b, rel_tol=COST_RTOL, abs_tol=1e-12)


# --- corroboration ---------------------------------------------------------

@dataclass
class Case:
    index: int
    seed: int
    net: Network
    src: int
    dst: int
    units: int
    levels: int
    r1_km: float

    def model(self) -> RMSACostModel:
        return RMSACostModel(self.units, ModulationModel(self.levels, self.r1_km))

    def bundle(self) -> dict:
        return {
            "index": self.index, "seed": self.seed,
            "demand": {"src": self.src, "dst": self.dst, "units": self.units},
            "modulation": {"levels": self.levels, "r1_km": self.r1_km},
            "graph": self.net.to_dict(),
        }


def random_case(seed: int, index: int, n_range=(6, 10), omegas=(4, 8), gammas=(1, 2, 3),
                levels=(1, 2, 4), max_preload: float = 0.4) -> Case:
    """A Gabriel graph with randomly pre-occupied units and one demand.

    Every case is a pure function of ``(seed, index)``.
    """
    rng = np.random.default_rng([seed, index])
    n = int(rng.integers(n_range[0], n_range[1] + 1))
    omega = int(rng.choice(omegas))
    net = gabriel_generate(n, 10_000.0, int(rng.integers(2**31)), omega)
    _, diameter = shortest_path_metrics(net)
    busy = rng.uniform(0.0, max_preload)
    for e in net.edges:
        free = rng.random(omega) >= busy
        e.available = SpectrumSet.from_units(np.flatnonzero(free).tolist())
    s, t = rng.choice(n, size=2, replace=False)
    return Case(index, seed, net, int(s), int(t), int(rng.choice(gammas)),
                int(rng.choice(levels)), 1.5 * diameter)


@dataclass
class CaseResult:
    index: int
    status: str  # match | mismatch | budget
    exact_cost: Optional[float]
    oracle_cost: Optional[float]
    heuristic_cost: Optional[float]
    heuristic_violation: bool
    bound_violation: bool
    vertices_touched: int
    max_labels_per_vertex: int
    n_vertices: int
    omega: int


def check_case(case: Case, search_fn: Callable = dpp_search, oracle_fn: Callable = brute_force_pair,
               max_pops: int = 2_000_000) -> CaseResult:
    model = case.model()
    st = SearchStats()
    exact = search_fn(case.net, case.src, case.dst, model, stats=st)
    heur = edge_exclusion_pair(case.net, case.src, case.dst, model)
    ec = None if exact is None else exact.cost
    hc = None if heur is None else heur.cost
    try:
        ref = oracle_fn(case.net, case.src, case.dst, model, max_pops=max_pops)
        oc = None if ref is None else ref.cost
        status = "match" if costs_match(ec, oc) else "mismatch"
    except BudgetExceeded:
        oc, status = None, "budget"
    n, w = case.net.n_vertices, case.net.omega
    heur_bad = hc is not None and (ec is None or ec > hc * (1 + COST_RTOL))
    bound_bad = (st.vertices_touched > n * (n + 1) // 2
                 or st.max_labels_per_vertex > ((w + 1) * w // 2) ** 2)
    return CaseResult(case.index, status, ec, oc, hc, heur_bad, bound_bad,
                      st.vertices_touched, st.max_labels_per_vertex, n, w)


@dataclass
class CorroborationReport:
    total: int = 0
    matches: int = 0
    mismatches: List[int] = field(default_factory=list)
    budget_exceeded: List[int] = field(default_factory=list)
    heuristic_violations: List[int] = field(default_factory=list)
    bound_violations: List[int] = field(default_factory=list)
    exact_found: int = 0
    heuristic_found: int = 0
    bundles: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.mismatches or self.heuristic_violations or self.bound_violations)

    def to_dict(self) -> dict:
        return {
            "total": self.total, "matches": self.matches,
            "mismatches": self.mismatches, "budget_exceeded": self.budget_exceeded,
            "heuristic_violations": self.heuristic_violations,
            "bound_violations": self.bound_violations,
            "exact_found": self.exact_found, "heuristic_found": self.heuristic_found,
            "bundles": self.bundles,
        }


def _check_indexed(args):
    seed, index, kw, max_pops = args
    return check_case(random_case(seed, index, **kw), max_pops=max_pops)


def corroborate(count: int, seed: int = 0, n_range=(6, 10), omegas=(4, 8), gammas=(1, 2, 3),
                out_dir: Optional[str] = None, search_fn: Callable = dpp_search,
                oracle_fn: Callable = brute_force_pair, max_pops: int = 2_000_000,
                jobs: int = 1, on_result: Optional[Callable[[CaseResult], None]] = None
                ) -> CorroborationReport:
    """Compare ``search_fn`` with the brute-force oracle on ``count`` random cases.

    Every mismatch writes a reproduction bundle (graph with its spectrum state,
    demand, modulation, seed and both answers) to ``out_dir``.
    """
    if count < 1:
        raise ValueError("corroboration needs at least one case")
    kw = dict(n_range=tuple(n_range), omegas=tuple(omegas), gammas=tuple(gammas))
    default_fns = search_fn is dpp_search and oracle_fn is brute_force_pair
    if jobs > 1 and default_fns:
        with ProcessPoolExecutor(jobs) as pool:
            results = pool.map(_check_indexed, [(seed, i, kw, max_pops) for i in range(count)],
                               chunksize=16)
            results = list(results)
    else:
        results = (check_case(random_case(seed, i, **kw), search_fn, oracle_fn, max_pops)
                   for i in range(count))
    report = CorroborationReport()
    for res in results:
        report.total += 1
        report.exact_found += res.exact_cost is not None
        report.heuristic_found += res.heuristic_cost is not None
        if res.status == "match":
            report.matches += 1
        elif res.status == "budget":
            report.budget_exceeded.append(res.index)
        else:
            report.mismatches.append(res.index)
            case = random_case(seed, res.index, **kw)
            bundle = case.bundle()
            bundle.update(exact_cost=res.exact_cost, oracle_cost=res.oracle_cost)
            if out_dir is not None:
                os.makedirs(out_dir, exist_ok=True)
                path = os.path.join(out_dir, f"mismatch_{res.index:06d}.json")
                with open(path, "w", encoding="utf-8") as fh:
                    json.dump(bundle, fh, indent=1, sort_keys=True)
                report.bundles.append(path)
            log.error("mismatch on case %d: exact=%r oracle=%r", res.index,
                      res.exact_cost, res.oracle_cost)
        if res.heuristic_violation:
            report.heuristic_violations.append(res.index)
        if res.bound_violation:
            report.bound_violations.append(res.index)
        if on_result is not None:
            on_result(res)
    return report


# --- simulation campaigns ----------------------------------------------------

@dataclass
class CampaignSpec:
    nodes: Sequence[int] = (25,)
    omegas: Sequence[int] = (160,)
    loads: Sequence[float] = (1.0,)
    gammas: Sequence[float] = ()
    gamma_pcts: Sequence[float] = ()
    algorithms: Sequence[str] = ("exact",)
    samples: int = 1
    seed: int = 0
    tau_days: float = 10.0
    horizon_days: float = 150.0
    warmup_days: float = 50.0
    density_km2: float = 10_000.0
    modulation_levels: int = 4
    timing: bool = False

    def validate(self) -> None:
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if not (self.nodes and self.omegas and self.loads and self.algorithms):
            raise ValueError("campaign grid is empty")
        if not (self.gammas or self.gamma_pcts):
            raise ValueError("campaign needs a gamma or gamma-pct value")

    def gamma_modes(self):
        return [("abs", g) for g in self.gammas] + [("pct", p) for p in self.gamma_pcts]

    def configs(self) -> List[SimConfig]:
        self.validate()
        out = []
        for n, omega, (mode, gv), load in itertools.product(
                self.nodes, self.omegas, self.gamma_modes(), self.loads):
            for k in range(self.samples):
                for algo in self.algorithms:
                    out.append(SimConfig(
                        omega=omega,
                        gamma=gv if mode == "abs" else 1.0,
                        gamma_pct=gv if mode == "pct" else None,
                        load=load, tau_days=self.tau_days,
                        horizon_days=self.horizon_days, warmup_days=self.warmup_days,
                        seed=self.seed + k, algorithm=algo, n_vertices=n,
                        density_km2=self.density_km2, graph_seed=self.seed + k,
                        modulation_levels=self.modulation_levels,
                        timing=self.timing,
                    ))
        return out


def connected_graph_seed(cfg: SimConfig, tries: int = 1000) -> int:
    """First seed from ``cfg.graph_seed`` onwards that yields a connected graph."""
    seed = cfg.graph_seed if cfg.graph_seed is not None else cfg.seed
    for _ in range(tries):
        net = gabriel_generate(cfg.n_vertices, cfg.density_km2, seed, cfg.omega)
        if is_connected(net):
            return seed
        log.warning("graph seed %d gave a disconnected network; trying %d", seed, seed + 1)
        seed += 1
    raise RuntimeError("no connected network found")


def _run_one(cfg: SimConfig):
    try:
        cfg.graph_seed = connected_graph_seed(cfg)
        return run(cfg), None
    except Exception as exc:  # recorded, campaign goes on
        return None, f"{type(exc).__name__}: {exc}"


def run_campaign(spec: CampaignSpec, jobs: int = 1):
    """Run every configuration; returns ``(configs, results, errors)`` in grid order."""
    configs = spec.configs()
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            pairs = list(pool.map(_run_one, configs))
    else:
        pairs = [_run_one(c) for c in configs]
    return configs, [p[0] for p in pairs], [p[1] for p in pairs]


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    return v


def runs_csv(results, timing: bool = False) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in results:
        if r is not None:
            w.writerow({k: _fmt(v) for k, v in r.as_row(timing).items()})
    return buf.getvalue()


SUMMARY_COLUMNS = [
    "n_vertices", "omega", "gamma", "load", "algorithm", "runs", "failures",
    "mean_utilization", "bbp_mean", "bbp_rse", "time_mean_s", "time_max_s",
    "words_mean", "words_max",
]

DELTA_COLUMNS = [
    "n_vertices", "omega", "gamma", "load", "bbp_exact", "bbp_edge_exclusion",
    "bbp_delta", "bbp_rel_gap",
]


def _population(cfg: SimConfig):
    return (cfg.n_vertices, cfg.omega, cfg.effective_gamma(), cfg.load)


def summarize(configs, results, timing: bool = False):
    """Per-population aggregates and, for paired campaigns, the BBP deltas."""
    groups = {}
    for cfg, res in zip(configs, results):
        groups.setdefault(_population(cfg) + (cfg.algorithm,), []).append(res)
    rows = []
    bbp = {}
    for key, items in groups.items():
        ok = [r for r in items if r is not None]
        m_bbp, rse = mean_and_rse(r.bbp for r in ok)
        bbp[key] = m_bbp
        rows.append({
            "n_vertices": key[0], "omega": key[1], "gamma": key[2], "load": key[3],
            "algorithm": key[4], "runs": len(ok), "failures": len(items) - len(ok),
            "mean_utilization": float(np.mean([r.mean_utilization for r in ok])) if ok else math.nan,
            "bbp_mean": m_bbp, "bbp_rse": rse,
            "time_mean_s": float(np.mean([r.time_mean_s for r in ok])) if ok and timing else "",
            "time_max_s": max(r.time_max_s for r in ok) if ok and timing else "",
            "words_mean": float(np.mean([r.words_mean for r in ok])) if ok else math.nan,
            "words_max": max(r.words_max for r in ok) if ok else 0,
        })
    deltas = []
    for key in groups:
        if key[4] != "exact":
            continue
        other = key[:4] + ("edge-exclusion",)
        if other not in bbp:
            continue
        be, bh = bbp[key], bbp[other]
        deltas.append({
            "n_vertices": key[0], "omega": key[1], "gamma": key[2], "load": key[3],
            "bbp_exact": be, "bbp_edge_exclusion": bh, "bbp_delta": bh - be,
            "bbp_rel_gap": (bh - be) / be if be else math.nan,
        })
    return rows, deltas


def table_csv(rows, columns) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: _fmt(r[k]) for k in columns})
    return buf.getvalue()
