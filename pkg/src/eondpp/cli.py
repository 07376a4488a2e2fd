"""Command-line front end.

Every option can also be set through the environment as
``EONDPP_<COMMAND>_<OPTION>``, e.g. ``EONDPP_SIMULATE_SEED=7``.

Exit codes for ``search``: 0 pair found, 1 no pair, 2 usage error.
"""
from __future__ import annotations

import json
import logging
import os
import sys

import click

from . import campaign as cp
from .baselines import BudgetExceeded, brute_force_pair, edge_exclusion_pair
from .costmodel import ModulationModel, RMSACostModel, resolve_r1
from .dppcore import SearchStats, dpp_search
from .graph import Network, NetworkError, gabriel_generate, shortest_path_metrics
from .sim import ALGORITHMS

ENV_PREFIX = "EONDPP"


def _write_text(path: str, text: str) -> None:
    if path == "-":
        click.echo(text, nl=False)
        return
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise click.ClickException(f"cannot write {path}: {exc.strerror}") from None


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Log progress to stderr.")
def main(verbose):
    """Dedicated path protection routing for elastic optical networks."""
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")


@main.command()
@click.option("-n", "--nodes", type=int, default=25, show_default=True)
@click.option("--density", type=float, default=10_000.0, show_default=True,
              help="Square km per vertex.")
@click.option("--omega", type=int, default=160, show_default=True, help="Units per edge.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", "out_path", default="-", show_default=True, help="Output file, '-' for stdout.")
def gengraph(nodes, density, omega, seed, out_path):
    """Generate a random Gabriel graph as canonical JSON."""
    if nodes < 2:
        raise click.UsageError("--nodes must be at least 2")
    net = gabriel_generate(nodes, density, seed, omega)
    _write_text(out_path, net.to_json())


@main.command()
@click.argument("graph", type=click.Path(dir_okay=False))
@click.option("-s", "--src", type=int, required=True)
@click.option("-t", "--dst", type=int, required=True)
@click.option("-g", "--units", type=int, default=1, show_default=True,
              help="Units at the most efficient modulation.")
@click.option("--algo", type=click.Choice(sorted(ALGORITHMS)), default="exact", show_default=True)
@click.option("--levels", type=int, default=4, show_default=True, help="Modulation levels.")
@click.option("--r1", "r1_km", type=float, default=None,
              help="Reach of the least efficient modulation in km [default: 1.5x diameter].")
@click.option("--max-pops", type=int, default=2_000_000, show_default=True,
              help="Brute-force pop budget.")
@click.option("--timing/--no-timing", default=False, help="Report wall-clock time (non-deterministic).")
def search(graph, src, dst, units, algo, levels, r1_km, max_pops, timing):
    """Find a protected path pair; prints JSON."""
    ctx = click.get_current_context()
    try:
        net = Network.load(graph)
        net.check_vertex(src)
        net.check_vertex(dst)
        if src == dst:
            raise NetworkError("source and destination must differ")
        if units < 1:
            raise NetworkError("--units must be at least 1")
        _, diameter = shortest_path_metrics(net)
        model = RMSACostModel(units, ModulationModel(levels, resolve_r1(r1_km, diameter)))
    except (OSError, ValueError) as exc:
        click.echo(f"Error: {graph}: {exc}", err=True)
        ctx.exit(2)
    st = SearchStats()
    budget = False
    if algo == "exact":
        pair = dpp_search(net, src, dst, model, stats=st)
    elif algo == "edge-exclusion":
        pair = edge_exclusion_pair(net, src, dst, model, stats=st)
    else:
        try:
            pair = brute_force_pair(net, src, dst, model, max_pops=max_pops, stats=st)
        except BudgetExceeded:
            pair, budget = None, True
    out = {"found": pair is not None, "cost": None, "working": None, "protecting": None}
    if pair is not None:
        d = pair.to_dict()
        out.update(cost=d["cost"], working=d["working"], protecting=d["protecting"])
    if budget:
        out["budget_exceeded"] = True
    out["stats"] = {"pops": st.pops, "labels": st.labels, "words_peak": st.words_peak,
                    "time_s": st.time_s if timing else None}
    click.echo(json.dumps(out, indent=1))
    ctx.exit(0 if pair is not None else 1)


@main.command()
@click.option("--count", type=int, default=1000, show_default=True)
@click.option("--min-nodes", type=int, default=6, show_default=True)
@click.option("--max-nodes", type=int, default=10, show_default=True)
@click.option("--omega", "omegas", type=int, multiple=True, default=(4, 8), show_default=True)
@click.option("--gamma", "gammas", type=int, multiple=True, default=(1, 2, 3), show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--max-pops", type=int, default=2_000_000, show_default=True)
@click.option("--jobs", type=int, default=1, show_default=True)
@click.option("--out", "out_dir", default=None, help="Directory for report and mismatch bundles.")
def corroborate(count, min_nodes, max_nodes, omegas, gammas, seed, max_pops, jobs, out_dir):
    """Compare the exact search with brute force on random instances."""
    if count < 1 or not omegas or not gammas:
        raise click.UsageError("nothing to corroborate")
    if not 2 <= min_nodes <= max_nodes:
        raise click.UsageError("need 2 <= --min-nodes <= --max-nodes")
    report = cp.corroborate(count, seed, (min_nodes, max_nodes), omegas, gammas,
                            out_dir=out_dir, max_pops=max_pops, jobs=jobs)
    text = json.dumps(report.to_dict(), indent=1) + "\n"
    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
        _write_text(os.path.join(out_dir, "report.json"), text)
    click.echo(text, nl=False)
    click.echo(f"{report.matches}/{report.total} match, {len(report.mismatches)} mismatch, "
               f"{len(report.budget_exceeded)} over budget", err=True)
    if not report.ok:
        sys.exit(1)


@main.command()
@click.option("--nodes", type=int, multiple=True, default=(25,), show_default=True)
@click.option("--omega", "omegas", type=int, multiple=True, default=(160,), show_default=True)
@click.option("--gamma", "gammas", type=float, multiple=True)
@click.option("--gamma-pct", "gamma_pcts", type=float, multiple=True)
@click.option("--load", "loads", type=float, multiple=True, default=(1.0,), show_default=True)
@click.option("--algo", "algos", type=click.Choice(sorted(ALGORITHMS)), multiple=True,
              default=("exact",), show_default=True)
@click.option("--samples", type=int, default=1, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--tau", type=float, default=10.0, show_default=True, help="Mean holding time, days.")
@click.option("--days", type=float, default=150.0, show_default=True, help="Simulated days.")
@click.option("--warmup", type=float, default=50.0, show_default=True, help="Discarded days.")
@click.option("--levels", type=int, default=4, show_default=True)
@click.option("--jobs", type=int, default=1, show_default=True)
@click.option("--timing/--no-timing", default=False, help="Record wall-clock search times.")
@click.option("--out", "out_dir", required=True, help="Output directory.")
def simulate(nodes, omegas, gammas, gamma_pcts, loads, algos, samples, seed, tau, days,
             warmup, levels, jobs, timing, out_dir):
    """Run a simulation campaign and write runs/summary CSVs."""
    if not gammas and not gamma_pcts:
        gammas = (10.0,)
    spec = cp.CampaignSpec(nodes=nodes, omegas=omegas, loads=loads, gammas=gammas,
                           gamma_pcts=gamma_pcts, algorithms=algos, samples=samples,
                           seed=seed, tau_days=tau, horizon_days=days, warmup_days=warmup,
                           modulation_levels=levels, timing=timing)
    try:
        spec.validate()
        if not 0 <= warmup < days:
            raise ValueError("need 0 <= --warmup < --days")
    except ValueError as exc:
        raise click.UsageError(str(exc)) from None
    configs, results, errors = cp.run_campaign(spec, jobs)
    rows, deltas = cp.summarize(configs, results, timing)
    os.makedirs(out_dir, exist_ok=True)
    _write_text(os.path.join(out_dir, "runs.csv"), cp.runs_csv(results, timing))
    _write_text(os.path.join(out_dir, "summary.csv"), cp.table_csv(rows, cp.SUMMARY_COLUMNS))
    if deltas:
        _write_text(os.path.join(out_dir, "deltas.csv"), cp.table_csv(deltas, cp.DELTA_COLUMNS))
    failed = [(c, e) for c, e in zip(configs, errors) if e]
    if failed:
        _write_text(os.path.join(out_dir, "failures.csv"), "seed,n_vertices,algorithm,error\n" + "".join(
            f"{c.seed},{c.n_vertices},{c.algorithm},{json.dumps(e)}\n" for c, e in failed))
    click.echo(cp.table_csv(rows, cp.SUMMARY_COLUMNS), nl=False)
    for d in deltas:
        click.echo(f"population n={d['n_vertices']} omega={d['omega']} gamma={d['gamma']} "
                   f"a={d['load']}: BBP exact={d['bbp_exact']:.4f} "
                   f"edge-exclusion={d['bbp_edge_exclusion']:.4f} delta={d['bbp_delta']:+.4f}",
                   err=True)


def run():
    main(auto_envvar_prefix=ENV_PREFIX)


if __name__ == "__main__":
    run()
