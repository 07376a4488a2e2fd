import pytest

from eondpp.baselines import (
    BudgetExceeded, brute_force_pair, edge_exclusion_pair, generic_dijkstra_single,
)
from eondpp.campaign import random_case
from eondpp.dppcore import dpp_search
from eondpp.graph import gabriel_generate
from eondpp.spectrum import CU, SpectrumSet

from conftest import build
from oracles import spectrum_scan_single


def test_single_path_picks_wider_detour(long_reach):
    # the direct edge has no free unit
    net = build(3, 4, [(0, 2, 1, SpectrumSet()), (0, 1, 1), (1, 2, 1)])
    res = generic_dijkstra_single(net, 0, 2, long_reach)
    assert res.edges == (1, 2)
    assert res.maximal_cu == CU(0, 3)
    assert res.cost == 2


def test_single_path_respects_exclusion(long_reach, cycle_net):
    res = generic_dijkstra_single(cycle_net, 0, 2, long_reach, excluded={0})
    assert res.edges == (3, 2)
    assert generic_dijkstra_single(cycle_net, 0, 2, long_reach, excluded={0, 3}) is None


def test_single_path_spectrum_continuity(long_reach):
    # the short route has no common free unit along its edges
    net = build(3, 4, [(0, 1, 1, SpectrumSet.parse("0-1")), (1, 2, 1, SpectrumSet.parse("2-3")),
                       (0, 2, 5)])
    res = generic_dijkstra_single(net, 0, 2, long_reach)
    assert res.edges == (2,)


@pytest.mark.parametrize("index", range(120))
def test_single_path_matches_spectrum_scan(index):
    case = random_case(21, index, n_range=(5, 9), omegas=(4, 8, 16))
    model = case.model()
    got = generic_dijkstra_single(case.net, case.src, case.dst, model)
    ref = spectrum_scan_single(case.net, case.src, case.dst, model.units, model.path_cost)
    if ref is None:
        assert got is None
    else:
        assert got.cost == pytest.approx(ref, rel=1e-9)
        assert case.net.path_vertices(case.src, got.edges)[-1] == case.dst


def test_edge_exclusion_misses_trap(trap_net, long_reach):
    assert edge_exclusion_pair(trap_net, 0, 3, long_reach) is None
    assert dpp_search(trap_net, 0, 3, long_reach).cost == 8


def test_edge_exclusion_on_cycle(cycle_net, long_reach):
    pair = edge_exclusion_pair(cycle_net, 0, 2, long_reach)
    assert pair.cost == 4
    assert not set(pair.working) & set(pair.protecting)


def test_two_routes_one_blocked_by_spectrum(long_reach):
    # two disjoint routes exist but one has no unit anywhere: no pair
    net = build(4, 4, [(0, 1, 1), (1, 3, 1), (0, 2, 1, SpectrumSet()), (2, 3, 1)])
    assert dpp_search(net, 0, 3, long_reach) is None
    assert edge_exclusion_pair(net, 0, 3, long_reach) is None
    assert brute_force_pair(net, 0, 3, long_reach) is None


@pytest.mark.parametrize("index", range(150))
def test_heuristic_never_beats_exact(index):
    case = random_case(31, index)
    model = case.model()
    exact = dpp_search(case.net, case.src, case.dst, model)
    heur = edge_exclusion_pair(case.net, case.src, case.dst, model)
    if heur is not None:
        assert exact is not None
        assert exact.cost <= heur.cost * (1 + 1e-9)
        assert not set(heur.working) & set(heur.protecting)


def test_brute_force_budget(long_reach):
    net = gabriel_generate(14, 10_000, 2, omega=8)
    with pytest.raises(BudgetExceeded):
        brute_force_pair(net, 0, 13, long_reach, max_pops=10)


def test_brute_force_rejects_same_endpoints(cycle_net, long_reach):
    with pytest.raises(ValueError):
        brute_force_pair(cycle_net, 2, 2, long_reach)
