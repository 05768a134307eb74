"""Acceptance gate: nine end-to-end checks over the whole package.

Each check prints one always-visible PASS/FAIL verdict line (emitted with
capture disabled, so the lines show up under plain pytest) and enforces
its runtime budget where one applies. Tolerances are stated inline;
hand-computed expectations carry their arithmetic in comments.
"""

import dataclasses
import math
from random import Random
from time import perf_counter

import pytest

from antjam.ants import (
    COLONY_INTERVALS,
    Ant,
    Colony,
    PheromoneTable,
    SearchParams,
    adapt_sensitivity,
    choose_next_exploiter,
    global_pheromone_update,
    run_search,
    transition_probabilities,
)
from antjam.config import parse_config
from antjam.engine import Simulation, run_scenario
from antjam.jammers import (
    Jammer,
    JammerKind,
    RadioParams,
    RadioSample,
    jammer_emission,
    noise_at,
    sample_radio,
    signal_to_noise_ratio,
)
from antjam.metrics import (
    LinkMetrics,
    TourRecord,
    build_link_metrics,
    link_quality,
    normalize_metric,
    quality_from_metrics,
    tour_quality,
)
from antjam.network import (
    build_network,
    euclidean_distance,
    random_geometric_network,
)
from antjam.reporting import report_json_bytes

from oracle import best_score


@pytest.fixture
def verdict(capsys):
    def emit(number, label, ok, elapsed=None, budget=None):
        over = budget is not None and elapsed is not None and elapsed >= budget
        status = "PASS" if ok and not over else "FAIL"
        timing = ""
        if elapsed is not None:
            timing = f" [{elapsed:.2f}s" + (f" / {budget:.0f}s]" if budget else "]")
        with capsys.disabled():
            print(f"acceptance {number} ({label}): {status}{timing}")
        assert ok, f"acceptance {number} ({label}) failed"
        if budget is not None:
            assert not over, f"acceptance {number} over budget: {elapsed:.2f}s"

    return emit


# the shared attack scenario: 7x7 grid, west-middle source, east-middle
# sink, constant jammer lighting up the center disc from step 50 onward
GRID_TEXT = """
[network]
layout = grid
rows = 7
cols = 7
spacing = 10
range = 12
pe = 27

[search]
n_explorers = 6
n_exploiters = 6
iterations = 30

[traffic]
sources = 21
duration = 300

[sim]
ant_energy_cost = 0.0

[jammer]
kind = constant
x = 30
y = 30
power = 0.45
start = 50
"""


@pytest.fixture(scope="module")
def paired_grid_runs():
    """Twenty paired (reroute on, reroute off) runs of the grid scenario."""
    cfg = parse_config(GRID_TEXT)
    on_cfg = dataclasses.replace(cfg, reroute=True)
    off_cfg = dataclasses.replace(cfg, reroute=False)
    start = perf_counter()
    pairs = [
        (run_scenario(on_cfg, seed), run_scenario(off_cfg, seed))
        for seed in range(20)
    ]
    elapsed = perf_counter() - start
    return {
        "pairs": pairs,
        "elapsed": elapsed,
        "on_cfg": on_cfg,
        "off_cfg": off_cfg,
    }


def test_c1_equation_fidelity(verdict):
    start = perf_counter()
    tol = 1e-12
    ok = True

    # transition probabilities: weights (2*0.5)^1/1 = 1 and (1*1)^1/2 = 0.5
    pheromone = {(0, 1): 2.0, (0, 2): 1.0}
    quality = {(0, 1): 0.5, (0, 2): 1.0}
    distance = {(0, 1): 1.0, (0, 2): 2.0}
    probs = transition_probabilities(
        0, [1, 2], pheromone, quality, distance, SearchParams(alpha=1.0, beta=1.0)
    )
    ok &= abs(probs[1] - 2.0 / 3.0) <= tol
    ok &= abs(probs[2] - 1.0 / 3.0) <= tol

    # greedy rule on the same instance: 1.0 beats 0.5
    ok &= (
        choose_next_exploiter(0, [1, 2], pheromone, quality, distance,
                              SearchParams()) == 1
    )

    # trail update: 0.5 * 1.0 retained + 1/(2*1) deposited = 1.0 exactly
    table = PheromoneTable({(0, 1): 1.0, (1, 0): 1.0})
    global_pheromone_update(
        table, [TourRecord(path=(0, 1), distance=2.0, quality=1.0)],
        SearchParams(q=1.0, rho=0.5),
    )
    ok &= abs(table[(0, 1)] - 1.0) <= tol
    ok &= abs(table[(1, 0)] - 0.5) <= tol

    # normalized metric: (10 - 4) / 10
    ok &= abs(normalize_metric(4.0, 10.0) - 0.6) <= tol

    # link quality as a straight product: 0.9 * 0.8
    m = LinkMetrics(hop=0.9, energy=0.8, bit_error=1.0, snr=1.0,
                    delivery=1.0, loss=1.0)
    ok &= abs(link_quality(m) - 0.72) <= tol

    # tour quality: geometric mean of 0.25 and 1.0 is 0.5
    ok &= abs(
        tour_quality((0, 1, 2), {(0, 1): 0.25, (1, 2): 1.0}) - 0.5
    ) <= tol

    # sensitivity adaptation toward each bound at half rate
    up = Ant(0, Colony.EXPLORER, 0.4)
    ok &= abs(
        adapt_sensitivity(up, True, 1.0, 0.5, SearchParams(psl_delta=0.5)) - 0.45
    ) <= tol
    down = Ant(1, Colony.EXPLOITER, 0.6)
    ok &= abs(
        adapt_sensitivity(down, False, 0.0, 1.0, SearchParams(psl_delta=0.5))
        - 0.55
    ) <= tol

    # radio arithmetic: ratio 0.5/2, square-law gain (1/2)^2 over the floor
    ok &= abs(
        signal_to_noise_ratio(RadioSample(p_signal=0.5, p_noise=2.0)) - 0.25
    ) <= tol
    radio = RadioParams(floor=1e-9, d0=1.0, gamma=2.0)
    net = build_network(
        [((0.0, 0.0), 10.0, 5.0), ((2.0, 0.0), 10.0, 5.0)], 1
    )
    jammer = Jammer(JammerKind.CONSTANT, (0.0, 0.0), power=1.0)
    noise = noise_at(net, [jammer], 1, 0, radio, Random(0))
    ok &= abs(noise - (1e-9 + 0.25)) <= tol

    # plane distance and the sleep-2 jam-3 duty cycle unrolled by hand
    ok &= abs(euclidean_distance((0.0, 0.0), (1.0, 1.0)) - math.sqrt(2.0)) <= tol
    cycler = Jammer(JammerKind.RANDOM, (0.0, 0.0), power=0.7,
                    sleep_steps=(2, 2), jam_steps=(3, 3))
    emissions = [jammer_emission(cycler, t, True, Random(0)) for t in range(5)]
    ok &= emissions == [0.0, 0.0, 0.7, 0.7, 0.7]

    verdict(1, "equation fidelity", ok, perf_counter() - start, 1.0)


def test_c2_probability_law(verdict):
    start = perf_counter()
    rng = Random(20250819)
    ok = True
    for _ in range(1000):
        n = rng.randint(1, 10)
        cands = list(range(1, n + 1))
        pheromone = {(0, u): rng.uniform(0.01, 10.0) for u in cands}
        quality = {(0, u): rng.uniform(0.01, 1.0) for u in cands}
        distance = {(0, u): rng.uniform(0.1, 100.0) for u in cands}
        p = SearchParams(alpha=rng.uniform(0.0, 3.0), beta=rng.uniform(0.0, 3.0))
        probs = transition_probabilities(0, cands, pheromone, quality, distance, p)
        ok &= abs(sum(probs.values()) - 1.0) <= 1e-9
        flat = transition_probabilities(
            0, cands, pheromone, quality, distance,
            SearchParams(alpha=0.0, beta=0.0),
        )
        ok &= max(abs(v - 1.0 / n) for v in flat.values()) <= 1e-12
    verdict(2, "probability law", ok, perf_counter() - start, 1.0)


def test_c3_argmax_scale_invariance(verdict):
    start = perf_counter()
    rng = Random(31337)
    ok = True
    for _ in range(1000):
        n = rng.randint(2, 10)
        cands = list(range(1, n + 1))
        pheromone = {(0, u): rng.uniform(0.01, 10.0) for u in cands}
        quality = {(0, u): rng.uniform(0.01, 1.0) for u in cands}
        distance = {(0, u): rng.uniform(0.1, 100.0) for u in cands}
        p = SearchParams(alpha=rng.uniform(0.1, 3.0), beta=rng.uniform(0.0, 3.0))
        base = choose_next_exploiter(0, cands, pheromone, quality, distance, p)
        c = 10.0 ** rng.uniform(-6.0, 6.0)  # spans (0, 1e6]
        scaled = {link: c * v for link, v in pheromone.items()}
        ok &= choose_next_exploiter(0, cands, scaled, quality, distance, p) == base
    verdict(3, "argmax scale invariance", ok, perf_counter() - start, 1.0)


def test_c4_search_optimality(verdict):
    start = perf_counter()
    radio = RadioParams()
    params = SearchParams(iterations=200)  # 10 + 10 ants by default
    exact_hits = 0
    all_within_5pct = True
    for k in range(20):
        net = random_geometric_network(
            10, 100.0, 100.0, 40.0, 50.0, Random(f"layout/{k}"),
            pe_index=9, connected=True,
        )
        samples = sample_radio(net, [], 0, radio, Random(0))
        quality = quality_from_metrics(build_link_metrics(net, samples))
        optimum, _ = best_score(quality, net.distance, 0, 9)
        assert optimum > 0.0
        result = run_search(net, 0, 9, params, Random(f"search/{k}"), quality)
        assert result.found
        score = result.best.score
        assert score <= optimum * (1.0 + 1e-9)  # the oracle is a maximum
        if abs(score - optimum) <= 1e-9 * optimum:
            exact_hits += 1
        if score < 0.95 * optimum:
            all_within_5pct = False
    ok = exact_hits >= 18 and all_within_5pct
    verdict(
        4, f"search optimality ({exact_hits}/20 exact)", ok,
        perf_counter() - start, 30.0,
    )


def test_c5_jamming_geometry(verdict):
    start = perf_counter()
    cfg = parse_config(GRID_TEXT.replace("start = 50", "start = 0"))
    sim = Simulation(cfg, seed=0)
    sim.step()
    flagged = set(sim.state.flags)

    # independent re-derivation: a node is jammed when its strongest
    # neighbor signal falls below the jammer's power at its position
    radio = cfg.radio
    jam_pos = (30.0, 30.0)
    expected = set()
    for i, node in sim.net.nodes.items():
        neighbor_d = min(
            math.dist(node.position, sim.net.nodes[j].position)
            for j in sim.net.neighbors(i)
        )
        signal = radio.tx_power * min(1.0, (radio.d0 / neighbor_d) ** radio.gamma)
        d_jam = math.dist(node.position, jam_pos)
        gain = 1.0 if d_jam <= radio.d0 else (radio.d0 / d_jam) ** radio.gamma
        noise = radio.floor + 0.45 * gain
        if signal / noise < 1.0:
            expected.add(i)

    # desk count: power 0.45 over signal 1e-3 swamps radii up to
    # sqrt(450) = 21.2 m, which covers grid offsets 0, 10, 14.1, and 20
    ok = flagged == expected and len(flagged) == 13
    verdict(5, "jamming geometry", ok, perf_counter() - start, 1.0)


def test_c6_reroute_efficacy(paired_grid_runs, verdict):
    start = perf_counter()
    pairs = paired_grid_runs["pairs"]
    dominated = all(on.pdr >= off.pdr for on, off in pairs)
    deltas = [on.pdr - off.pdr for on, off in pairs]
    mean_delta = sum(deltas) / len(deltas)
    # margin rationale: without rerouting only the packets landed before
    # the step-50 activation survive (about 44 of 300, pdr ~ 0.15), while
    # a clear two-row detour exists, so the rerouted arm stays above 0.9;
    # the required mean improvement of 0.15 sits far below that gap
    ok = dominated and mean_delta >= 0.15
    ok &= all(off.pdr < 0.2 for _, off in pairs)
    ok &= all(on.reroutes >= 1 for on, _ in pairs)
    elapsed = paired_grid_runs["elapsed"] + (perf_counter() - start)
    verdict(
        6, f"reroute efficacy (mean delta {mean_delta:.3f})", ok, elapsed, 60.0
    )


def test_c7_conservation_and_determinism(paired_grid_runs, verdict):
    start = perf_counter()
    ok = True
    for on, off in paired_grid_runs["pairs"]:
        for report in (on, off):
            for t, sent, delivered, dropped, in_flight, _ in report.trace:
                ok &= sent == delivered + dropped + in_flight
            ok &= report.sent == report.delivered + report.dropped + report.in_flight
    on0, off0 = paired_grid_runs["pairs"][0]
    ok &= report_json_bytes(run_scenario(paired_grid_runs["on_cfg"], 0)) == (
        report_json_bytes(on0)
    )
    ok &= report_json_bytes(run_scenario(paired_grid_runs["off_cfg"], 0)) == (
        report_json_bytes(off0)
    )
    verdict(
        7, "conservation and determinism", ok, perf_counter() - start, 60.0
    )


def test_c8_decay_law(verdict):
    start = perf_counter()
    net = build_network(
        [((0.0, 0.0), 10.0, 2.0), ((1.0, 0.0), 10.0, 2.0),
         ((2.0, 0.0), 10.0, 2.0)],
        2,
    )
    table = PheromoneTable.uniform(net, 3.7)
    params = SearchParams(q=0.0, rho=0.5)
    tour = TourRecord(path=(0, 1, 2), distance=2.0, quality=1.0)
    for _ in range(10):
        global_pheromone_update(table, [tour], params)
    target = 3.7 * 2.0**-10
    ok = all(abs(table[link] - target) <= 1e-12 for link in net.links)
    verdict(8, "pheromone decay law", ok, perf_counter() - start)


def test_c9_sensitivity_confinement(verdict):
    start = perf_counter()
    rng = Random(424242)
    ants = [Ant(i, Colony.EXPLORER, 0.25) for i in range(5)] + [
        Ant(5 + i, Colony.EXPLOITER, 0.75) for i in range(5)
    ]
    rates = [SearchParams(psl_delta=d) for d in (0.0, 0.1, 0.5, 0.9, 0.97)]
    ok = True
    for _ in range(10000):
        ant = rng.choice(ants)
        adapt_sensitivity(
            ant,
            rng.random() < 0.5,
            rng.random(),
            rng.random(),
            rng.choice(rates),
        )
        lo, hi = COLONY_INTERVALS[ant.colony]
        ok &= lo < ant.sensitivity < hi
    verdict(9, "sensitivity confinement", ok, perf_counter() - start)
