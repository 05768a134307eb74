"""Two-colony ant route search over the sensor network.

Each ant carries a sensitivity value in (0, 1) that fixes its colony and its
decision rule. Explorer ants (sensitivity below 0.5) pick the next hop by
roulette over pheromone-and-quality weights; exploiter ants (above 0.5) always
take the best-weighted candidate. Sensitivity adapts after every tour: toward
the colony's upper bound on a best-yet success, toward the lower bound on
failure, and never leaves the colony's open interval.

All randomness flows through the rng arguments. Within run_search each ant
draws from its own substream derived from (search token, iteration, ant id),
so results do not depend on construction order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from random import Random
from typing import Mapping, Sequence

from .metrics import TourRecord, tour_quality
from .network import Network


class Colony(Enum):
    EXPLORER = "explorer"
    EXPLOITER = "exploiter"


# Open sensitivity intervals; ants never sit on a boundary.
COLONY_INTERVALS: dict[Colony, tuple[float, float]] = {
    Colony.EXPLORER: (0.0, 0.5),
    Colony.EXPLOITER: (0.5, 1.0),
}


class DeadEnd(Exception):
    """Every candidate weight is zero (or there is no candidate)."""


@dataclass
class Ant:
    id: int
    colony: Colony
    sensitivity: float
    tour: list[int] = field(default_factory=list)
    # visited nodes paired with their energy at visit time
    tabu: list[tuple[int, float]] = field(default_factory=list)
    distance: float = 0.0

    def __post_init__(self) -> None:
        lo, hi = COLONY_INTERVALS[self.colony]
        if not lo < self.sensitivity < hi:
            raise ValueError(
                f"ant {self.id}: sensitivity {self.sensitivity} outside ({lo}, {hi})"
            )

    def reset(self) -> None:
        self.tour = []
        self.tabu = []
        self.distance = 0.0


@dataclass
class SearchParams:
    """Knobs of the route search; defaults suit desk-scale networks."""

    q: float = 1.0  # deposit scale
    rho: float = 0.5  # pheromone retention per round
    alpha: float = 1.0  # pheromone-and-quality exponent
    beta: float = 1.0  # inverse-distance exponent
    n_explorers: int = 10
    n_exploiters: int = 10
    iterations: int = 50
    phi0: float = 1.0  # initial pheromone on every link
    psl_delta: float = 0.1  # sensitivity adaptation rate

    def __post_init__(self) -> None:
        if self.q < 0:
            raise ValueError("q must be >= 0")
        if not 0.0 <= self.rho <= 1.0:
            raise ValueError("rho must be in [0, 1]")
        if self.alpha < 0 or self.beta < 0:
            raise ValueError("alpha and beta must be >= 0")
        if self.n_explorers < 0 or self.n_exploiters < 0:
            raise ValueError("colony sizes must be >= 0")
        if self.n_explorers + self.n_exploiters < 1:
            raise ValueError("need at least one ant")
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.phi0 <= 0:
            raise ValueError("phi0 must be positive")
        if not 0.0 <= self.psl_delta < 1.0:
            raise ValueError("psl_delta must be in [0, 1)")


class PheromoneTable:
    """Pheromone per directed link; keys mirror the network's link set."""

    def __init__(self, values: dict[tuple[int, int], float]):
        self.values = values

    @classmethod
    def uniform(cls, net: Network, phi0: float) -> "PheromoneTable":
        if phi0 <= 0:
            raise ValueError("phi0 must be positive")
        return cls({link: phi0 for link in sorted(net.links)})

    def __getitem__(self, link: tuple[int, int]) -> float:
        return self.values[link]

    def __setitem__(self, link: tuple[int, int], value: float) -> None:
        if link not in self.values:
            raise KeyError(f"unknown link {link}")
        self.values[link] = value

    def __contains__(self, link: tuple[int, int]) -> bool:
        return link in self.values

    def __len__(self) -> int:
        return len(self.values)

    def max_value(self) -> float:
        return max(self.values.values())


def _draw_sensitivity(rng: Random, lo: float, hi: float) -> float:
    # uniform() can land exactly on lo; redraw to honor the open interval
    while True:
        s = rng.uniform(lo, hi)
        if lo < s < hi:
            return s


def init_colonies(params: SearchParams, rng: Random) -> list[Ant]:
    """Create both colonies with sensitivities drawn inside their intervals.

    Explorers take ids 0..n_explorers-1, exploiters follow.
    """
    ants: list[Ant] = []
    lo, hi = COLONY_INTERVALS[Colony.EXPLORER]
    for i in range(params.n_explorers):
        ants.append(Ant(i, Colony.EXPLORER, _draw_sensitivity(rng, lo, hi)))
    lo, hi = COLONY_INTERVALS[Colony.EXPLOITER]
    for i in range(params.n_exploiters):
        ants.append(
            Ant(params.n_explorers + i, Colony.EXPLOITER, _draw_sensitivity(rng, lo, hi))
        )
    return ants


def _weight(
    node: int,
    u: int,
    pheromone: Mapping[tuple[int, int], float] | PheromoneTable,
    quality: Mapping[tuple[int, int], float],
    distance: Mapping[tuple[int, int], float],
    params: SearchParams,
) -> float:
    base = pheromone[(node, u)] * quality[(node, u)]
    if base == 0.0:
        # a dead link must never attract probability, even with alpha == 0
        return 0.0
    return base**params.alpha * (1.0 / distance[(node, u)]) ** params.beta


def transition_probabilities(
    node: int,
    candidates: Sequence[int],
    pheromone: Mapping[tuple[int, int], float] | PheromoneTable,
    quality: Mapping[tuple[int, int], float],
    distance: Mapping[tuple[int, int], float],
    params: SearchParams,
) -> dict[int, float]:
    """Normalized next-hop probabilities over the candidate neighbors.

    Weight of candidate u is (pheromone * quality)^alpha * (1/distance)^beta.
    Raises DeadEnd when every weight is zero.
    """
    weights = {
        u: _weight(node, u, pheromone, quality, distance, params)
        for u in sorted(candidates)
    }
    total = sum(weights.values())
    if total <= 0.0:
        raise DeadEnd(f"no live candidate out of node {node}")
    return {u: w / total for u, w in weights.items()}


def choose_next_explorer(probabilities: Mapping[int, float], rng: Random) -> int:
    """Roulette-wheel draw from a normalized probability table."""
    if not probabilities:
        raise DeadEnd("empty probability table")
    total = sum(probabilities.values())
    if not math.isclose(total, 1.0, rel_tol=0.0, abs_tol=1e-9):
        raise ValueError(f"probabilities sum to {total}, not 1")
    r = rng.random()
    acc = 0.0
    last = None
    for u, p in probabilities.items():
        acc += p
        last = u
        if r < acc:
            return u
    return last  # guard against the sum rounding just under 1.0


def choose_next_exploiter(
    node: int,
    candidates: Sequence[int],
    pheromone: Mapping[tuple[int, int], float] | PheromoneTable,
    quality: Mapping[tuple[int, int], float],
    distance: Mapping[tuple[int, int], float],
    params: SearchParams,
) -> int:
    """Greedy next hop: the best-weighted candidate, lowest id on ties."""
    best_u = None
    best_w = 0.0
    for u in sorted(candidates):
        w = _weight(node, u, pheromone, quality, distance, params)
        if w > best_w:
            best_u, best_w = u, w
    if best_u is None:
        raise DeadEnd(f"no live candidate out of node {node}")
    return best_u


def construct_tour(
    ant: Ant,
    source: int,
    dest: int,
    net: Network,
    pheromone: PheromoneTable,
    quality: Mapping[tuple[int, int], float],
    params: SearchParams,
    rng: Random,
) -> TourRecord | None:
    """Walk one ant from source toward dest, never revisiting a node.

    Returns the finished TourRecord, or None when the ant dead-ends (a normal
    outcome). The ant keeps its partial tour and tabu list either way; the
    tabu list records each visited node with its energy at visit time.
    """
    if source == dest:
        raise ValueError("source and destination must differ")
    for endpoint in (source, dest):
        if not net.node(endpoint).alive:
            raise ValueError(f"node {endpoint} is dead")
    ant.reset()
    ant.tour = [source]
    ant.tabu = [(source, net.node(source).energy)]
    visited = {source}
    current = source
    while current != dest:
        candidates = [
            u
            for u in net.neighbors(current)
            if u not in visited and quality.get((current, u), 0.0) > 0.0
        ]
        if not candidates:
            return None
        try:
            if ant.colony is Colony.EXPLORER:
                probs = transition_probabilities(
                    current, candidates, pheromone, quality, net.distance, params
                )
                nxt = choose_next_explorer(probs, rng)
            else:
                nxt = choose_next_exploiter(
                    current, candidates, pheromone, quality, net.distance, params
                )
        except DeadEnd:
            return None
        ant.tour.append(nxt)
        ant.tabu.append((nxt, net.node(nxt).energy))
        ant.distance += net.distance[(current, nxt)]
        visited.add(nxt)
        current = nxt
    return TourRecord(tuple(ant.tour), ant.distance, tour_quality(ant.tour, quality))


def global_pheromone_update(
    pheromone: PheromoneTable, tours: Sequence[TourRecord], params: SearchParams
) -> PheromoneTable:
    """One batch pheromone round: every link decays, successful tours deposit.

    Each tour adds q / (distance * quality) to every directed link it used.
    """
    for link in pheromone.values:
        pheromone.values[link] *= params.rho
    for tour in tours:
        if tour.distance <= 0.0 or tour.quality <= 0.0:
            raise ValueError("tour with non-positive distance or quality")
        deposit = params.q / (tour.distance * tour.quality)
        for link in zip(tour.path, tour.path[1:]):
            if link not in pheromone.values:
                raise KeyError(f"tour uses unknown link {link}")
            pheromone.values[link] += deposit
    return pheromone


def adapt_sensitivity(
    ant: Ant, succeeded: bool, score: float, best_score: float, params: SearchParams
) -> float:
    """Move an ant's sensitivity after a tour.

    A success at least as good as the best seen so far pulls it toward the
    colony's upper bound; a failure pulls it toward the lower bound; any other
    outcome leaves it unchanged. The value stays strictly inside the open
    interval even when rounding would land on a boundary.
    """
    lo, hi = COLONY_INTERVALS[ant.colony]
    s = ant.sensitivity
    if succeeded and score >= best_score:
        s = s + params.psl_delta * (hi - s)
    elif not succeeded:
        s = s - params.psl_delta * (s - lo)
    s = min(max(s, math.nextafter(lo, hi)), math.nextafter(hi, lo))
    ant.sensitivity = s
    return s


@dataclass(frozen=True)
class IterationStats:
    """Per-round search telemetry."""

    iteration: int
    best_score: float
    mean_score: float
    successes: int
    mean_sensitivity_explorer: float
    mean_sensitivity_exploiter: float


@dataclass
class SearchResult:
    best: TourRecord | None
    pheromone: PheromoneTable
    stats: list[IterationStats]
    # per-node count of hops transmitted by ants, for energy accounting
    transmit_counts: dict[int, int]

    @property
    def found(self) -> bool:
        return self.best is not None

    def stats_csv(self) -> str:
        lines = [
            "iteration,best_score,mean_score,successes,"
            "mean_sensitivity_explorer,mean_sensitivity_exploiter"
        ]
        for s in self.stats:
            lines.append(
                f"{s.iteration},{s.best_score:.6g},{s.mean_score:.6g},{s.successes},"
                f"{s.mean_sensitivity_explorer:.6g},{s.mean_sensitivity_exploiter:.6g}"
            )
        return "\n".join(lines) + "\n"


def _mean_sensitivity(ants: Sequence[Ant], colony: Colony) -> float:
    values = [a.sensitivity for a in ants if a.colony is colony]
    return sum(values) / len(values) if values else 0.0


def run_search(
    net: Network,
    source: int,
    dest: int,
    params: SearchParams,
    rng: Random,
    quality: Mapping[tuple[int, int], float] | None = None,
) -> SearchResult:
    """Run the full two-colony search and return the best tour found.

    quality=None scores every live link at 1.0. Pheromone starts uniform at
    phi0 and is updated in one batch per iteration from that iteration's
    successful tours. The best tour by quality/distance across all iterations
    is returned; None when every ant failed every round (dest unreachable is
    data, not an error).
    """
    if source == dest:
        raise ValueError("source and destination must differ")
    for endpoint in (source, dest):
        if not net.node(endpoint).alive:
            raise ValueError(f"node {endpoint} is dead")
    if quality is None:
        quality = {link: 1.0 for link in net.links}

    pheromone = PheromoneTable.uniform(net, params.phi0)
    ants = init_colonies(params, rng)
    token = rng.getrandbits(64)
    best: TourRecord | None = None
    best_score = 0.0
    transmit_counts: dict[int, int] = {}
    stats: list[IterationStats] = []

    for iteration in range(params.iterations):
        # construction phase; each ant on its own substream
        outcomes: list[tuple[Ant, TourRecord | None]] = []
        for ant in ants:
            sub = Random(f"{token}:{iteration}:{ant.id}")
            record = construct_tour(
                ant, source, dest, net, pheromone, quality, params, sub
            )
            outcomes.append((ant, record))
            for hop_from in ant.tour[:-1]:
                transmit_counts[hop_from] = transmit_counts.get(hop_from, 0) + 1

        # serial fold in ant-id order: adaptation, then best-tour tracking
        succeeded: list[TourRecord] = []
        scores: list[float] = []
        for ant, record in outcomes:
            if record is None:
                adapt_sensitivity(ant, False, 0.0, best_score, params)
                continue
            score = record.score
            adapt_sensitivity(ant, True, score, best_score, params)
            if best is None or score > best_score:
                best, best_score = record, score
            succeeded.append(record)
            scores.append(score)

        global_pheromone_update(pheromone, succeeded, params)
        stats.append(
            IterationStats(
                iteration=iteration,
                best_score=max(scores) if scores else 0.0,
                mean_score=sum(scores) / len(scores) if scores else 0.0,
                successes=len(succeeded),
                mean_sensitivity_explorer=_mean_sensitivity(ants, Colony.EXPLORER),
                mean_sensitivity_exploiter=_mean_sensitivity(ants, Colony.EXPLOITER),
            )
        )

    return SearchResult(best, pheromone, stats, transmit_counts)
