"""Discrete-time scenario engine: traffic, attacks, detection, rerouting.

Each step runs in a fixed order: reactive jammers sense last step's
transmissions, the radio picture is sampled, jammed flags update (debounced),
deceptive victims pay receive energy, in-flight packets advance one hop, and
sources emit new packets. detect_and_reroute runs after the step whenever
rerouting is enabled: routes crossing newly flagged (or newly dead) nodes are
re-searched from their source to the processing element over the current link
quality table, and sources without a path suspend until the picture changes.

Determinism contract: every random draw comes from streams derived from the
run seed, so identical (config, seed) pairs replay identically, including
serialized reports byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from random import Random
from typing import Iterable

from .ants import run_search
from .config import (
    ScenarioConfig,
    build_jammers,
    build_scenario_network,
    resolve_sources,
    resolve_totals,
)
from .jammers import (
    JammerKind,
    deceptive_victims,
    jammed_from_samples,
    sample_radio,
)
from .metrics import (
    LinkCounters,
    build_link_metrics,
    quality_from_metrics,
)
from .network import euclidean_distance


@dataclass
class Packet:
    source: int
    route: tuple[int, ...]  # snapshot of the route at send time
    idx: int  # position within route
    sent_at: int


@dataclass(frozen=True)
class Event:
    step: int
    kind: str  # deliver | drop | flagged | cleared | death | reroute | suspend
    node: int | None = None
    source: int | None = None
    detail: str = ""


@dataclass
class SearchSummary:
    """One run_search invocation as recorded in the report."""

    step: int  # -1 for the initial route installation
    source: int
    found: bool
    best_score: float
    successes: int


@dataclass
class RunReport:
    """Outcome of one scenario run."""

    seed: int
    duration: int
    sent: int
    delivered: int
    dropped: int
    in_flight: int
    pdr: float
    mean_delay: float
    reroutes: int
    jammed_peak: int
    energy_spent: dict[int, float]
    jammed_per_step: list[int]
    searches: list[SearchSummary]
    # per step: [t, sent, delivered, dropped, in_flight, flagged]
    trace: list[list[int]]


@dataclass
class ScenarioState:
    time: int = 0
    routes: dict[int, tuple[int, ...] | None] = field(default_factory=dict)
    packets: list[Packet] = field(default_factory=list)
    flags: set[int] = field(default_factory=set)
    prev_flags: set[int] = field(default_factory=set)
    streaks: dict[int, int] = field(default_factory=dict)
    newly_dead: set[int] = field(default_factory=set)
    last_transmitters: set[int] = field(default_factory=set)
    last_samples: dict = field(default_factory=dict)
    emit_acc: dict[int, float] = field(default_factory=dict)
    counters: dict[tuple[int, int], LinkCounters] = field(default_factory=dict)
    sent: int = 0
    delivered: int = 0
    dropped: int = 0
    delay_sum: int = 0
    reroutes: int = 0
    jammed_per_step: list[int] = field(default_factory=list)
    trace: list[list[int]] = field(default_factory=list)
    searches: list[SearchSummary] = field(default_factory=list)


class Simulation:
    """One seeded scenario run. Build, then call run(), or drive step() directly."""

    def __init__(self, config: ScenarioConfig, seed: int):
        self.config = config
        self.seed = seed
        self.net = build_scenario_network(config, seed)
        self.jammers = build_jammers(config)
        self.radio = config.radio
        self.totals = resolve_totals(config, self.net)
        self.sources = resolve_sources(config, self.net)
        for src in self.sources:
            self.net.node(src)  # id sanity for explicit Simulation callers
        self.jam_rng = Random(f"{seed}/jammers")
        self.state = ScenarioState()
        self.state.routes = {src: None for src in self.sources}
        self.state.emit_acc = {src: 0.0 for src in self.sources}
        self._initial_energy = {i: n.energy for i, n in self.net.nodes.items()}
        self._search_count = 0
        self._install_initial_routes()

    # ----- internals -------------------------------------------------

    def _drain(self, node_id: int, amount: float) -> None:
        if amount <= 0.0:
            return
        node = self.net.node(node_id)
        was_alive = node.alive
        self.net.drain_energy(node_id, amount)
        if was_alive and not node.alive:
            self.state.newly_dead.add(node_id)

    def _quality_table(self, samples, flags: set[int]):
        table = build_link_metrics(
            self.net,
            samples,
            counters=self.state.counters,
            totals=self.totals,
            flagged=frozenset(flags),
        )
        return quality_from_metrics(table)

    def _search(self, source: int, quality):
        rng = Random(f"{self.seed}/search/{self._search_count}")
        self._search_count += 1
        result = run_search(
            self.net, source, self.net.pe_id, self.config.search, rng, quality
        )
        for node_id, hops in sorted(result.transmit_counts.items()):
            self._drain(node_id, hops * self.config.ant_energy_cost)
        self.state.searches.append(
            SearchSummary(
                step=self.state.time - 1 if self.state.time else -1,
                source=source,
                found=result.found,
                best_score=result.best.score if result.best else 0.0,
                successes=sum(s.successes for s in result.stats),
            )
        )
        return result

    def _install_initial_routes(self) -> None:
        # clean network: jammers have not emitted yet
        samples = sample_radio(self.net, [], 0, self.radio, Random(0))
        quality = self._quality_table(samples, set())
        self.state.last_samples = samples
        for src in sorted(self.state.routes):
            result = self._search(src, quality)
            self.state.routes[src] = result.best.path if result.best else None

    # ----- per-step phases -------------------------------------------

    def step(self) -> list[Event]:
        """Advance the scenario one time step; returns this step's events."""
        st = self.state
        t = st.time
        cfg = self.config
        events: list[Event] = []

        # 1. reactive jammers hear last step's transmissions (one-step latency)
        for jammer in self.jammers:
            if jammer.kind is JammerKind.REACTIVE:
                jammer.triggered = any(
                    euclidean_distance(jammer.position, self.net.node(i).position)
                    <= jammer.sense_range
                    for i in st.last_transmitters
                )

        # 2. radio picture and debounced jam flags
        samples = sample_radio(self.net, self.jammers, t, self.radio, self.jam_rng)
        instantaneous = jammed_from_samples(samples)
        streaks: dict[int, int] = {}
        for i in instantaneous:
            streaks[i] = st.streaks.get(i, 0) + 1
        st.streaks = streaks
        flags = {i for i, n in streaks.items() if n >= self.radio.debounce}
        for i in sorted(flags - st.flags):
            events.append(Event(t, "flagged", node=i))
        for i in sorted(st.flags - flags):
            events.append(Event(t, "cleared", node=i))
        st.prev_flags = st.flags
        st.flags = flags

        # 3. deceptive jammers keep their victims busy receiving fake packets
        if cfg.rx_energy_cost > 0.0:
            for victim in sorted(
                deceptive_victims(self.net, self.jammers, t, self.radio)
            ):
                self._drain(victim, cfg.rx_energy_cost)

        # 4. packets advance one hop
        transmitters: set[int] = set()
        kept: list[Packet] = []
        for pkt in st.packets:
            cur = pkt.route[pkt.idx]
            nxt = pkt.route[pkt.idx + 1]
            if cur in st.flags or not self.net.node(cur).alive:
                st.dropped += 1
                events.append(
                    Event(t, "drop", node=cur, source=pkt.source,
                          detail="holder jammed or dead")
                )
                continue
            counter = st.counters.setdefault((cur, nxt), LinkCounters())
            if nxt in st.flags or not self.net.node(nxt).alive:
                counter.attempts += 1
                counter.lost += 1
                st.dropped += 1
                events.append(
                    Event(t, "drop", node=nxt, source=pkt.source,
                          detail="next hop jammed or dead")
                )
                continue
            counter.attempts += 1
            counter.delivered += 1
            transmitters.add(cur)
            self._drain(cur, cfg.packet_energy_cost)
            pkt.idx += 1
            if pkt.idx == len(pkt.route) - 1:
                st.delivered += 1
                st.delay_sum += t - pkt.sent_at
                events.append(Event(t, "deliver", node=nxt, source=pkt.source))
            else:
                kept.append(pkt)
        st.packets = kept

        # 5. sources emit onto their installed routes
        for src in sorted(st.routes):
            route = st.routes[src]
            if route is None or len(route) < 2:
                continue
            if src in st.flags or not self.net.node(src).alive:
                continue
            acc = st.emit_acc[src] + cfg.rate
            while acc >= 1.0:
                acc -= 1.0
                st.packets.append(Packet(src, route, 0, t))
                st.sent += 1
            st.emit_acc[src] = acc

        st.last_transmitters = transmitters
        st.last_samples = samples
        st.jammed_per_step.append(len(flags))
        st.trace.append(
            [t, st.sent, st.delivered, st.dropped, len(st.packets), len(flags)]
        )
        for i in sorted(st.newly_dead):
            events.append(Event(t, "death", node=i))
        st.time = t + 1
        return events

    def detect_and_reroute(self) -> list[Event]:
        """React to flag transitions: re-search affected routes, suspend dead ends."""
        st = self.state
        newly_flagged = st.flags - st.prev_flags
        cleared = st.prev_flags - st.flags
        deaths = set(st.newly_dead)
        st.newly_dead = set()
        changed = bool(newly_flagged or cleared or deaths)

        needs: list[int] = []
        for src in sorted(st.routes):
            route = st.routes[src]
            if route is None:
                if changed:
                    needs.append(src)
            elif set(route) & (newly_flagged | deaths):
                needs.append(src)
            elif cleared and self.config.restore_routes:
                needs.append(src)
        if not needs:
            return []

        events: list[Event] = []
        quality = self._quality_table(st.last_samples, st.flags)
        for src in needs:
            old = st.routes[src]
            if not self.net.node(src).alive:
                st.routes[src] = None
                continue
            result = self._search(src, quality)
            if result.best is None:
                st.routes[src] = None
                if old is not None:
                    events.append(
                        Event(st.time - 1, "suspend", source=src,
                              detail="no live path to the processing element")
                    )
            else:
                new_route = result.best.path
                if new_route != old:
                    st.reroutes += 1
                    events.append(
                        Event(st.time - 1, "reroute", source=src,
                              detail=f"{len(new_route) - 1} hops")
                    )
                st.routes[src] = new_route
        return events

    # ----- whole-run driver ------------------------------------------

    def run(self) -> RunReport:
        for _ in range(self.config.duration):
            self.step()
            if self.config.reroute:
                self.detect_and_reroute()
        return self.report()

    def report(self) -> RunReport:
        st = self.state
        pdr = st.delivered / st.sent if st.sent else 1.0
        mean_delay = st.delay_sum / st.delivered if st.delivered else 0.0
        energy_spent = {
            i: self._initial_energy[i] - self.net.nodes[i].energy
            for i in sorted(self.net.nodes)
        }
        return RunReport(
            seed=self.seed,
            duration=self.config.duration,
            sent=st.sent,
            delivered=st.delivered,
            dropped=st.dropped,
            in_flight=len(st.packets),
            pdr=pdr,
            mean_delay=mean_delay,
            reroutes=st.reroutes,
            jammed_peak=max(st.jammed_per_step, default=0),
            energy_spent=energy_spent,
            jammed_per_step=list(st.jammed_per_step),
            searches=list(st.searches),
            trace=[list(row) for row in st.trace],
        )


def run_scenario(config: ScenarioConfig, seed: int) -> RunReport:
    """Build and run one seeded scenario end to end."""
    return Simulation(config, seed).run()


def run_many(config: ScenarioConfig, seeds: Iterable[int]) -> list[RunReport]:
    return [run_scenario(config, seed) for seed in seeds]
