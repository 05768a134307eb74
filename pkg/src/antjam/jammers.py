"""Jammer behaviors, radio noise aggregation, and the jammed-node predicate.

Four attacker kinds are modeled. A constant jammer emits every step once
started. A deceptive jammer emits the same way, but its emissions look like
well-formed packets, so nodes that hear it louder than their own traffic also
waste receive energy (see deceptive_victims). A random jammer alternates
seeded sleep/jam phases. A reactive jammer emits only when it heard channel
activity on the previous step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from random import Random
from typing import Iterable, Mapping

from .network import Network, Position, euclidean_distance


class JammerKind(Enum):
    CONSTANT = "constant"
    DECEPTIVE = "deceptive"
    RANDOM = "random"
    REACTIVE = "reactive"


@dataclass
class RadioParams:
    """Channel constants shared by every node and jammer in a scenario."""

    floor: float = 1e-9  # ambient noise power, always present
    tx_power: float = 0.1  # node transmit power
    d0: float = 1.0  # path-gain reference distance
    gamma: float = 2.0  # path-loss exponent
    debounce: int = 1  # consecutive jammed steps before a node is flagged

    def __post_init__(self) -> None:
        if self.floor <= 0:
            raise ValueError("noise floor must be positive")
        if self.tx_power <= 0:
            raise ValueError("tx_power must be positive")
        if self.d0 <= 0:
            raise ValueError("d0 must be positive")
        if self.gamma < 0:
            raise ValueError("gamma must be >= 0")
        if self.debounce < 1:
            raise ValueError("debounce must be >= 1")


@dataclass(frozen=True)
class RadioSample:
    """Received signal and noise power at one node for one step."""

    p_signal: float
    p_noise: float

    def __post_init__(self) -> None:
        if self.p_signal < 0:
            raise ValueError("signal power must be >= 0")
        if self.p_noise <= 0:
            raise ValueError("noise power must be positive")


@dataclass
class Jammer:
    """One attacker. Sleep/jam cycle state belongs to the simulation loop.

    sleep_steps and jam_steps are inclusive integer ranges; a fixed duration is
    (k, k). The cycle starts sleeping at the `start` step. `triggered` is the
    reactive kind's one-step-delayed channel sense, set by the caller.
    """

    kind: JammerKind
    position: Position
    power: float
    sleep_steps: tuple[int, int] = (1, 1)
    jam_steps: tuple[int, int] = (1, 1)
    start: int = 0
    sense_range: float = math.inf
    triggered: bool = False
    _phase: str | None = field(default=None, repr=False, compare=False)
    _phase_end: int = field(default=0, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.power <= 0:
            raise ValueError("jammer power must be positive")
        for name, rng_ in (("sleep_steps", self.sleep_steps), ("jam_steps", self.jam_steps)):
            lo, hi = rng_
            if lo < 1 or hi < lo:
                raise ValueError(f"{name} must satisfy 1 <= lo <= hi")
        if self.start < 0:
            raise ValueError("start step must be >= 0")
        if self.sense_range <= 0:
            raise ValueError("sense_range must be positive")

    def reset(self) -> None:
        self.triggered = False
        self._phase = None
        self._phase_end = 0


def path_gain(distance: float, d0: float, gamma: float) -> float:
    """Power gain over distance: 1 inside the reference distance, (d0/d)^gamma beyond."""
    if distance < 0:
        raise ValueError("distance must be >= 0")
    if distance <= d0:
        return 1.0
    return (d0 / distance) ** gamma


def signal_to_noise_ratio(sample: RadioSample) -> float:
    return sample.p_signal / sample.p_noise


def is_jammed(snr: float) -> bool:
    """An attack is effective when the ratio drops strictly below 1."""
    return snr < 1.0


def jammer_emission(jammer: Jammer, t: int, channel_active: bool, rng: Random) -> float:
    """Emitted power of one jammer at step t.

    The random kind advances its sleep/jam cycle lazily up to t, drawing phase
    durations from rng. Calls must use non-decreasing t; repeated calls at the
    same t are idempotent, so per-node noise evaluation stays safe.
    """
    if t < jammer.start:
        return 0.0
    kind = jammer.kind
    if kind in (JammerKind.CONSTANT, JammerKind.DECEPTIVE):
        return jammer.power
    if kind is JammerKind.REACTIVE:
        return jammer.power if channel_active else 0.0
    # random kind
    if jammer._phase is None:
        jammer._phase = "sleep"
        jammer._phase_end = jammer.start + rng.randint(*jammer.sleep_steps)
    while t >= jammer._phase_end:
        if jammer._phase == "sleep":
            jammer._phase = "jam"
            jammer._phase_end += rng.randint(*jammer.jam_steps)
        else:
            jammer._phase = "sleep"
            jammer._phase_end += rng.randint(*jammer.sleep_steps)
    return jammer.power if jammer._phase == "jam" else 0.0


def _jammer_active(jammer: Jammer, channel_active: bool | None) -> bool:
    if channel_active is None:
        return jammer.triggered
    return channel_active


def noise_at(
    net: Network,
    jammers: Iterable[Jammer],
    node_id: int,
    t: int,
    radio: RadioParams,
    rng: Random,
    channel_active: bool | None = None,
) -> float:
    """Total noise power at a node: floor plus every jammer's attenuated emission.

    channel_active=None reads each reactive jammer's own `triggered` state; a
    bool applies to all of them (handy in direct tests).
    """
    pos = net.node(node_id).position
    total = radio.floor
    for jammer in jammers:
        emitted = jammer_emission(jammer, t, _jammer_active(jammer, channel_active), rng)
        if emitted > 0.0:
            d = euclidean_distance(jammer.position, pos)
            total += emitted * path_gain(d, radio.d0, radio.gamma)
    return total


def reference_signal(net: Network, node_id: int, radio: RadioParams) -> float | None:
    """Received power of a reference transmission from the nearest live neighbor.

    None when the node has no live neighbors (nothing to receive).
    """
    nbrs = net.neighbors(node_id)
    if not nbrs:
        return None
    d = min(net.link_distance(node_id, n) for n in nbrs)
    return radio.tx_power * path_gain(d, radio.d0, radio.gamma)


def sample_radio(
    net: Network,
    jammers: Iterable[Jammer],
    t: int,
    radio: RadioParams,
    rng: Random,
    channel_active: bool | None = None,
) -> dict[int, RadioSample]:
    """Per-node RadioSample for one step, for every live node that can hear a neighbor."""
    jammers = list(jammers)
    samples: dict[int, RadioSample] = {}
    for i in net.alive_ids():
        signal = reference_signal(net, i, radio)
        if signal is None:
            continue
        noise = noise_at(net, jammers, i, t, radio, rng, channel_active)
        samples[i] = RadioSample(signal, noise)
    return samples


def jammed_from_samples(samples: Mapping[int, RadioSample]) -> set[int]:
    return {
        i for i, s in samples.items() if is_jammed(signal_to_noise_ratio(s))
    }


def jammed_nodes(
    net: Network,
    jammers: Iterable[Jammer],
    t: int,
    radio: RadioParams,
    rng: Random,
    channel_active: bool | None = None,
) -> set[int]:
    """Nodes whose reference reception is drowned out this step (before debounce).

    Noise only ever adds, so growing the jammer set or any jammer's power can
    never shrink this set.
    """
    return jammed_from_samples(
        sample_radio(net, jammers, t, radio, rng, channel_active)
    )


def deceptive_victims(
    net: Network,
    jammers: Iterable[Jammer],
    t: int,
    radio: RadioParams,
) -> set[int]:
    """Nodes busy receiving a deceptive jammer's fake packets this step.

    A node is a victim when some deceptive jammer's received power reaches its
    reference signal power, i.e. the fake traffic wins the channel.
    """
    deceptive = [
        j for j in jammers if j.kind is JammerKind.DECEPTIVE and t >= j.start
    ]
    if not deceptive:
        return set()
    victims: set[int] = set()
    for i in net.alive_ids():
        signal = reference_signal(net, i, radio)
        if signal is None:
            continue
        pos = net.node(i).position
        for j in deceptive:
            d = euclidean_distance(j.position, pos)
            if j.power * path_gain(d, radio.d0, radio.gamma) >= signal:
                victims.add(i)
                break
    return victims
