"""Geometric model of the sensor field: nodes, radio links, energy bookkeeping."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from enum import Enum
from random import Random
from typing import Iterable, Sequence

Position = tuple[float, float]

# (position, initial energy, radio range)
NodeSpec = tuple[Position, float, float]


class NodeRole(Enum):
    SENSOR = "sensor"
    PROCESSING_ELEMENT = "processing-element"


def euclidean_distance(a: Position, b: Position) -> float:
    """Distance between two points in the plane."""
    return math.hypot(a[0] - b[0], a[1] - b[1])


@dataclass
class Node:
    """One radio node. Exactly one node per network acts as the processing element."""

    id: int
    position: Position
    energy: float
    radio_range: float
    role: NodeRole = NodeRole.SENSOR
    alive: bool = True

    def __post_init__(self) -> None:
        if not all(math.isfinite(c) for c in self.position):
            raise ValueError(f"node {self.id}: non-finite position")
        if self.energy < 0:
            raise ValueError(f"node {self.id}: negative energy")
        if self.radio_range <= 0:
            raise ValueError(f"node {self.id}: radio range must be positive")


class Network:
    """Sensor field with symmetric links between mutually in-range nodes.

    A link (i, j) exists iff distance(i, j) <= min(range_i, range_j), so link
    existence is mutual. Links are stored as directed pairs because pheromone
    and link metrics attach per direction. Dead nodes keep their Node record
    but lose every incident link, which removes them from all neighborhoods.
    """

    def __init__(self, nodes: Iterable[Node], pe_id: int):
        self.nodes: dict[int, Node] = {}
        for node in nodes:
            if node.id in self.nodes:
                raise ValueError(f"duplicate node id {node.id}")
            self.nodes[node.id] = node
        if len(self.nodes) < 2:
            raise ValueError("a network needs at least two nodes")
        if pe_id not in self.nodes:
            raise ValueError(f"unknown processing element id {pe_id}")
        self.pe_id = pe_id
        for node in self.nodes.values():
            node.role = (
                NodeRole.PROCESSING_ELEMENT if node.id == pe_id else NodeRole.SENSOR
            )

        self.links: set[tuple[int, int]] = set()
        self.distance: dict[tuple[int, int], float] = {}
        self._adjacency: dict[int, set[int]] = {i: set() for i in self.nodes}
        ids = sorted(self.nodes)
        for a_pos, a in enumerate(ids):
            for b in ids[a_pos + 1 :]:
                na, nb = self.nodes[a], self.nodes[b]
                d = euclidean_distance(na.position, nb.position)
                if d == 0.0:
                    raise ValueError(
                        f"nodes {a} and {b} share coordinates {na.position}"
                    )
                if d <= min(na.radio_range, nb.radio_range):
                    self._add_link(a, b, d)

    def _add_link(self, a: int, b: int, d: float) -> None:
        self.links.add((a, b))
        self.links.add((b, a))
        self.distance[(a, b)] = d
        self.distance[(b, a)] = d
        self._adjacency[a].add(b)
        self._adjacency[b].add(a)

    def node(self, i: int) -> Node:
        try:
            return self.nodes[i]
        except KeyError:
            raise ValueError(f"unknown node id {i}") from None

    def neighbors(self, i: int) -> set[int]:
        """Live nodes sharing a link with i (empty for dead or isolated nodes)."""
        self.node(i)
        return set(self._adjacency[i])

    def has_link(self, i: int, j: int) -> bool:
        return (i, j) in self.links

    def link_distance(self, i: int, j: int) -> float:
        try:
            return self.distance[(i, j)]
        except KeyError:
            raise ValueError(f"no link between {i} and {j}") from None

    def alive_ids(self) -> list[int]:
        return sorted(i for i, n in self.nodes.items() if n.alive)

    @property
    def link_pairs(self) -> frozenset[tuple[int, int]]:
        """Undirected view of the link set."""
        return frozenset((a, b) for (a, b) in self.links if a < b)

    def drain_energy(self, i: int, amount: float) -> "Network":
        """Subtract energy from node i, flooring at zero.

        A node that reaches zero energy dies: its links are removed in both
        directions and it stops appearing in any neighborhood.
        """
        if amount < 0:
            raise ValueError("drain amount must be >= 0")
        node = self.node(i)
        if not node.alive:
            return self
        node.energy = max(0.0, node.energy - amount)
        if node.energy == 0.0:
            self._kill(i)
        return self

    def _kill(self, i: int) -> None:
        node = self.nodes[i]
        node.alive = False
        for j in list(self._adjacency[i]):
            self.links.discard((i, j))
            self.links.discard((j, i))
            self.distance.pop((i, j), None)
            self.distance.pop((j, i), None)
            self._adjacency[j].discard(i)
        self._adjacency[i].clear()


def build_network(node_specs: Sequence[NodeSpec], pe_index: int) -> Network:
    """Build a network from (position, energy, range) triples.

    pe_index selects the processing element by position in the list; node ids
    are assigned 0..n-1 in list order.
    """
    if len(node_specs) < 2:
        raise ValueError("need at least two node specs")
    if not 0 <= pe_index < len(node_specs):
        raise ValueError(f"pe_index {pe_index} out of range")
    nodes = [
        Node(i, (float(pos[0]), float(pos[1])), float(energy), float(radio_range))
        for i, (pos, energy, radio_range) in enumerate(node_specs)
    ]
    return Network(nodes, pe_index)


def hop_counts(net: Network, target: int, blocked: frozenset[int] = frozenset()) -> dict[int, int]:
    """Breadth-first hop distance to target over live links.

    Nodes in `blocked` are impassable and excluded. Unreachable nodes are
    absent from the result. The target maps to 0 unless itself blocked.
    """
    net.node(target)
    if target in blocked or not net.nodes[target].alive:
        return {}
    hops = {target: 0}
    queue = deque([target])
    while queue:
        cur = queue.popleft()
        for nxt in sorted(net._adjacency[cur]):
            if nxt in hops or nxt in blocked:
                continue
            hops[nxt] = hops[cur] + 1
            queue.append(nxt)
    return hops


def grid_network(
    rows: int,
    cols: int,
    spacing: float,
    radio_range: float,
    energy: float,
    pe_index: int = 0,
) -> Network:
    """Regular rows x cols grid, node id r*cols + c at (c*spacing, r*spacing)."""
    if rows < 1 or cols < 1 or rows * cols < 2:
        raise ValueError("grid needs at least two nodes")
    if spacing <= 0:
        raise ValueError("spacing must be positive")
    specs: list[NodeSpec] = []
    for r in range(rows):
        for c in range(cols):
            specs.append(((c * spacing, r * spacing), energy, radio_range))
    return build_network(specs, pe_index)


def random_geometric_network(
    count: int,
    width: float,
    height: float,
    radio_range: float,
    energy: float,
    rng: Random,
    pe_index: int = 0,
    connected: bool = False,
    max_tries: int = 200,
) -> Network:
    """Uniform random placement over a width x height rectangle.

    With connected=True, placement is redrawn until every node can reach the
    processing element (up to max_tries attempts).
    """
    if count < 2:
        raise ValueError("need at least two nodes")
    if width <= 0 or height <= 0:
        raise ValueError("area dimensions must be positive")
    for _ in range(max_tries):
        positions: list[Position] = []
        seen: set[Position] = set()
        while len(positions) < count:
            p = (rng.uniform(0.0, width), rng.uniform(0.0, height))
            if p in seen:
                continue
            seen.add(p)
            positions.append(p)
        net = build_network(
            [(p, energy, radio_range) for p in positions], pe_index
        )
        if not connected or len(hop_counts(net, net.pe_id)) == count:
            return net
    raise RuntimeError(
        f"no connected placement found in {max_tries} tries; "
        "grow radio_range or shrink the area"
    )
