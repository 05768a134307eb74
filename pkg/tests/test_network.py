import math
from random import Random

import pytest

from antjam.network import (
    Network,
    Node,
    build_network,
    euclidean_distance,
    grid_network,
    hop_counts,
    random_geometric_network,
)


class TestDistance:
    def test_three_four_five(self):
        assert euclidean_distance((0.0, 0.0), (3.0, 4.0)) == 5.0

    def test_symmetry(self):
        rng = Random(11)
        for _ in range(100):
            a = (rng.uniform(-50, 50), rng.uniform(-50, 50))
            b = (rng.uniform(-50, 50), rng.uniform(-50, 50))
            assert euclidean_distance(a, b) == euclidean_distance(b, a)
            assert euclidean_distance(a, a) == 0.0


class TestBuildNetwork:
    def test_unit_square_has_four_side_links(self, unit_square):
        assert unit_square.link_pairs == frozenset(
            {(0, 1), (1, 2), (2, 3), (0, 3)}
        )
        # diagonals are sqrt(2) > 1.2 apart
        assert not unit_square.has_link(0, 2)
        assert not unit_square.has_link(1, 3)

    def test_link_needs_mutual_range(self):
        # node 1 can hear node 0 but not vice versa: no link
        net = build_network(
            [((0.0, 0.0), 10.0, 0.5), ((1.0, 0.0), 10.0, 5.0)], 1
        )
        assert net.link_pairs == frozenset()

    def test_distances_symmetric_and_positive(self, unit_square):
        for (i, j) in unit_square.links:
            d = unit_square.link_distance(i, j)
            assert d > 0
            assert d == unit_square.link_distance(j, i)

    def test_neighbors_match_links(self, unit_square):
        for i in unit_square.nodes:
            for j in unit_square.neighbors(i):
                assert unit_square.has_link(i, j)
        assert unit_square.neighbors(0) == {1, 3}

    def test_coincident_positions_rejected(self):
        with pytest.raises(ValueError, match="share coordinates"):
            build_network(
                [((1.0, 2.0), 10.0, 1.0), ((1.0, 2.0), 10.0, 1.0)], 0
            )

    def test_single_node_rejected(self):
        with pytest.raises(ValueError):
            build_network([((0.0, 0.0), 10.0, 1.0)], 0)

    def test_bad_pe_index_rejected(self):
        specs = [((0.0, 0.0), 10.0, 1.0), ((1.0, 0.0), 10.0, 1.0)]
        with pytest.raises(ValueError):
            build_network(specs, 5)

    def test_single_processing_element(self, unit_square):
        roles = [n.role.value for n in unit_square.nodes.values()]
        assert roles.count("processing-element") == 1
        assert unit_square.nodes[2].role.value == "processing-element"

    def test_node_validation(self):
        with pytest.raises(ValueError):
            Node(0, (0.0, 0.0), -1.0, 1.0)
        with pytest.raises(ValueError):
            Node(0, (0.0, 0.0), 1.0, 0.0)
        with pytest.raises(ValueError):
            Node(0, (math.nan, 0.0), 1.0, 1.0)

    def test_unknown_node_id(self, unit_square):
        with pytest.raises(ValueError, match="unknown node id"):
            unit_square.neighbors(99)


class TestDrainEnergy:
    def test_energy_floors_at_zero(self, unit_square):
        unit_square.drain_energy(0, 1e9)
        assert unit_square.nodes[0].energy == 0.0

    def test_energy_monotone_nonincreasing(self, unit_square):
        rng = Random(5)
        previous = unit_square.nodes[1].energy
        for _ in range(50):
            unit_square.drain_energy(1, rng.uniform(0, 5))
            now = unit_square.nodes[1].energy
            assert now <= previous
            previous = now

    def test_dead_node_leaves_all_neighborhoods(self, unit_square):
        unit_square.drain_energy(1, 100.0)
        assert not unit_square.nodes[1].alive
        for i in unit_square.nodes:
            assert 1 not in unit_square.neighbors(i)
        assert unit_square.neighbors(1) == set()
        assert not unit_square.has_link(0, 1)
        assert not unit_square.has_link(1, 2)

    def test_negative_drain_rejected(self, unit_square):
        with pytest.raises(ValueError):
            unit_square.drain_energy(0, -1.0)

    def test_partial_drain_keeps_links(self, unit_square):
        unit_square.drain_energy(1, 99.5)
        assert unit_square.nodes[1].alive
        assert unit_square.has_link(0, 1)


class TestHopCounts:
    def test_line(self, line3):
        assert hop_counts(line3, 2) == {2: 0, 1: 1, 0: 2}

    def test_blocked_node_cuts_path(self, line3):
        counts = hop_counts(line3, 2, blocked=frozenset({1}))
        assert counts == {2: 0}

    def test_dead_node_cuts_path(self, line3):
        line3.drain_energy(1, 100.0)
        assert hop_counts(line3, 2) == {2: 0}


class TestGenerators:
    def test_grid_shape(self):
        net = grid_network(3, 4, 10.0, 12.0, 50.0, pe_index=11)
        assert len(net.nodes) == 12
        assert net.nodes[5].position == (10.0, 10.0)  # row 1, col 1
        assert net.pe_id == 11
        # interior node has 4 orthogonal neighbors at range 12 < 10*sqrt(2)
        assert net.neighbors(5) == {1, 4, 6, 9}

    def test_random_reproducible(self):
        a = random_geometric_network(12, 100.0, 100.0, 40.0, 50.0, Random(3))
        b = random_geometric_network(12, 100.0, 100.0, 40.0, 50.0, Random(3))
        assert [a.nodes[i].position for i in a.nodes] == [
            b.nodes[i].position for i in b.nodes
        ]
        assert a.link_pairs == b.link_pairs

    def test_random_connected_flag(self):
        net = random_geometric_network(
            10, 100.0, 100.0, 45.0, 50.0, Random(9), connected=True
        )
        assert len(hop_counts(net, net.pe_id)) == 10

    def test_random_respects_bounds(self):
        net = random_geometric_network(20, 30.0, 60.0, 10.0, 50.0, Random(1))
        for node in net.nodes.values():
            x, y = node.position
            assert 0.0 <= x <= 30.0
            assert 0.0 <= y <= 60.0

    def test_links_mutual_on_random_nets(self):
        # the link rule distance <= min(range) is symmetric by construction;
        # spot-check on heterogeneous ranges
        rng = Random(17)
        specs = [
            ((rng.uniform(0, 50), rng.uniform(0, 50)), 10.0, rng.uniform(5, 30))
            for _ in range(15)
        ]
        net = build_network(specs, 0)
        for (i, j) in net.links:
            assert (j, i) in net.links
            d = euclidean_distance(net.nodes[i].position, net.nodes[j].position)
            assert d <= min(net.nodes[i].radio_range, net.nodes[j].radio_range)
