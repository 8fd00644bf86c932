"""Genetic distance: hand-aligned cases, symmetry, and oracle equivalence."""

import numpy as np
import pytest

from evoswarm.genome import DistanceConfig, genetic_distance, INPUT
from conftest import distance_oracle, make_genome, random_genome, related_genome_pair


def connection_only(genome_id, conns):
    """Genomes whose countable genes are connections only (all nodes inputs)."""
    node_ids = sorted({c[1] for c in conns} | {c[2] for c in conns})
    return make_genome(genome_id, [(n, INPUT, 0.0) for n in node_ids], conns)


def test_identical_genome_distance_zero(rng):
    for k in range(20):
        g = random_genome(rng, k)
        assert genetic_distance(g, g) == 0.0


def test_hand_aligned_example():
    # a: innovations {1, 2}; b: innovations {1, 3}
    # innovation 2 is disjoint (within b's range), 3 is excess; the matching
    # gene differs by 0.5; both genomes count 2 genes.
    a = connection_only(0, [(1, 0, 1, 0.5, True), (2, 0, 2, -0.5, True)])
    b = connection_only(1, [(1, 0, 1, 1.0, True), (3, 1, 2, 0.2, True)])
    expected = 1.0 * 1 / 2 + 1.0 * 1 / 2 + 0.6 * 0.5
    assert genetic_distance(a, b) == pytest.approx(1.3, abs=1e-12)
    assert genetic_distance(a, b) == pytest.approx(expected, abs=0)


def test_same_topology_weight_shift(rng):
    for d in (0.25, 1.0, 2.5):
        g = random_genome(rng, 0, n_inputs=4)
        shifted = g.copy(new_id=1)
        for c in shifted.connections.values():
            c.weight += d
        for n in shifted.nodes.values():
            if n.kind != INPUT:
                n.bias += d
        assert genetic_distance(g, shifted) == pytest.approx(0.6 * d, abs=1e-12)


def test_symmetry_and_nonnegativity(rng):
    cfg = DistanceConfig()
    for k in range(1000):
        if k % 2 == 0:
            a, b = related_genome_pair(rng)
        else:
            a = random_genome(rng, 0, innovation_base=int(rng.integers(0, 5)))
            b = random_genome(rng, 1, innovation_base=int(rng.integers(0, 5)))
        d_ab = genetic_distance(a, b, cfg)
        d_ba = genetic_distance(b, a, cfg)
        assert d_ab >= 0.0
        assert d_ab == d_ba


def test_oracle_equivalence(rng):
    cfg = DistanceConfig()
    for k in range(1000):
        if k % 2 == 0:
            a, b = related_genome_pair(rng)
        else:
            a = random_genome(rng, 0, innovation_base=int(rng.integers(0, 5)))
            b = random_genome(rng, 1, innovation_base=int(rng.integers(0, 5)))
        assert genetic_distance(a, b, cfg) == pytest.approx(distance_oracle(a, b), abs=1e-12)


def test_disabled_connections_count(rng):
    # disabled genes keep their innovation markers: they still align and
    # contribute weight differences
    a = connection_only(0, [(1, 0, 1, 2.0, False)])
    b = connection_only(1, [(1, 0, 1, -2.0, True)])
    assert genetic_distance(a, b) == pytest.approx(0.6 * 4.0, abs=1e-12)


def test_custom_coefficients():
    a = connection_only(0, [(1, 0, 1, 0.5, True), (2, 0, 2, -0.5, True)])
    b = connection_only(1, [(1, 0, 1, 1.0, True), (3, 1, 2, 0.2, True)])
    cfg = DistanceConfig(c1=2.0, c2=0.5, c3=1.0)
    assert genetic_distance(a, b, cfg) == pytest.approx(2.0 * 0.5 + 0.5 * 0.5 + 1.0 * 0.5, abs=1e-12)
