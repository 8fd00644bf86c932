"""Genome operations: initialization, mutation, crossover, serialization."""

import math

import numpy as np
import pytest

from evoswarm.config import NeatConfig
from evoswarm.errors import ConfigError
from evoswarm.genome import (HIDDEN, INPUT, OUTPUT, InnovationRegistry, crossover,
                             genome_from_text, genome_to_text, initial_population_genomes,
                             is_acyclic, mutate)
from conftest import make_genome, random_genome


def zero_rate_config(**overrides):
    params = dict(node_add_prob=0.0, node_delete_prob=0.0, conn_add_prob=0.0,
                  conn_delete_prob=0.0, weight_mutate_rate=0.0, weight_replace_rate=0.0,
                  bias_mutate_rate=0.0, bias_replace_rate=0.0, enabled_mutate_rate=0.0)
    params.update(overrides)
    return NeatConfig(**params)


class TestInitialPopulation:
    def test_node_counts(self, rng):
        genomes = initial_population_genomes(rng, 41, 30, InnovationRegistry())
        assert len(genomes) == 30
        for g in genomes:
            assert len(g.input_ids()) == 41
            assert len(g.hidden_ids()) == 1
            assert len(g.output_ids()) == 3
            assert is_acyclic(g)

    def test_same_seed_identical(self):
        a = initial_population_genomes(np.random.default_rng(7), 5, 4, InnovationRegistry())
        b = initial_population_genomes(np.random.default_rng(7), 5, 4, InnovationRegistry())
        assert [genome_to_text(g) for g in a] == [genome_to_text(g) for g in b]

    def test_enabled_connection_rate_binomial(self):
        # eligible pairs per genome: 5*1 + 5*3 + 1*3 = 23; 1000 genomes
        rng = np.random.default_rng(11)
        genomes = initial_population_genomes(rng, 5, 1000, InnovationRegistry())
        total = sum(len(g.connections) for g in genomes)
        n = 23 * 1000
        expectation = 0.5 * n
        sigma = math.sqrt(n * 0.25)
        assert abs(total - expectation) <= 3 * sigma

    def test_values_clamped_and_inputs_unbiased(self, rng):
        genomes = initial_population_genomes(rng, 8, 50, InnovationRegistry())
        for g in genomes:
            for n in g.nodes.values():
                if n.kind == INPUT:
                    assert n.bias == 0.0
                else:
                    assert -5.0 <= n.bias <= 5.0
            for c in g.connections.values():
                assert -5.0 <= c.weight <= 5.0

    def test_shared_innovation_numbering(self, rng):
        genomes = initial_population_genomes(rng, 4, 20, InnovationRegistry())
        by_pair = {}
        for g in genomes:
            for c in g.connections.values():
                key = (c.source, c.target)
                assert by_pair.setdefault(key, c.innovation) == c.innovation

    def test_invalid_arguments(self, rng):
        with pytest.raises(ConfigError):
            initial_population_genomes(rng, 0, 10, InnovationRegistry())
        with pytest.raises(ConfigError):
            initial_population_genomes(rng, 5, 1, InnovationRegistry())


class TestInnovationRegistry:
    def test_memo_within_generation(self):
        reg = InnovationRegistry()
        assert reg.connection_innovation(3, 7) == reg.connection_innovation(3, 7)
        first = reg.connection_innovation(3, 7)
        reg.new_generation()
        assert reg.connection_innovation(3, 7) != first

    def test_split_memo(self):
        reg = InnovationRegistry(next_innovation=10, next_node_id=50)
        a = reg.split(4, 1, 2)
        b = reg.split(4, 1, 2)
        assert a == b
        reg.new_generation()
        c = reg.split(4, 1, 2)
        assert c != a

    def test_counter_strictly_increases(self):
        reg = InnovationRegistry()
        seen = []
        for pair in [(0, 1), (1, 2), (0, 2), (2, 3)]:
            seen.append(reg.connection_innovation(*pair))
        assert seen == sorted(seen) and len(set(seen)) == len(seen)


class TestMutate:
    def test_zero_rates_identity(self, rng):
        g = random_genome(rng, 5)
        out = mutate(g, InnovationRegistry(next_innovation=1000, next_node_id=1000),
                     rng, zero_rate_config())
        assert genome_to_text(out) == genome_to_text(g)

    def test_add_node_splits_connection(self, rng):
        g = make_genome(0, [(0, INPUT, 0.0), (1, OUTPUT, 0.1), (2, OUTPUT, 0.2), (3, OUTPUT, 0.3)],
                        [(0, 0, 1, 1.5, True)])
        reg = InnovationRegistry(next_innovation=10, next_node_id=10)
        out = mutate(g, reg, rng, zero_rate_config(node_add_prob=1.0))
        assert not out.connections[0].enabled
        new_hidden = out.hidden_ids()
        assert len(new_hidden) == 1
        h = new_hidden[0]
        incoming = [c for c in out.connections.values() if c.target == h]
        outgoing = [c for c in out.connections.values() if c.source == h]
        assert len(incoming) == 1 and incoming[0].weight == 1.0 and incoming[0].source == 0
        assert len(outgoing) == 1 and outgoing[0].weight == 1.5 and outgoing[0].target == 1
        assert incoming[0].innovation >= 10 and outgoing[0].innovation >= 10

    def test_add_node_rate_binomial(self):
        rng = np.random.default_rng(3)
        cfg = zero_rate_config(node_add_prob=0.2)
        reg = InnovationRegistry(next_innovation=100, next_node_id=100)
        base = random_genome(np.random.default_rng(1), 0)
        hits = 0
        trials = 10000
        for k in range(trials):
            reg.new_generation()
            out = mutate(base, reg, rng, cfg)
            if len(out.nodes) > len(base.nodes):
                hits += 1
        sigma = math.sqrt(trials * 0.2 * 0.8)
        assert abs(hits - 0.2 * trials) <= 3 * sigma

    def test_acyclic_and_bounded_after_mutation_chain(self, rng):
        cfg = NeatConfig()
        reg = InnovationRegistry(next_innovation=1000, next_node_id=1000)
        g = random_genome(rng, 0, n_inputs=4)
        for step in range(300):
            if step % 10 == 0:
                reg.new_generation()
            g = mutate(g, reg, rng, cfg)
            assert is_acyclic(g)
            pairs = [(c.source, c.target) for c in g.connections.values()]
            assert len(pairs) == len(set(pairs))
            for c in g.connections.values():
                assert -5.0 <= c.weight <= 5.0
            for n in g.nodes.values():
                assert -5.0 <= n.bias <= 5.0 and (n.kind != INPUT or n.bias == 0.0)

    def test_delete_node_spares_inputs_and_outputs(self, rng):
        cfg = zero_rate_config(node_delete_prob=1.0)
        reg = InnovationRegistry(next_innovation=1000, next_node_id=1000)
        g = random_genome(rng, 0)
        n_in, n_out = len(g.input_ids()), len(g.output_ids())
        for _ in range(50):
            g = mutate(g, reg, rng, cfg)
            assert len(g.input_ids()) == n_in
            assert len(g.output_ids()) == n_out

    def test_same_structural_mutation_same_innovation(self, rng):
        base = make_genome(0, [(0, INPUT, 0.0), (1, OUTPUT, 0.1), (2, OUTPUT, 0.2), (3, OUTPUT, 0.3)],
                           [(0, 0, 1, 1.5, True)])
        reg = InnovationRegistry(next_innovation=10, next_node_id=10)
        cfg = zero_rate_config(node_add_prob=1.0)
        a = mutate(base, reg, rng, cfg)
        b = mutate(base.copy(new_id=1), reg, rng, cfg)
        # both split the only connection within the same generation
        assert sorted(a.connections) == sorted(b.connections)
        assert a.hidden_ids() == b.hidden_ids()


class TestCrossover:
    def test_identical_parents(self, rng):
        g = random_genome(rng, 0)
        child = crossover(g, g.copy(new_id=1), rng, 2)
        assert child.nodes == g.nodes
        assert child.connections == g.connections
        assert child.id == 2

    def test_disjoint_from_fitter_only(self, rng):
        nodes = [(0, INPUT, 0.0), (1, OUTPUT, 0.0), (2, OUTPUT, 0.0), (3, OUTPUT, 0.0)]
        fitter = make_genome(0, nodes, [(1, 0, 1, 1.0, True), (2, 0, 2, 1.0, True)])
        other = make_genome(1, nodes, [(1, 0, 1, -1.0, True), (3, 0, 3, -1.0, True)])
        for _ in range(20):
            child = crossover(fitter, other, rng, 5)
            assert set(child.connections) == {1, 2}

    def test_both_disabled_stays_disabled(self, rng):
        nodes = [(0, INPUT, 0.0), (1, OUTPUT, 0.0), (2, OUTPUT, 0.0), (3, OUTPUT, 0.0)]
        a = make_genome(0, nodes, [(1, 0, 1, 1.0, False)])
        b = make_genome(1, nodes, [(1, 0, 1, -1.0, False)])
        for _ in range(20):
            assert not crossover(a, b, rng, 5).connections[1].enabled

    def test_matching_weights_from_either_parent(self, rng):
        nodes = [(0, INPUT, 0.0), (1, OUTPUT, 0.0), (2, OUTPUT, 0.0), (3, OUTPUT, 0.0)]
        a = make_genome(0, nodes, [(1, 0, 1, 1.0, True)])
        b = make_genome(1, nodes, [(1, 0, 1, -1.0, True)])
        weights = {crossover(a, b, rng, 5).connections[1].weight for _ in range(60)}
        assert weights == {1.0, -1.0}

    def test_child_acyclic_even_with_reenabled_genes(self, rng):
        # fitter has a disabled back-edge plus an enabled path; the other
        # parent enables the back-edge; the child must stay acyclic
        nodes = [(0, INPUT, 0.0), (4, HIDDEN, 0.0), (5, HIDDEN, 0.0),
                 (1, OUTPUT, 0.0), (2, OUTPUT, 0.0), (3, OUTPUT, 0.0)]
        fitter = make_genome(0, nodes, [
            (1, 4, 5, 1.0, True), (2, 5, 4, 1.0, False), (3, 0, 4, 1.0, True)])
        other = make_genome(1, nodes, [
            (1, 4, 5, 1.0, False), (2, 5, 4, 1.0, True), (3, 0, 4, 1.0, True)])
        for _ in range(50):
            assert is_acyclic(crossover(fitter, other, rng, 5))


class TestSerialization:
    def test_round_trip_bit_exact(self, rng):
        for k in range(100):
            g = random_genome(rng, k)
            text = genome_to_text(g, generation=7, task_id="red", fitness=1.25)
            parsed, meta = genome_from_text(text)
            assert genome_to_text(parsed, generation=7, task_id="red", fitness=1.25) == text
            assert parsed == g
            assert meta == {"generation": 7, "task_id": "red", "fitness": 1.25}

    def test_missing_meta_fields(self):
        g = make_genome(3, [(0, INPUT, 0.0), (1, OUTPUT, -0.5), (2, OUTPUT, 0.5), (4, OUTPUT, 0.0)],
                        [(0, 0, 1, 1.0, True)])
        text = genome_to_text(g)
        parsed, meta = genome_from_text(text)
        assert parsed == g
        assert meta == {"generation": None, "task_id": None, "fitness": None}

    def test_extreme_floats_round_trip(self):
        g = make_genome(0, [(0, INPUT, 0.0), (1, OUTPUT, 1e-17), (2, OUTPUT, -4.999999999999999),
                            (3, OUTPUT, 0.1 + 0.2)],
                        [(0, 0, 1, 1 / 3, True)])
        parsed, _ = genome_from_text(genome_to_text(g))
        assert parsed.nodes[3].bias == 0.1 + 0.2
        assert parsed.connections[0].weight == 1 / 3
