"""Phenotype decoding and activation against a recursive oracle."""

import math

import numpy as np
import pytest

from evoswarm.errors import StructureError
from evoswarm.genome import HIDDEN, INPUT, OUTPUT, genome_from_text, genome_to_text
from evoswarm.network import activate, decode, steep_sigmoid, to_wheel_velocities
from conftest import make_genome, random_genome, recursive_activation


class TestSigmoid:
    def test_midpoint(self):
        assert steep_sigmoid(0.0) == 0.5

    def test_unit_input(self):
        assert steep_sigmoid(1.0) == pytest.approx(0.992609, abs=1e-6)

    def test_monotonic(self, rng):
        # strict in the non-saturated range; beyond |x| ~ 7.5 float64 rounds
        # the output to exactly 0.0 / 1.0
        xs = np.sort(rng.uniform(-3, 3, 200))
        ys = [steep_sigmoid(x) for x in xs]
        assert all(a < b for a, b in zip(ys, ys[1:]))
        assert steep_sigmoid(-50.0) <= steep_sigmoid(50.0)

    def test_extremes_stay_finite(self):
        assert steep_sigmoid(-1e6) >= 0.0
        assert steep_sigmoid(1e6) <= 1.0


class TestDecode:
    def test_bias_only_when_no_enabled_connections(self):
        g = make_genome(0, [(0, INPUT, 0.0), (1, OUTPUT, 0.3), (2, OUTPUT, -0.7),
                            (3, OUTPUT, 0.0)],
                        [(0, 0, 1, 2.0, False)])
        out = activate(decode(g), np.array([0.9]))
        expected = [steep_sigmoid(0.3), steep_sigmoid(-0.7), steep_sigmoid(0.0)]
        assert out == pytest.approx(expected, abs=0)

    def test_unreachable_hidden_node_still_evaluates(self):
        g = make_genome(0, [(0, INPUT, 0.0), (4, HIDDEN, 1.2), (1, OUTPUT, 0.0),
                            (2, OUTPUT, 0.0), (3, OUTPUT, 0.0)],
                        [(0, 4, 1, 1.0, True)])
        out = activate(decode(g), np.array([0.0]))
        assert out[0] == pytest.approx(steep_sigmoid(steep_sigmoid(1.2)), abs=1e-15)

    def test_hand_built_two_input_network(self):
        g = make_genome(0, [(0, INPUT, 0.0), (1, INPUT, 0.0), (2, OUTPUT, 0.25),
                            (3, OUTPUT, 0.0), (4, OUTPUT, 0.0)],
                        [(0, 0, 2, 1.5, True), (1, 1, 2, -2.0, True)])
        obs = np.array([0.8, 0.3])
        out = activate(decode(g), obs)
        assert out[0] == pytest.approx(steep_sigmoid(0.25 + 1.5 * 0.8 - 2.0 * 0.3), abs=1e-15)

    def test_decode_deterministic_and_round_trip_equivalent(self, rng):
        for k in range(30):
            g = random_genome(rng, k)
            p1 = decode(g)
            p2 = decode(genome_from_text(genome_to_text(g))[0])
            obs = rng.uniform(0, 1, p1.input_width)
            assert np.array_equal(p1.activate_batch(obs[None, :]),
                                  p2.activate_batch(obs[None, :]))

    def test_cycle_raises_structure_error(self):
        g = make_genome(0, [(0, INPUT, 0.0), (4, HIDDEN, 0.0), (5, HIDDEN, 0.0),
                            (1, OUTPUT, 0.0), (2, OUTPUT, 0.0), (3, OUTPUT, 0.0)],
                        [(0, 4, 5, 1.0, True), (1, 5, 4, 1.0, True)])
        with pytest.raises(StructureError):
            decode(g)

    def test_output_order_is_ascending_node_id(self):
        g = make_genome(0, [(0, INPUT, 0.0), (5, OUTPUT, 1.0), (6, OUTPUT, 2.0),
                            (7, OUTPUT, 3.0)], [])
        out = activate(decode(g), np.array([0.0]))
        assert list(out) == [steep_sigmoid(1.0), steep_sigmoid(2.0), steep_sigmoid(3.0)]


class TestActivate:
    def test_matches_recursive_oracle_on_random_genomes(self, rng):
        for k in range(500):
            g = random_genome(rng, k, n_inputs=int(rng.integers(1, 6)))
            p = decode(g)
            obs = rng.uniform(0, 1, p.input_width)
            got = activate(p, obs)
            want = recursive_activation(g, obs)
            assert got == pytest.approx(want, abs=1e-12)

    def test_deterministic_bit_identical(self, rng):
        g = random_genome(rng, 0)
        p = decode(g)
        obs = rng.uniform(0, 1, p.input_width)
        a = activate(p, obs)
        b = activate(p, obs)
        assert np.array_equal(a, b)

    def test_outputs_in_unit_interval(self, rng):
        for k in range(100):
            g = random_genome(rng, k)
            p = decode(g)
            out = activate(p, rng.uniform(0, 1, p.input_width))
            assert np.all(out > 0.0) and np.all(out < 1.0)

    def test_batch_matches_single(self, rng):
        g = random_genome(rng, 0, n_inputs=4)
        p = decode(g)
        obs = rng.uniform(0, 1, (6, 4))
        batch = p.activate_batch(obs)
        for i in range(6):
            assert np.array_equal(batch[i], activate(p, obs[i]))

    def test_wrong_width_raises(self, rng):
        g = random_genome(rng, 0, n_inputs=4)
        with pytest.raises(ValueError):
            activate(decode(g), np.zeros(5))


class TestWheelVelocities:
    def test_midpoint_is_rest(self):
        assert list(to_wheel_velocities((0.5, 0.5, 0.5), 2.0)) == [0.0, 0.0, 0.0]

    def test_affine_map(self):
        assert list(to_wheel_velocities((0.75, 0.25, 0.5), 2.0)) == [1.0, -1.0, 0.0]

    def test_saturation_approaches_vmax(self):
        for raw, expected in [(0.999999, 2.0), (1e-6, -2.0)]:
            v = to_wheel_velocities((raw,) * 3, 2.0)
            assert np.all(np.abs(v - expected) < 1e-4)
            assert np.all(np.abs(v) <= 2.0)

    def test_range_preserved(self, rng):
        raw = rng.uniform(0, 1, (50, 3))
        v = to_wheel_velocities(raw, 2.0)
        assert np.all(v >= -2.0) and np.all(v <= 2.0)
