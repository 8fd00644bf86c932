"""Shared builders and independent oracles for the test suite.

The oracles here deliberately reimplement behavior with different algorithms
than the package (sorted-merge gene alignment, memoized recursive network
evaluation, event recounting) so they can catch errors in the real code paths.
"""

import math

import numpy as np
import pytest

from evoswarm.genome import (ConnectionGene, Genome, HIDDEN, INPUT, NodeGene,
                             OUTPUT)


def make_genome(genome_id, nodes, connections):
    """nodes: (id, kind, bias) tuples; connections: (innov, src, tgt, w, enabled)."""
    return Genome(
        genome_id,
        {nid: NodeGene(nid, kind, bias) for nid, kind, bias in nodes},
        {inn: ConnectionGene(inn, s, t, w, e) for inn, s, t, w, e in connections},
    )


def random_genome(rng, genome_id=0, n_inputs=3, max_hidden=4, innovation_base=0):
    """A random valid genome: layered topology (guaranteed acyclic), random
    weights/biases, random enabled flags, innovation numbers with gaps."""
    n_hidden = int(rng.integers(0, max_hidden + 1))
    nodes = []
    rank = {}
    for i in range(n_inputs):
        nodes.append((i, INPUT, 0.0))
        rank[i] = 0
    out_ids = list(range(n_inputs, n_inputs + 3))
    for o in out_ids:
        nodes.append((o, OUTPUT, float(rng.normal())))
        rank[o] = 10
    hidden_ids = list(range(n_inputs + 3, n_inputs + 3 + n_hidden))
    for k, h in enumerate(hidden_ids):
        nodes.append((h, HIDDEN, float(rng.normal())))
        rank[h] = 1 + k  # distinct ranks keep hidden-to-hidden edges acyclic

    all_ids = [nid for nid, _, _ in nodes]
    connections = []
    innov = innovation_base
    seen_pairs = set()
    n_conns = int(rng.integers(1, 3 * (n_inputs + n_hidden) + 3))
    for _ in range(n_conns):
        src = all_ids[rng.integers(len(all_ids))]
        tgt = all_ids[rng.integers(len(all_ids))]
        if rank[src] >= rank[tgt] or (src, tgt) in seen_pairs:
            continue
        seen_pairs.add((src, tgt))
        innov += int(rng.integers(1, 4))  # gaps exercise disjoint/excess logic
        connections.append((innov, src, tgt, float(rng.normal()),
                            bool(rng.random() < 0.85)))
    return make_genome(genome_id, nodes, connections)


def related_genome_pair(rng, n_inputs=3):
    """Two genomes sharing ancestry: matching innovations with diverged
    parameters plus some private structure on each side."""
    a = random_genome(rng, 0, n_inputs=n_inputs)
    b_nodes = {nid: NodeGene(n.id, n.kind, n.bias + float(rng.normal(0, 0.5)))
               if n.kind != INPUT else NodeGene(n.id, n.kind, 0.0)
               for nid, n in a.nodes.items()}
    b_conns = {}
    for inn, c in a.connections.items():
        if rng.random() < 0.7:  # shared gene, diverged weight
            b_conns[inn] = ConnectionGene(inn, c.source, c.target,
                                          c.weight + float(rng.normal(0, 0.5)),
                                          bool(rng.random() < 0.9))
    b = Genome(1, b_nodes, b_conns)
    # private extension on b: a fresh hidden node fed from an input
    if a.connections and rng.random() < 0.7:
        new_id = max(b_nodes) + 1
        b.nodes[new_id] = NodeGene(new_id, HIDDEN, float(rng.normal()))
        top = max(list(a.connections) + [0])
        b.connections[top + 2] = ConnectionGene(top + 2, 0, new_id, float(rng.normal()), True)
    return a, b


# --- independent genetic-distance oracle -------------------------------------

def _aligned_counts(a_items, b_items):
    """Sorted-merge walk over (key -> parameter) maps.

    Returns (n_matching, sum_abs_diff, disjoint, excess) per the convention:
    a key beyond the other side's maximum key is excess, otherwise disjoint.
    """
    a_keys = sorted(a_items)
    b_keys = sorted(b_items)
    a_max = a_keys[-1] if a_keys else None
    b_max = b_keys[-1] if b_keys else None
    matching = 0
    diff = 0.0
    disjoint = 0
    excess = 0
    i = j = 0
    while i < len(a_keys) or j < len(b_keys):
        if j >= len(b_keys) or (i < len(a_keys) and a_keys[i] < b_keys[j]):
            key = a_keys[i]
            i += 1
            if b_max is None or key > b_max:
                excess += 1
            else:
                disjoint += 1
        elif i >= len(a_keys) or b_keys[j] < a_keys[i]:
            key = b_keys[j]
            j += 1
            if a_max is None or key > a_max:
                excess += 1
            else:
                disjoint += 1
        else:
            matching += 1
            diff += abs(a_items[a_keys[i]] - b_items[b_keys[j]])
            i += 1
            j += 1
    return matching, diff, disjoint, excess


def distance_oracle(a, b, c1=1.0, c2=1.0, c3=0.6):
    a_conns = {c.innovation: c.weight for c in a.connections.values()}
    b_conns = {c.innovation: c.weight for c in b.connections.values()}
    a_nodes = {n.id: n.bias for n in a.nodes.values() if n.kind != INPUT}
    b_nodes = {n.id: n.bias for n in b.nodes.values() if n.kind != INPUT}
    m1, d1, dis1, exc1 = _aligned_counts(a_conns, b_conns)
    m2, d2, dis2, exc2 = _aligned_counts(a_nodes, b_nodes)
    matching = m1 + m2
    wbar = (d1 + d2) / matching if matching else 0.0
    disjoint = dis1 + dis2
    excess = exc1 + exc2
    maxlen = max(len(a_conns) + len(a_nodes), len(b_conns) + len(b_nodes))
    if maxlen == 0:
        return 0.0
    return c1 * excess / maxlen + c2 * disjoint / maxlen + c3 * wbar


# --- independent network evaluator --------------------------------------------

def recursive_activation(genome, obs):
    """Memoized recursion straight over the genome (no decode step)."""

    def phi(x):
        t = -4.9 * x
        if t > 700.0:
            t = 700.0
        return 1.0 / (1.0 + math.exp(t))

    input_ids = genome.input_ids()
    input_index = {nid: i for i, nid in enumerate(input_ids)}
    incoming = {}
    for c in genome.connections.values():
        if c.enabled:
            incoming.setdefault(c.target, []).append((c.source, c.weight))
    cache = {}

    def value(nid):
        if nid in cache:
            return cache[nid]
        node = genome.nodes[nid]
        if node.kind == INPUT:
            result = float(obs[input_index[nid]])
        else:
            z = node.bias
            for src, w in sorted(incoming.get(nid, [])):
                z += w * value(src)
            result = phi(z)
        cache[nid] = result
        return result

    return np.array([value(o) for o in genome.output_ids()])


def recount_reward(events):
    """Reward table applied to an event stream, independent of the arena."""
    table = {"pickup-target": 1, "pickup-wrong": -1,
             "delivery-target": 2, "delivery-wrong": 0}
    return sum(table[e.kind] for e in events)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
