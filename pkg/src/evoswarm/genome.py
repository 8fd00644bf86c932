"""Genetic substrate: genomes, innovation tracking, mutation, crossover, distance.

A genome encodes a feedforward controller as node genes (bias parameters) and
connection genes tagged with global innovation numbers.  All structural
operations preserve two invariants: the graph formed by *enabled* connections
is acyclic, and (source, target) pairs are unique per genome.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ConfigError

INPUT = "input"
HIDDEN = "hidden"
OUTPUT = "output"

NUM_OUTPUTS = 3  # wheel velocities


@dataclass
class NodeGene:
    id: int
    kind: str  # input | hidden | output
    bias: float  # fixed at 0.0 for input nodes

    def copy(self) -> "NodeGene":
        return NodeGene(self.id, self.kind, self.bias)


@dataclass
class ConnectionGene:
    innovation: int
    source: int
    target: int
    weight: float
    enabled: bool

    def copy(self) -> "ConnectionGene":
        return ConnectionGene(self.innovation, self.source, self.target, self.weight, self.enabled)


@dataclass
class Genome:
    """Nodes keyed by id, connections keyed by innovation number."""

    id: int
    nodes: dict[int, NodeGene]
    connections: dict[int, ConnectionGene]

    def copy(self, new_id: int | None = None) -> "Genome":
        return Genome(
            self.id if new_id is None else new_id,
            {nid: n.copy() for nid, n in sorted(self.nodes.items())},
            {inn: c.copy() for inn, c in sorted(self.connections.items())},
        )

    def input_ids(self) -> list[int]:
        return sorted(n.id for n in self.nodes.values() if n.kind == INPUT)

    def output_ids(self) -> list[int]:
        return sorted(n.id for n in self.nodes.values() if n.kind == OUTPUT)

    def hidden_ids(self) -> list[int]:
        return sorted(n.id for n in self.nodes.values() if n.kind == HIDDEN)

    def connection_pairs(self) -> set[tuple[int, int]]:
        return {(c.source, c.target) for c in self.connections.values()}

    def enabled_adjacency(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {nid: [] for nid in self.nodes}
        for c in sorted(self.connections.values(), key=lambda c: c.innovation):
            if c.enabled:
                adj[c.source].append(c.target)
        return adj


def creates_cycle(genome: Genome, source: int, target: int) -> bool:
    """True if adding an enabled source->target edge would close a cycle."""
    if source == target:
        return True
    adj = genome.enabled_adjacency()
    stack = [target]
    seen = set()
    while stack:
        node = stack.pop()
        if node == source:
            return True
        if node in seen:
            continue
        seen.add(node)
        stack.extend(adj.get(node, ()))
    return False


def is_acyclic(genome: Genome) -> bool:
    adj = genome.enabled_adjacency()
    state: dict[int, int] = {}  # 0 visiting, 1 done

    def visit(node: int) -> bool:
        state[node] = 0
        for nxt in adj.get(node, ()):
            s = state.get(nxt)
            if s == 0:
                return False
            if s is None and not visit(nxt):
                return False
        state[node] = 1
        return True

    return all(visit(nid) for nid in sorted(adj) if nid not in state)


class InnovationRegistry:
    """Allocates innovation numbers and node ids.

    Identical structural mutations within one generation receive identical
    numbers; `new_generation()` clears the memo so later rediscoveries of the
    same structure get fresh markers.
    """

    def __init__(self, next_innovation: int = 0, next_node_id: int = 0):
        self.next_innovation = next_innovation
        self.next_node_id = next_node_id
        self._conn_memo: dict[tuple[int, int], int] = {}
        self._split_memo: dict[int, tuple[int, int, int]] = {}

    def new_generation(self) -> None:
        self._conn_memo.clear()
        self._split_memo.clear()

    def connection_innovation(self, source: int, target: int) -> int:
        key = (source, target)
        if key not in self._conn_memo:
            self._conn_memo[key] = self.next_innovation
            self.next_innovation += 1
        return self._conn_memo[key]

    def split(self, connection_innovation: int, source: int, target: int) -> tuple[int, int, int]:
        """Returns (new node id, incoming innovation, outgoing innovation) for a node split."""
        if connection_innovation not in self._split_memo:
            node_id = self.next_node_id
            self.next_node_id += 1
            in_inn = self.connection_innovation(source, node_id)
            out_inn = self.connection_innovation(node_id, target)
            self._split_memo[connection_innovation] = (node_id, in_inn, out_inn)
        return self._split_memo[connection_innovation]

    def state(self) -> dict:
        return {"next_innovation": self.next_innovation, "next_node_id": self.next_node_id}

    @classmethod
    def from_state(cls, state: dict) -> "InnovationRegistry":
        return cls(state["next_innovation"], state["next_node_id"])


@dataclass
class DistanceConfig:
    c1: float = 1.0  # excess
    c2: float = 1.0  # disjoint
    c3: float = 0.6  # mean parameter difference of matching genes

    def __post_init__(self):
        if min(self.c1, self.c2, self.c3) < 0:
            raise ConfigError("distance coefficients must be non-negative")


def _align(a_keys, b_keys):
    """Split two sorted key sets into (matching, disjoint, excess) counts.

    Excess genes lie beyond the other genome's highest key; disjoint genes are
    non-matching keys within range.
    """
    a_set, b_set = set(a_keys), set(b_keys)
    matching = a_set & b_set
    a_max = max(a_set) if a_set else None
    b_max = max(b_set) if b_set else None
    disjoint = excess = 0
    for k in a_set - matching:
        if b_max is None or k > b_max:
            excess += 1
        else:
            disjoint += 1
    for k in b_set - matching:
        if a_max is None or k > a_max:
            excess += 1
        else:
            disjoint += 1
    return matching, disjoint, excess


def _countable_nodes(g: Genome) -> dict[int, NodeGene]:
    # Input nodes carry no evolvable parameters and are identical across the
    # population, so they do not count as genes.
    return {nid: n for nid, n in g.nodes.items() if n.kind != INPUT}


def genetic_distance(a: Genome, b: Genome, cfg: DistanceConfig | None = None) -> float:
    """Linear combination of excess/disjoint gene counts and mean parameter
    difference of matching genes, normalized by the larger genome size.

    Connection genes align by innovation number and compare weights (disabled
    ones included); hidden/output node genes align by node id and compare
    biases.
    """
    cfg = cfg or DistanceConfig()
    a_nodes, b_nodes = _countable_nodes(a), _countable_nodes(b)

    match_c, disjoint, excess = _align(a.connections.keys(), b.connections.keys())
    match_n, disjoint_n, excess_n = _align(a_nodes.keys(), b_nodes.keys())
    disjoint += disjoint_n
    excess += excess_n

    diff_sum = 0.0
    for inn in match_c:
        diff_sum += abs(a.connections[inn].weight - b.connections[inn].weight)
    for nid in match_n:
        diff_sum += abs(a_nodes[nid].bias - b_nodes[nid].bias)
    n_matching = len(match_c) + len(match_n)
    mean_diff = diff_sum / n_matching if n_matching else 0.0

    maxlen = max(len(a.connections) + len(a_nodes), len(b.connections) + len(b_nodes))
    if maxlen == 0:
        return 0.0
    return cfg.c1 * excess / maxlen + cfg.c2 * disjoint / maxlen + cfg.c3 * mean_diff


def _clamp(x: float, lo: float, hi: float) -> float:
    return lo if x < lo else hi if x > hi else x


def initial_population_genomes(
    rng: np.random.Generator,
    input_width: int,
    population_size: int,
    registry: InnovationRegistry,
    id_start: int = 0,
    num_hidden: int = 1,
    connection_fraction: float = 0.5,
    init_stdev: float = 1.0,
    value_min: float = -5.0,
    value_max: float = 5.0,
) -> list[Genome]:
    """Seed genomes: fixed I/O nodes, `num_hidden` hidden nodes, and each
    eligible connection (input->hidden, input->output, hidden->output)
    present independently with probability `connection_fraction`.

    Weights and biases are standard Gaussian draws clamped to the value range.
    All genomes share innovation numbers for the same structural connection.
    """
    if input_width <= 0:
        raise ConfigError(f"input_width must be positive, got {input_width}")
    if population_size < 2:
        raise ConfigError(f"population_size must be at least 2, got {population_size}")
    if not 0.0 <= connection_fraction <= 1.0:
        raise ConfigError(f"initial_connection fraction must be in [0, 1], got {connection_fraction}")

    input_ids = list(range(input_width))
    output_ids = list(range(input_width, input_width + NUM_OUTPUTS))
    hidden_ids = list(range(input_width + NUM_OUTPUTS, input_width + NUM_OUTPUTS + num_hidden))
    registry.next_node_id = max(registry.next_node_id, input_width + NUM_OUTPUTS + num_hidden)

    eligible: list[tuple[int, int]] = []
    for i in input_ids:
        for h in hidden_ids:
            eligible.append((i, h))
        for o in output_ids:
            eligible.append((i, o))
    for h in hidden_ids:
        for o in output_ids:
            eligible.append((h, o))
    pair_innovations = {pair: registry.connection_innovation(*pair) for pair in eligible}

    genomes = []
    for k in range(population_size):
        nodes: dict[int, NodeGene] = {}
        for i in input_ids:
            nodes[i] = NodeGene(i, INPUT, 0.0)
        for o in output_ids:
            nodes[o] = NodeGene(o, OUTPUT, _clamp(rng.normal(0.0, init_stdev), value_min, value_max))
        for h in hidden_ids:
            nodes[h] = NodeGene(h, HIDDEN, _clamp(rng.normal(0.0, init_stdev), value_min, value_max))
        connections: dict[int, ConnectionGene] = {}
        for pair in eligible:
            if rng.random() < connection_fraction:
                inn = pair_innovations[pair]
                w = _clamp(rng.normal(0.0, init_stdev), value_min, value_max)
                connections[inn] = ConnectionGene(inn, pair[0], pair[1], w, True)
        genomes.append(Genome(id_start + k, nodes, dict(sorted(connections.items()))))
    return genomes


def mutate(genome: Genome, registry: InnovationRegistry, rng: np.random.Generator, cfg) -> Genome:
    """Structural and parametric mutation per the configured rates.

    Applied in a fixed order: add node, delete node, add connection, delete
    connection, then per-gene weight/bias perturbation and enabled-flag flips.
    Mutations that would create a cycle or a duplicate connection are skipped.
    """
    g = genome.copy()

    if rng.random() < cfg.node_add_prob:
        _mutate_add_node(g, registry, rng)
    if rng.random() < cfg.node_delete_prob:
        _mutate_delete_node(g, rng)
    if rng.random() < cfg.conn_add_prob:
        _mutate_add_connection(g, registry, rng, cfg)
    if rng.random() < cfg.conn_delete_prob:
        _mutate_delete_connection(g, rng)

    for inn in sorted(g.connections):
        c = g.connections[inn]
        r = rng.random()
        if r < cfg.weight_mutate_rate:
            c.weight = _clamp(c.weight + rng.normal(0.0, cfg.weight_mutate_power),
                              cfg.weight_min_value, cfg.weight_max_value)
        elif r < cfg.weight_mutate_rate + cfg.weight_replace_rate:
            c.weight = _clamp(rng.normal(cfg.weight_init_mean, cfg.weight_init_stdev),
                              cfg.weight_min_value, cfg.weight_max_value)
        if cfg.enabled_mutate_rate > 0 and rng.random() < cfg.enabled_mutate_rate:
            if c.enabled:
                c.enabled = False
            elif not creates_cycle(g, c.source, c.target):
                c.enabled = True

    for nid in sorted(g.nodes):
        n = g.nodes[nid]
        if n.kind == INPUT:
            continue
        r = rng.random()
        if r < cfg.bias_mutate_rate:
            n.bias = _clamp(n.bias + rng.normal(0.0, cfg.bias_mutate_power),
                            cfg.bias_min_value, cfg.bias_max_value)
        elif r < cfg.bias_mutate_rate + cfg.bias_replace_rate:
            n.bias = _clamp(rng.normal(cfg.bias_init_mean, cfg.bias_init_stdev),
                            cfg.bias_min_value, cfg.bias_max_value)
    return g


def _mutate_add_node(g: Genome, registry: InnovationRegistry, rng: np.random.Generator) -> None:
    enabled = [c for c in sorted(g.connections.values(), key=lambda c: c.innovation) if c.enabled]
    if not enabled:
        return
    conn = enabled[rng.integers(len(enabled))]
    node_id, in_inn, out_inn = registry.split(conn.innovation, conn.source, conn.target)
    if node_id in g.nodes:
        return
    conn.enabled = False
    g.nodes[node_id] = NodeGene(node_id, HIDDEN, 0.0)
    # Classic split: incoming weight 1 preserves the signal, outgoing inherits
    # the split connection's weight.
    g.connections[in_inn] = ConnectionGene(in_inn, conn.source, node_id, 1.0, True)
    g.connections[out_inn] = ConnectionGene(out_inn, node_id, conn.target, conn.weight, True)


def _mutate_delete_node(g: Genome, rng: np.random.Generator) -> None:
    hidden = g.hidden_ids()
    if not hidden:
        return
    victim = hidden[rng.integers(len(hidden))]
    del g.nodes[victim]
    for inn in [c.innovation for c in g.connections.values() if victim in (c.source, c.target)]:
        del g.connections[inn]


def _mutate_add_connection(g: Genome, registry: InnovationRegistry, rng: np.random.Generator, cfg) -> None:
    sources = [n.id for n in g.nodes.values() if n.kind != OUTPUT]
    targets = [n.id for n in g.nodes.values() if n.kind != INPUT]
    if not sources or not targets:
        return
    sources.sort()
    targets.sort()
    src = sources[rng.integers(len(sources))]
    tgt = targets[rng.integers(len(targets))]
    if src == tgt or (src, tgt) in g.connection_pairs() or creates_cycle(g, src, tgt):
        return
    inn = registry.connection_innovation(src, tgt)
    w = _clamp(rng.normal(cfg.weight_init_mean, cfg.weight_init_stdev),
               cfg.weight_min_value, cfg.weight_max_value)
    g.connections[inn] = ConnectionGene(inn, src, tgt, w, True)


def _mutate_delete_connection(g: Genome, rng: np.random.Generator) -> None:
    if not g.connections:
        return
    keys = sorted(g.connections)
    del g.connections[keys[rng.integers(len(keys))]]


def crossover(fitter: Genome, other: Genome, rng: np.random.Generator, child_id: int) -> Genome:
    """Child inherits the fitter parent's structure; matching genes (by
    innovation / node id) come from either parent uniformly at random;
    disjoint and excess genes come from the fitter parent only.
    """
    nodes: dict[int, NodeGene] = {}
    for nid in sorted(fitter.nodes):
        n = fitter.nodes[nid]
        if nid in other.nodes and n.kind != INPUT and rng.random() < 0.5:
            nodes[nid] = NodeGene(nid, n.kind, other.nodes[nid].bias)
        else:
            nodes[nid] = n.copy()

    connections: dict[int, ConnectionGene] = {}
    from_other: list[int] = []
    for inn in sorted(fitter.connections):
        c = fitter.connections[inn]
        if inn in other.connections and rng.random() < 0.5:
            oc = other.connections[inn]
            connections[inn] = ConnectionGene(inn, c.source, c.target, oc.weight, oc.enabled)
            from_other.append(inn)
        else:
            connections[inn] = c.copy()

    child = Genome(child_id, nodes, connections)
    # An enabled flag taken from the other parent can close a cycle that the
    # fitter parent's topology kept latent; revert such flags until acyclic.
    if from_other and not is_acyclic(child):
        for inn in from_other:
            if not fitter.connections[inn].enabled and child.connections[inn].enabled:
                child.connections[inn].enabled = False
                if is_acyclic(child):
                    break
    return child


# --- serialization ---------------------------------------------------------

def _fmt(value) -> str:
    if value is None:
        return "none"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def genome_to_text(genome: Genome, generation: int | None = None,
                   task_id: str | None = None, fitness: float | None = None) -> str:
    """Deterministic structured-text encoding with a bit-exact round trip."""
    lines = ["[meta]"]
    lines.append(f"genome_id = {genome.id}")
    lines.append(f"generation = {_fmt(generation)}")
    lines.append(f"task_id = {_fmt(task_id)}")
    lines.append(f"fitness = {_fmt(fitness)}")
    lines.append("[nodes]")
    for nid in sorted(genome.nodes):
        n = genome.nodes[nid]
        lines.append(f"{n.id} {n.kind} {repr(n.bias)}")
    lines.append("[connections]")
    for inn in sorted(genome.connections):
        c = genome.connections[inn]
        lines.append(f"{c.innovation} {c.source} {c.target} {repr(c.weight)} {int(c.enabled)}")
    return "\n".join(lines) + "\n"


def genome_from_text(text: str) -> tuple[Genome, dict]:
    section = None
    meta: dict = {}
    nodes: dict[int, NodeGene] = {}
    connections: dict[int, ConnectionGene] = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("["):
            section = line.strip("[]")
            continue
        if section == "meta":
            key, _, value = line.partition("=")
            meta[key.strip()] = value.strip()
        elif section == "nodes":
            nid, kind, bias = line.split()
            nodes[int(nid)] = NodeGene(int(nid), kind, float(bias))
        elif section == "connections":
            inn, src, tgt, weight, enabled = line.split()
            connections[int(inn)] = ConnectionGene(int(inn), int(src), int(tgt),
                                                   float(weight), bool(int(enabled)))
        else:
            raise ConfigError(f"genome text has content outside any section: {line!r}")
    if "genome_id" not in meta:
        raise ConfigError("genome text missing meta genome_id")
    parsed_meta = {
        "generation": None if meta.get("generation", "none") == "none" else int(meta["generation"]),
        "task_id": None if meta.get("task_id", "none") == "none" else meta["task_id"],
        "fitness": None if meta.get("fitness", "none") == "none" else float(meta["fitness"]),
    }
    genome = Genome(int(meta["genome_id"]), dict(sorted(nodes.items())), dict(sorted(connections.items())))
    return genome, parsed_meta


def save_genome(genome: Genome, path, **meta) -> None:
    with open(path, "w") as fh:
        fh.write(genome_to_text(genome, **meta))


def load_genome(path) -> tuple[Genome, dict]:
    with open(path) as fh:
        return genome_from_text(fh.read())
