"""Decode genomes into executable feedforward networks.

The decoded form is a flat CSR-style table evaluated in topological order;
`activate_batch` evaluates one controller for several agents at once, which
is the hot path of fitness evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import StructureError
from .genome import Genome, INPUT

STEEPNESS = 4.9
_EXP_CAP = 700.0  # keeps exp() finite; saturated activations are unaffected


def steep_sigmoid(x: float) -> float:
    """Steepened logistic transfer: 1 / (1 + exp(-4.9 x))."""
    t = -STEEPNESS * x
    if t > _EXP_CAP:
        t = _EXP_CAP
    return 1.0 / (1.0 + math.exp(t))


def _forward_py(acts, cols, biases, in_ptr, in_src, in_wgt):
    for a in range(acts.shape[0]):
        for j in range(cols.size):
            z = biases[j]
            for k in range(in_ptr[j], in_ptr[j + 1]):
                z += acts[a, in_src[k]] * in_wgt[k]
            t = -STEEPNESS * z
            if t > _EXP_CAP:
                t = _EXP_CAP
            acts[a, cols[j]] = 1.0 / (1.0 + math.exp(t))


try:  # pragma: no cover - exercised implicitly everywhere
    from numba import njit

    _forward = njit(cache=True)(_forward_py)
except ImportError:  # pragma: no cover
    _forward = _forward_py


@dataclass
class Phenotype:
    """Immutable decoded network; safe to share across evaluation workers."""

    input_width: int
    n_nodes: int
    cols: np.ndarray      # dense column of each non-input node, evaluation order
    biases: np.ndarray    # per non-input node
    in_ptr: np.ndarray    # CSR offsets into in_src / in_wgt
    in_src: np.ndarray    # dense source columns, ascending source node id
    in_wgt: np.ndarray
    output_cols: np.ndarray  # dense columns of (wheel-0, wheel-1, wheel-2)
    node_column: dict[int, int]  # node id -> dense column

    def activate_batch(self, obs: np.ndarray) -> np.ndarray:
        """Evaluate the controller for a stack of observation rows."""
        obs = np.asarray(obs, dtype=np.float64)
        if obs.ndim != 2 or obs.shape[1] != self.input_width:
            raise ValueError(
                f"observation width {obs.shape[-1] if obs.ndim else '?'} does not match "
                f"network input width {self.input_width}"
            )
        # np.empty is safe: every non-input column is written (in topological
        # order) before any read.
        acts = np.empty((obs.shape[0], self.n_nodes), dtype=np.float64)
        acts[:, : self.input_width] = obs
        _forward(acts, self.cols, self.biases, self.in_ptr, self.in_src, self.in_wgt)
        return acts[:, self.output_cols]


def decode(genome: Genome) -> Phenotype:
    """Build the evaluation table for a genome.

    Disabled connections are excluded.  Non-input nodes unreachable from the
    inputs still evaluate (bias-only).  Output order is ascending output node
    id, fixed as (wheel-0, wheel-1, wheel-2).
    """
    input_ids = genome.input_ids()
    output_ids = genome.output_ids()
    node_column = {nid: i for i, nid in enumerate(input_ids)}
    width = len(input_ids)

    incoming: dict[int, list[tuple[int, float]]] = {
        n.id: [] for n in genome.nodes.values() if n.kind != INPUT
    }
    indegree = {nid: 0 for nid in incoming}
    outgoing: dict[int, list[int]] = {nid: [] for nid in genome.nodes}
    for c in sorted(genome.connections.values(), key=lambda c: c.innovation):
        if not c.enabled:
            continue
        incoming[c.target].append((c.source, c.weight))
        outgoing[c.source].append(c.target)
        if genome.nodes[c.source].kind != INPUT:
            indegree[c.target] += 1

    # Kahn's algorithm over non-input nodes; deterministic by node id.
    ready = sorted(nid for nid, deg in indegree.items() if deg == 0)
    order: list[int] = []
    while ready:
        nid = ready.pop(0)
        order.append(nid)
        newly = []
        for tgt in outgoing.get(nid, ()):
            indegree[tgt] -= 1
            if indegree[tgt] == 0:
                newly.append(tgt)
        if newly:
            ready = sorted(ready + newly)
    if len(order) != len(incoming):
        raise StructureError(f"genome {genome.id} has a cycle among enabled connections")

    for i, nid in enumerate(order):
        node_column[nid] = width + i

    cols = np.array([node_column[nid] for nid in order], dtype=np.int64)
    biases = np.array([genome.nodes[nid].bias for nid in order], dtype=np.float64)
    in_ptr = np.zeros(len(order) + 1, dtype=np.int64)
    src_list: list[int] = []
    wgt_list: list[float] = []
    for j, nid in enumerate(order):
        edges = sorted(incoming[nid])  # ascending source node id
        for source, weight in edges:
            src_list.append(node_column[source])
            wgt_list.append(weight)
        in_ptr[j + 1] = len(src_list)

    return Phenotype(
        input_width=width,
        n_nodes=width + len(order),
        cols=cols,
        biases=biases,
        in_ptr=in_ptr,
        in_src=np.array(src_list, dtype=np.int64),
        in_wgt=np.array(wgt_list, dtype=np.float64),
        output_cols=np.array([node_column[nid] for nid in output_ids], dtype=np.int64),
        node_column=node_column,
    )


def activate(phenotype: Phenotype, obs) -> np.ndarray:
    """Single-observation forward pass; returns the 3 raw outputs in (0, 1)."""
    obs = np.asarray(obs, dtype=np.float64)
    if obs.ndim != 1:
        raise ValueError("activate expects a single observation vector")
    return phenotype.activate_batch(obs[None, :])[0]


def to_wheel_velocities(raw, v_max: float) -> np.ndarray:
    """Affine map of raw outputs in (0, 1) onto [-v_max, v_max]."""
    return (2.0 * np.asarray(raw, dtype=np.float64) - 1.0) * v_max
