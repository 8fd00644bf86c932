"""Speciation and reproduction.

Species partition the population by genetic distance to per-species
representatives.  Reproduction removes stagnant species (keeping at least
`species_elitism` alive), carries the global elite genomes over unchanged,
and allocates offspring to species in proportion to mean normalized fitness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .config import NeatConfig
from .genome import (DistanceConfig, Genome, InnovationRegistry, crossover,
                     genetic_distance, mutate)


@dataclass
class Species:
    id: int
    representative: Genome
    members: list[int] = field(default_factory=list)  # genome ids
    best_fitness_history: list[float] = field(default_factory=list)
    stagnation: int = 0
    created_at: int = 0
    extinct_at: int | None = None
    removed: bool = False  # flagged by stagnation; extinction finalized at next speciation
    peak_size: int = 0


@dataclass
class Population:
    genomes: list[Genome]
    species: list[Species]  # active species only
    size: int
    generation: int

    def genome_by_id(self, genome_id: int) -> Genome:
        for g in self.genomes:
            if g.id == genome_id:
                return g
        raise KeyError(genome_id)


class IdAllocator:
    """Monotonic id source for genomes and species (checkpointable)."""

    def __init__(self, next_genome_id: int = 0, next_species_id: int = 0):
        self.next_genome_id = next_genome_id
        self.next_species_id = next_species_id

    def genome_id(self) -> int:
        gid = self.next_genome_id
        self.next_genome_id += 1
        return gid

    def species_id(self) -> int:
        sid = self.next_species_id
        self.next_species_id += 1
        return sid

    def state(self) -> dict:
        return {"next_genome_id": self.next_genome_id, "next_species_id": self.next_species_id}

    @classmethod
    def from_state(cls, state: dict) -> "IdAllocator":
        return cls(state["next_genome_id"], state["next_species_id"])


def speciate(population: Population, threshold: float, cfg: DistanceConfig,
             ids: IdAllocator) -> Population:
    """Assign every genome to the first species whose representative is within
    the compatibility threshold, founding new species as needed.

    Species that receive no members (including ones flagged removed by
    stagnation) are marked extinct at the current generation.  Each surviving
    species' representative becomes the member closest to the previous one,
    which stabilizes species identity for lifespan tracking.
    """
    generation = population.generation
    active = [s for s in population.species if not s.removed and s.extinct_at is None]
    for s in population.species:
        if s.removed and s.extinct_at is None:
            s.extinct_at = generation
    for s in active:
        s.members = []

    genome_by_id = {g.id: g for g in population.genomes}
    for g in population.genomes:
        for s in active:
            if genetic_distance(s.representative, g, cfg) < threshold:
                s.members.append(g.id)
                break
        else:
            s = Species(ids.species_id(), g.copy(), members=[g.id], created_at=generation)
            active.append(s)

    survivors = []
    for s in active:
        if not s.members:
            s.extinct_at = generation
            continue
        best = min(
            s.members,
            key=lambda gid: (genetic_distance(s.representative, genome_by_id[gid], cfg), gid),
        )
        s.representative = genome_by_id[best].copy()
        s.peak_size = max(s.peak_size, len(s.members))
        survivors.append(s)

    population.species = survivors
    return population


def _largest_remainder(weights: list[float], total: int) -> list[int]:
    """Deterministic proportional integer allocation summing to `total`."""
    wsum = sum(weights)
    if wsum <= 0:
        weights = [1.0] * len(weights)
        wsum = float(len(weights))
    quotas = [w / wsum * total for w in weights]
    counts = [math.floor(q) for q in quotas]
    short = total - sum(counts)
    order = sorted(range(len(weights)), key=lambda i: (-(quotas[i] - counts[i]), i))
    for i in order[:short]:
        counts[i] += 1
    return counts


def reproduce(population: Population, fitness: dict[int, float],
              rng: np.random.Generator, neat_cfg: NeatConfig,
              registry: InnovationRegistry, ids: IdAllocator) -> Population:
    """Produce the next generation.

    Species stagnant for more than `max_stagnation` generations are dropped
    (the best `species_elitism` species are always protected); the global top
    `elitism` genomes are copied over unchanged; within each surviving
    species only the top `survival_threshold` fraction by fitness breed.
    """
    registry.new_generation()
    generation = population.generation
    genome_by_id = {g.id: g for g in population.genomes}

    for s in population.species:
        best = max(fitness[gid] for gid in s.members)
        prev_best = max(s.best_fitness_history) if s.best_fitness_history else -math.inf
        if best > prev_best:
            s.stagnation = 0
        else:
            s.stagnation += 1
        s.best_fitness_history.append(best)

    ranked = sorted(population.species,
                    key=lambda s: (-max(fitness[gid] for gid in s.members), s.id))
    protected = {s.id for s in ranked[: neat_cfg.species_elitism]}
    breeding: list[Species] = []
    for s in population.species:
        if s.stagnation > neat_cfg.max_stagnation and s.id not in protected:
            s.removed = True
        else:
            breeding.append(s)
    if not breeding:  # species_elitism = 0 and everything stagnant
        ranked[0].removed = False
        breeding = [ranked[0]]

    n_elites = min(neat_cfg.elitism, population.size)
    elite_ids = sorted(fitness, key=lambda gid: (-fitness[gid], gid))[:n_elites]
    offspring: list[Genome] = [genome_by_id[gid].copy() for gid in elite_ids]

    slots = population.size - len(offspring)
    fmin = min(fitness.values())
    fmax = max(fitness.values())
    span = fmax - fmin
    weights = []
    for s in breeding:
        if span > 0:
            weights.append(sum((fitness[gid] - fmin) / span for gid in s.members) / len(s.members))
        else:
            weights.append(1.0)
    counts = _largest_remainder(weights, slots)

    for s, count in zip(breeding, counts):
        pool = sorted(s.members, key=lambda gid: (-fitness[gid], gid))
        cutoff = max(1, math.ceil(neat_cfg.survival_threshold * len(pool)))
        pool = pool[:cutoff]
        for _ in range(count):
            a = genome_by_id[pool[rng.integers(len(pool))]]
            b = genome_by_id[pool[rng.integers(len(pool))]]
            if a.id == b.id:
                child = a.copy(new_id=ids.genome_id())
            else:
                if (fitness[b.id], -b.id) > (fitness[a.id], -a.id):
                    a, b = b, a
                child = crossover(a, b, rng, ids.genome_id())
            offspring.append(mutate(child, registry, rng, neat_cfg))

    assert len(offspring) == population.size
    return Population(offspring, population.species, population.size, generation + 1)
