"""Lifelong neuroevolution of swarm foraging controllers."""

__version__ = "0.1.0"

from .arena import Arena, ArenaConfig, TaskSpec, observation_width
from .config import NeatConfig
from .errors import ConfigError, StructureError
from .evolution import (EvalConfig, LifelongRun, RegularizerConfig, RegularizerState,
                        evaluate_fitness, regularized_fitness, run_lifelong,
                        select_reference)
from .genome import (ConnectionGene, DistanceConfig, Genome, InnovationRegistry,
                     NodeGene, crossover, genetic_distance, genome_from_text,
                     genome_to_text, mutate)
from .network import Phenotype, activate, decode, steep_sigmoid, to_wheel_velocities
from .speciation import Population, Species, reproduce, speciate

__all__ = [
    "Arena", "ArenaConfig", "TaskSpec", "observation_width",
    "NeatConfig", "ConfigError", "StructureError",
    "EvalConfig", "LifelongRun", "RegularizerConfig", "RegularizerState",
    "evaluate_fitness", "regularized_fitness", "run_lifelong", "select_reference",
    "ConnectionGene", "DistanceConfig", "Genome", "InnovationRegistry", "NodeGene",
    "crossover", "genetic_distance", "genome_from_text", "genome_to_text", "mutate",
    "Phenotype", "activate", "decode", "steep_sigmoid", "to_wheel_velocities",
    "Population", "Species", "reproduce", "speciate",
]
