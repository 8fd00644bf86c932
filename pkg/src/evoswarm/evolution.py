"""Lifelong evolution: fitness evaluation, task drifts, retention metrics,
genetic-distance regularization, species tracking, and checkpointing.

Every genome of a generation is scored on the same derived episode seeds, so
identical genomes receive identical fitness and evaluation can be parallel
without changing results.  Retention evaluations use a seed stream disjoint
from training so they measure generalization rather than memorized layouts.
"""

from __future__ import annotations

import hashlib
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, asdict
from pathlib import Path

import numpy as np

from .arena import Arena, ArenaConfig, TaskSpec, observation_width
from .config import NeatConfig
from .errors import ConfigError
from .genome import (DistanceConfig, Genome, InnovationRegistry, genetic_distance,
                     genome_from_text, genome_to_text, initial_population_genomes)
from .network import Phenotype, decode
from .speciation import IdAllocator, Population, Species, reproduce, speciate

log = logging.getLogger(__name__)

WORST_FITNESS = -1e9  # attributed to genomes that fail evaluation; finite so
                      # reproduction arithmetic stays well-defined

CHECKPOINT_VERSION = 1


def derive_seed(*parts) -> int:
    """Stable 64-bit seed from a tuple of hashable components."""
    payload = "\x1f".join(str(p) for p in parts).encode()
    return int.from_bytes(hashlib.blake2b(payload, digest_size=8).digest(), "big")


@dataclass
class EvalConfig:
    n_eval_envs: int = 10
    retention_eval_cadence: int = 10
    master_seed: int = 0
    n_workers: int = 1
    vary_envs_across_generations: bool = True

    def __post_init__(self):
        if self.n_eval_envs < 1:
            raise ConfigError(f"n_eval_envs must be >= 1, got {self.n_eval_envs}")
        if self.retention_eval_cadence < 1:
            raise ConfigError(f"retention_eval_cadence must be >= 1, got {self.retention_eval_cadence}")


@dataclass
class RegularizerConfig:
    enabled: bool = False
    lam: float = 0.0

    def __post_init__(self):
        if self.lam < 0:
            raise ConfigError(f"regularization coefficient must be >= 0, got {self.lam}")


@dataclass
class RegularizerState:
    enabled: bool
    lam: float
    reference: Genome | None = None  # frozen champion of the previous task


@dataclass
class FitnessRecord:
    genome_id: int
    task_id: str
    raw: float
    regularized: float


def episode_seeds(eval_cfg: EvalConfig, task_id: str, generation: int) -> list[int]:
    gen_key = generation if eval_cfg.vary_envs_across_generations else 0
    return [derive_seed(eval_cfg.master_seed, "train", task_id, gen_key, i)
            for i in range(eval_cfg.n_eval_envs)]


def retention_seeds(eval_cfg: EvalConfig, task_id: str, generation: int) -> list[int]:
    return [derive_seed(eval_cfg.master_seed, "retention", task_id, generation, i)
            for i in range(eval_cfg.n_eval_envs)]


def run_episode(phenotype: Phenotype, arena: Arena, seed: int, record: bool = False) -> float:
    """One episode under a fixed controller; returns the summed swarm reward."""
    arena.recording = record
    obs = arena.reset(seed)
    vmax = arena.config.max_wheel_velocity
    total = 0.0
    while True:
        actions = (2.0 * phenotype.activate_batch(obs) - 1.0) * vmax
        outcome = arena.step(actions)
        total += outcome.reward
        obs = outcome.observations
        if outcome.done:
            return total


def _evaluate_genome(genome: Genome, arena: Arena, seeds: list[int]) -> float:
    expected = observation_width(arena.task.n_colors, arena.config.n_neighbors)
    if len(genome.input_ids()) != expected:
        log.warning("genome %d input width %d does not match task width %d; "
                    "assigning worst fitness", genome.id, len(genome.input_ids()), expected)
        return WORST_FITNESS
    phenotype = decode(genome)
    total = 0.0
    for seed in seeds:
        total += run_episode(phenotype, arena, seed)
    return total / len(seeds)


def evaluate_population(genomes: list[Genome], arena_config: ArenaConfig, task: TaskSpec,
                        seeds: list[int], n_workers: int = 1) -> dict[int, float]:
    """Mean episode reward per genome over the shared seed list.

    Results are keyed by genome id and independent of the degree of
    parallelism (episodes are pure; merge order is submission order).
    """
    if n_workers <= 1:
        arena = Arena(arena_config, task)
        return {g.id: _evaluate_genome(g, arena, seeds) for g in genomes}
    def job(genome: Genome) -> float:
        return _evaluate_genome(genome, Arena(arena_config, task), seeds)
    with ThreadPoolExecutor(max_workers=n_workers) as pool:
        results = list(pool.map(job, genomes))
    return {g.id: r for g, r in zip(genomes, results)}


def evaluate_fitness(genome: Genome, task: TaskSpec, arena_config: ArenaConfig,
                     eval_cfg: EvalConfig, generation: int) -> FitnessRecord:
    """Score one genome on the generation's common evaluation environments."""
    seeds = episode_seeds(eval_cfg, task.task_id, generation)
    raw = _evaluate_genome(genome, Arena(arena_config, task), seeds)
    return FitnessRecord(genome.id, task.task_id, raw, raw)


def regularized_fitness(record: FitnessRecord, regularizer: RegularizerState,
                        genome: Genome, distance_cfg: DistanceConfig) -> float:
    """Raw fitness minus the genetic-distance penalty to the frozen reference."""
    if not regularizer.enabled or regularizer.reference is None:
        return record.raw
    return record.raw - regularizer.lam * genetic_distance(regularizer.reference, genome, distance_cfg)


def select_reference(genomes: list[Genome], fitness: dict[int, float]) -> Genome:
    """Best genome by the supplied fitness table; ties break to the lowest id."""
    best_id = min(fitness, key=lambda gid: (-fitness[gid], gid))
    for g in genomes:
        if g.id == best_id:
            return g.copy()
    raise KeyError(best_id)


# --- metrics ----------------------------------------------------------------

@dataclass
class FitnessRow:
    generation: int
    task_id: str
    best_fitness: float
    mean_fitness: float
    n_species: int
    alive_species: tuple[int, ...] = ()
    created_species: tuple[int, ...] = ()
    extinct_species: tuple[int, ...] = ()


@dataclass
class RetentionRow:
    generation: int
    eval_task_id: str
    r_pop: float
    r_top: float


@dataclass
class ForgettingRow:
    boundary_generation: int
    task_id: str
    f_pop: float
    f_top: float


@dataclass
class SpeciesRow:
    species_id: int
    created_at: int
    extinct_at: int | None
    peak_size: int


@dataclass
class LifelongMetrics:
    fitness_rows: list[FitnessRow] = field(default_factory=list)
    retention_rows: list[RetentionRow] = field(default_factory=list)
    forgetting_rows: list[ForgettingRow] = field(default_factory=list)
    species_rows: list[SpeciesRow] = field(default_factory=list)


def forgetting(previous_best: float, retention: float) -> float:
    """Best performance previously achieved on a task minus current retention."""
    return previous_best - retention


class SpeciesTracker:
    """Observes speciation results and maintains the species lifespan table."""

    def __init__(self):
        self.records: dict[int, Species] = {}

    def observe(self, generation: int, population: Population) -> tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]:
        for s in population.species:
            self.records.setdefault(s.id, s)
        alive = tuple(sorted(s.id for s in population.species))
        created = tuple(sid for sid in alive if self.records[sid].created_at == generation)
        extinct = tuple(sorted(sid for sid, s in self.records.items() if s.extinct_at == generation))
        return alive, created, extinct

    def lifespan_table(self) -> list[SpeciesRow]:
        return [SpeciesRow(s.id, s.created_at, s.extinct_at, s.peak_size)
                for s in sorted(self.records.values(), key=lambda s: s.id)]

    def alive_count_at(self, generation: int) -> int:
        return sum(1 for s in self.records.values()
                   if s.created_at <= generation and (s.extinct_at is None or s.extinct_at > generation))


# --- generation step --------------------------------------------------------

@dataclass
class GenerationResult:
    population: Population
    row: FitnessRow
    raw: dict[int, float]
    selection: dict[int, float]


def run_generation(population: Population, task: TaskSpec, regularizer: RegularizerState,
                   arena_config: ArenaConfig, neat_cfg: NeatConfig, eval_cfg: EvalConfig,
                   rng: np.random.Generator, registry: InnovationRegistry, ids: IdAllocator,
                   tracker: SpeciesTracker | None = None,
                   before_reproduction=None) -> GenerationResult:
    """Evaluate, speciate, record metrics, and reproduce one generation.

    The regularized fitness is the selection signal whenever the regularizer
    is active; the recorded best/mean fitness is always the raw task fitness.
    """
    generation = population.generation
    seeds = episode_seeds(eval_cfg, task.task_id, generation)
    raw = evaluate_population(population.genomes, arena_config, task, seeds,
                              n_workers=eval_cfg.n_workers)
    distance_cfg = DistanceConfig(
        c1=neat_cfg.compatibility_disjoint_coefficient,
        c2=neat_cfg.compatibility_disjoint_coefficient,
        c3=neat_cfg.compatibility_weight_coefficient,
    )
    if regularizer.enabled and regularizer.reference is not None:
        selection = {
            g.id: raw[g.id] - regularizer.lam * genetic_distance(regularizer.reference, g, distance_cfg)
            for g in population.genomes
        }
    else:
        selection = dict(raw)

    speciate(population, neat_cfg.compatibility_threshold, distance_cfg, ids)
    if tracker is None:
        tracker = SpeciesTracker()
    alive, created, extinct = tracker.observe(generation, population)
    row = FitnessRow(
        generation=generation,
        task_id=task.task_id,
        best_fitness=max(raw.values()),
        mean_fitness=sum(raw.values()) / len(raw),
        n_species=len(population.species),
        alive_species=alive,
        created_species=created,
        extinct_species=extinct,
    )
    if before_reproduction is not None:
        before_reproduction(population, raw, selection)
    next_population = reproduce(population, selection, rng, neat_cfg, registry, ids)
    return GenerationResult(next_population, row, raw, selection)


# --- schedules ---------------------------------------------------------------

def validate_schedule(schedule: list[tuple[TaskSpec, int]]) -> None:
    if not schedule:
        raise ConfigError("task schedule is empty")
    color_set = schedule[0][0].color_set
    by_id: dict[str, TaskSpec] = {}
    for task, gens in schedule:
        if gens < 0:
            raise ConfigError(f"negative generation budget for task {task.task_id!r}")
        if task.color_set != color_set:
            raise ConfigError("all tasks in a schedule must share the global color set")
        if task.task_id in by_id and by_id[task.task_id] != task:
            raise ConfigError(f"task id {task.task_id!r} reused with a different definition")
        by_id[task.task_id] = task
    for (a, _), (b, _) in zip(schedule, schedule[1:]):
        if a.task_id == b.task_id:
            raise ConfigError(f"consecutive schedule entries repeat task {a.task_id!r}")
    ids = list(by_id)
    for i, ta in enumerate(ids):
        for tb in ids[i + 1:]:
            if set(by_id[ta].active_colors) & set(by_id[tb].active_colors):
                raise ConfigError(f"tasks {ta!r} and {tb!r} share active colors")


def initial_population(seed: int, input_width: int, population_size: int,
                       neat_cfg: NeatConfig, registry: InnovationRegistry,
                       ids: IdAllocator) -> Population:
    """Seed population per the configured initial wiring (generation 0)."""
    rng = np.random.default_rng(seed)
    first_id = ids.next_genome_id
    genomes = initial_population_genomes(
        rng, input_width, population_size, registry,
        id_start=first_id,
        num_hidden=neat_cfg.num_hidden,
        connection_fraction=neat_cfg.initial_connection_fraction,
        init_stdev=neat_cfg.weight_init_stdev,
        value_min=neat_cfg.weight_min_value,
        value_max=neat_cfg.weight_max_value,
    )
    ids.next_genome_id = first_id + population_size
    return Population(genomes, [], population_size, 0)


# --- the lifelong run --------------------------------------------------------

@dataclass
class SegmentSummary:
    index: int
    task_id: str
    start_generation: int
    end_generation: int
    final_best: float
    final_genomes: list[Genome]
    final_raw: dict[int, float]


@dataclass
class RunResult:
    metrics: LifelongMetrics
    segments: list[SegmentSummary]
    references: list[Genome]  # one per drift, in drift order
    population: Population
    tracker: SpeciesTracker


class LifelongRun:
    """Drives a population through a task schedule, recording current fitness,
    retention on previous tasks, and forgetting at every task boundary."""

    def __init__(self, schedule: list[tuple[TaskSpec, int]], arena_config: ArenaConfig,
                 neat_cfg: NeatConfig, eval_cfg: EvalConfig, reg_cfg: RegularizerConfig,
                 master_seed: int, checkpoint_dir: str | Path | None = None,
                 checkpoint_every: int = 0):
        validate_schedule(schedule)
        self.schedule = schedule
        self.arena_config = arena_config
        self.neat_cfg = neat_cfg
        self.eval_cfg = eval_cfg
        self.reg_cfg = reg_cfg
        self.master_seed = master_seed
        self.checkpoint_dir = Path(checkpoint_dir) if checkpoint_dir else None
        self.checkpoint_every = checkpoint_every

        self.registry = InnovationRegistry()
        self.ids = IdAllocator()
        self.rng = np.random.default_rng(derive_seed(master_seed, "evolution"))
        self.tracker = SpeciesTracker()
        self.metrics = LifelongMetrics()
        self.regularizer = RegularizerState(reg_cfg.enabled, reg_cfg.lam, None)
        self.references: list[Genome] = []
        self.segments: list[SegmentSummary] = []
        self.generation = 0
        width = observation_width(schedule[0][0].n_colors, arena_config.n_neighbors)
        self.population = initial_population(derive_seed(master_seed, "init"), width,
                                             neat_cfg.population_size, neat_cfg,
                                             self.registry, self.ids)

    # -- schedule geometry --

    def _segment_of(self, generation: int) -> tuple[int, int]:
        """(segment index, local generation) for a global generation index."""
        start = 0
        for i, (_, gens) in enumerate(self.schedule):
            if generation < start + gens:
                return i, generation - start
            start += gens
        raise ValueError(f"generation {generation} beyond schedule")

    @property
    def total_generations(self) -> int:
        return sum(gens for _, gens in self.schedule)

    def _previous_task_ids(self, current: str) -> list[str]:
        seen: list[str] = []
        for task, _ in self.schedule:
            if task.task_id != current and task.task_id not in seen:
                if any(s.task_id == task.task_id for s in self.segments):
                    seen.append(task.task_id)
        return seen

    def _task_by_id(self, task_id: str) -> TaskSpec:
        for task, _ in self.schedule:
            if task.task_id == task_id:
                return task
        raise KeyError(task_id)

    # -- main loop --

    def run(self) -> RunResult:
        while self.generation < self.total_generations:
            self._run_one_generation()
        self.metrics.species_rows = self.tracker.lifespan_table()
        if self.checkpoint_dir:
            self.save_checkpoint()
        return RunResult(self.metrics, self.segments, self.references,
                         self.population, self.tracker)

    def _run_one_generation(self) -> None:
        seg_idx, local_gen = self._segment_of(self.generation)
        task, seg_gens = self.schedule[seg_idx]
        last_of_segment = local_gen == seg_gens - 1

        def before_reproduction(population: Population, raw: dict[int, float],
                                selection: dict[int, float]) -> None:
            due = (local_gen + 1) % self.eval_cfg.retention_eval_cadence == 0 or last_of_segment
            retained: dict[str, RetentionRow] = {}
            if due:
                champion = min(raw, key=lambda gid: (-raw[gid], gid))
                for prev_id in self._previous_task_ids(task.task_id):
                    ret = evaluate_population(
                        population.genomes, self.arena_config, self._task_by_id(prev_id),
                        retention_seeds(self.eval_cfg, prev_id, self.generation),
                        n_workers=self.eval_cfg.n_workers)
                    r_pop = max(ret.values())
                    r_top = ret[champion]
                    assert r_pop >= r_top, "population retention below champion retention"
                    row = RetentionRow(self.generation, prev_id, r_pop, r_top)
                    retained[prev_id] = row
                    self.metrics.retention_rows.append(row)
            if last_of_segment:
                self._close_segment(seg_idx, task, population, raw, selection, retained)

        result = run_generation(self.population, task, self.regularizer,
                                self.arena_config, self.neat_cfg, self.eval_cfg,
                                self.rng, self.registry, self.ids, self.tracker,
                                before_reproduction)
        self.metrics.fitness_rows.append(result.row)
        self.population = result.population
        self.generation += 1
        if (self.checkpoint_dir and self.checkpoint_every
                and self.generation % self.checkpoint_every == 0):
            self.save_checkpoint()

    def _close_segment(self, seg_idx: int, task: TaskSpec, population: Population,
                       raw: dict[int, float], selection: dict[int, float],
                       retained: dict[str, RetentionRow]) -> None:
        summary = SegmentSummary(
            index=seg_idx,
            task_id=task.task_id,
            start_generation=self.generation - (self._segment_of(self.generation)[1]),
            end_generation=self.generation,
            final_best=max(raw.values()),
            final_genomes=[g.copy() for g in population.genomes],
            final_raw=dict(raw),
        )
        for prev_id, row in retained.items():
            prev_best = self._latest_final_best(prev_id)
            self.metrics.forgetting_rows.append(ForgettingRow(
                self.generation, prev_id,
                forgetting(prev_best, row.r_pop),
                forgetting(prev_best, row.r_top),
            ))
        self.segments.append(summary)
        reference = None
        if seg_idx + 1 < len(self.schedule) and self.regularizer.enabled:
            # Freeze the champion of the outgoing task as the reference.  At
            # the first drift the selection table equals the raw table; at
            # later drifts it is the regularized fitness.
            reference = select_reference(population.genomes, selection)
            self.regularizer.reference = reference
            self.references.append(reference)
        if self.checkpoint_dir:
            self._write_segment_artifacts(summary, reference)

    def _latest_final_best(self, task_id: str) -> float:
        for summary in reversed(self.segments):
            if summary.task_id == task_id:
                return summary.final_best
        raise KeyError(f"no completed segment for task {task_id!r}")

    # -- checkpointing --

    def _write_segment_artifacts(self, summary: SegmentSummary,
                                 reference: Genome | None) -> None:
        seg_dir = self.checkpoint_dir / f"task_{summary.index}_{summary.task_id}"
        pop_dir = seg_dir / "population"
        pop_dir.mkdir(parents=True, exist_ok=True)
        for g in summary.final_genomes:
            text = genome_to_text(g, generation=summary.end_generation,
                                  task_id=summary.task_id,
                                  fitness=summary.final_raw.get(g.id))
            (pop_dir / f"genome_{g.id}.genome").write_text(text)
        if reference is not None:
            (seg_dir / "reference.genome").write_text(
                genome_to_text(reference, generation=summary.end_generation,
                               task_id=summary.task_id,
                               fitness=summary.final_raw.get(reference.id)))

    def save_checkpoint(self) -> Path:
        self.checkpoint_dir.mkdir(parents=True, exist_ok=True)
        path = self.checkpoint_dir / "state.json"
        path.write_text(json.dumps(self._state(), indent=0))
        return path

    def _state(self) -> dict:
        def task_dict(t: TaskSpec) -> dict:
            return {"task_id": t.task_id, "target_color": t.target_color,
                    "active_colors": list(t.active_colors), "color_set": list(t.color_set)}

        species_state = []
        active_ids = [s.id for s in self.population.species]
        for s in sorted(self.tracker.records.values(), key=lambda s: s.id):
            species_state.append({
                "id": s.id,
                "representative": genome_to_text(s.representative),
                "members": list(s.members),
                "best_fitness_history": list(s.best_fitness_history),
                "stagnation": s.stagnation,
                "created_at": s.created_at,
                "extinct_at": s.extinct_at,
                "removed": s.removed,
                "peak_size": s.peak_size,
            })
        metrics = {
            "fitness_rows": [asdict(r) for r in self.metrics.fitness_rows],
            "retention_rows": [asdict(r) for r in self.metrics.retention_rows],
            "forgetting_rows": [asdict(r) for r in self.metrics.forgetting_rows],
        }
        return {
            "version": CHECKPOINT_VERSION,
            "master_seed": self.master_seed,
            "schedule": [[task_dict(t), gens] for t, gens in self.schedule],
            "arena_config": asdict(self.arena_config),
            "neat_config": asdict(self.neat_cfg),
            "eval_config": asdict(self.eval_cfg),
            "regularizer_config": asdict(self.reg_cfg),
            "checkpoint_every": self.checkpoint_every,
            "generation": self.generation,
            "population": {
                "genomes": [genome_to_text(g) for g in self.population.genomes],
                "size": self.population.size,
                "generation": self.population.generation,
                "active_species": active_ids,
            },
            "species": species_state,
            "registry": self.registry.state(),
            "ids": self.ids.state(),
            "rng_state": self.rng.bit_generator.state,
            "regularizer_reference": (genome_to_text(self.regularizer.reference)
                                      if self.regularizer.reference is not None else None),
            "references": [genome_to_text(g) for g in self.references],
            "segments": [{
                "index": s.index, "task_id": s.task_id,
                "start_generation": s.start_generation, "end_generation": s.end_generation,
                "final_best": s.final_best,
                "final_genomes": [genome_to_text(g) for g in s.final_genomes],
                "final_raw": {str(k): v for k, v in s.final_raw.items()},
            } for s in self.segments],
            "metrics": metrics,
        }

    @classmethod
    def resume(cls, checkpoint_dir: str | Path) -> "LifelongRun":
        """Restore a run from its latest checkpoint; continuing produces the
        identical trajectory the uninterrupted run would have produced."""
        path = Path(checkpoint_dir) / "state.json"
        state = json.loads(path.read_text())
        if state["version"] != CHECKPOINT_VERSION:
            raise ConfigError(f"unsupported checkpoint version {state['version']}")

        def task_from(d: dict) -> TaskSpec:
            return TaskSpec(d["task_id"], d["target_color"],
                            tuple(d["active_colors"]), tuple(d["color_set"]))

        schedule = [(task_from(t), gens) for t, gens in state["schedule"]]
        run = cls.__new__(cls)
        run.schedule = schedule
        run.arena_config = ArenaConfig(**state["arena_config"])
        run.neat_cfg = NeatConfig(**state["neat_config"])
        run.eval_cfg = EvalConfig(**state["eval_config"])
        run.reg_cfg = RegularizerConfig(**state["regularizer_config"])
        run.master_seed = state["master_seed"]
        run.checkpoint_dir = Path(checkpoint_dir)
        run.checkpoint_every = state["checkpoint_every"]
        run.registry = InnovationRegistry.from_state(state["registry"])
        run.ids = IdAllocator.from_state(state["ids"])
        run.rng = np.random.default_rng()
        run.rng.bit_generator.state = state["rng_state"]
        run.tracker = SpeciesTracker()
        species_by_id: dict[int, Species] = {}
        for s in state["species"]:
            rep, _ = genome_from_text(s["representative"])
            sp = Species(s["id"], rep, list(s["members"]), list(s["best_fitness_history"]),
                         s["stagnation"], s["created_at"], s["extinct_at"], s["removed"],
                         s["peak_size"])
            species_by_id[sp.id] = sp
            run.tracker.records[sp.id] = sp
        pop = state["population"]
        run.population = Population(
            [genome_from_text(t)[0] for t in pop["genomes"]],
            [species_by_id[sid] for sid in pop["active_species"]],
            pop["size"], pop["generation"],
        )
        run.metrics = LifelongMetrics(
            fitness_rows=[FitnessRow(**{**r, "alive_species": tuple(r["alive_species"]),
                                        "created_species": tuple(r["created_species"]),
                                        "extinct_species": tuple(r["extinct_species"])})
                          for r in state["metrics"]["fitness_rows"]],
            retention_rows=[RetentionRow(**r) for r in state["metrics"]["retention_rows"]],
            forgetting_rows=[ForgettingRow(**r) for r in state["metrics"]["forgetting_rows"]],
        )
        run.regularizer = RegularizerState(
            run.reg_cfg.enabled, run.reg_cfg.lam,
            genome_from_text(state["regularizer_reference"])[0]
            if state["regularizer_reference"] else None,
        )
        run.references = [genome_from_text(t)[0] for t in state["references"]]
        run.segments = [SegmentSummary(
            index=s["index"], task_id=s["task_id"],
            start_generation=s["start_generation"], end_generation=s["end_generation"],
            final_best=s["final_best"],
            final_genomes=[genome_from_text(t)[0] for t in s["final_genomes"]],
            final_raw={int(k): v for k, v in s["final_raw"].items()},
        ) for s in state["segments"]]
        run.generation = state["generation"]
        return run


def run_lifelong(schedule, arena_config, neat_cfg, eval_cfg, reg_cfg, master_seed,
                 checkpoint_dir=None, checkpoint_every=0) -> RunResult:
    """Convenience wrapper: construct and run a full lifelong evolution."""
    run = LifelongRun(schedule, arena_config, neat_cfg, eval_cfg, reg_cfg,
                      master_seed, checkpoint_dir, checkpoint_every)
    return run.run()
