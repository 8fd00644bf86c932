"""Experiment front door: config files, per-seed runs, CSV emission,
aggregation, the regularization-coefficient sweep, and run manifests.

Config files are line/key-based (`key = value`) with sections, using the
evolution parameter names verbatim so a published parameter table can be
transcribed directly.  The canonical serialization is deterministic and its
SHA-256 is the config hash recorded in the run manifest.
"""

from __future__ import annotations

import configparser
import dataclasses
import hashlib
import io
import json
import os
from dataclasses import dataclass, field, fields
from pathlib import Path

from .arena import Arena, ArenaConfig, TaskSpec, observation_width, write_trajectory
from .config import NeatConfig
from .errors import ConfigError
from .evolution import (EvalConfig, LifelongMetrics, RegularizerConfig, RunResult,
                        derive_seed, run_episode, run_lifelong)
from .genome import load_genome
from .network import decode

OUTPUT_ROOT_ENV = "EVOSWARM_OUTPUT_ROOT"

FITNESS_COLUMNS = ("generation", "task_id", "best_fitness", "mean_fitness", "n_species")
RETENTION_COLUMNS = ("generation", "eval_task_id", "r_pop", "r_top")
FORGETTING_COLUMNS = ("boundary_generation", "task_id", "f_pop", "f_top")
SPECIES_COLUMNS = ("species_id", "created_at", "extinct_at", "peak_size")


@dataclass
class ExperimentConfig:
    neat: NeatConfig = field(default_factory=NeatConfig)
    arena: ArenaConfig = field(default_factory=ArenaConfig)
    colors: tuple[str, ...] = ("red", "blue", "green", "yellow")
    tasks: tuple[str, ...] = ("red:blue", "green:yellow")
    generations_per_task: int = 200
    n_eval_envs: int = 10
    retention_eval_cadence: int = 10
    checkpoint_every: int = 0
    n_workers: int = 1
    reg_enabled: bool = False
    reg_lambda: float = 0.0
    lambda_per_seed: dict[int, float] = field(default_factory=dict)
    seeds: tuple[int, ...] = (13, 17, 24, 31, 42)
    output_dir: str = "runs/experiment"

    def schedule(self) -> list[tuple[TaskSpec, int]]:
        out = []
        for pair in self.tasks:
            target, _, other = pair.partition(":")
            if not other:
                raise ConfigError(f"task entry {pair!r} must look like target:other")
            for color in (target, other):
                if color not in self.colors:
                    raise ConfigError(f"task color {color!r} not in the global color list")
            out.append((TaskSpec(target, target, (target, other), tuple(self.colors)),
                        self.generations_per_task))
        return out

    def eval_config(self, seed: int) -> EvalConfig:
        return EvalConfig(n_eval_envs=self.n_eval_envs,
                          retention_eval_cadence=self.retention_eval_cadence,
                          master_seed=seed, n_workers=self.n_workers)

    def reg_config(self, seed: int) -> RegularizerConfig:
        lam = self.lambda_per_seed.get(seed, self.reg_lambda)
        return RegularizerConfig(enabled=self.reg_enabled, lam=lam)

    def observation_width(self) -> int:
        return observation_width(len(self.colors), self.arena.n_neighbors)

    def canonical_text(self) -> str:
        buf = io.StringIO()
        buf.write("[neat]\n")
        for f in fields(NeatConfig):
            buf.write(f"{f.name} = {_fmt(getattr(self.neat, f.name))}\n")
        buf.write("\n[arena]\n")
        for f in fields(ArenaConfig):
            buf.write(f"{f.name} = {_fmt(getattr(self.arena, f.name))}\n")
        buf.write("\n[schedule]\n")
        buf.write(f"colors = {' '.join(self.colors)}\n")
        buf.write(f"tasks = {' '.join(self.tasks)}\n")
        buf.write(f"generations_per_task = {self.generations_per_task}\n")
        buf.write("\n[evolve]\n")
        buf.write(f"n_eval_envs = {self.n_eval_envs}\n")
        buf.write(f"retention_eval_cadence = {self.retention_eval_cadence}\n")
        buf.write(f"checkpoint_every = {self.checkpoint_every}\n")
        buf.write(f"n_workers = {self.n_workers}\n")
        buf.write("\n[regularizer]\n")
        buf.write(f"enabled = {_fmt(self.reg_enabled)}\n")
        buf.write(f"lambda = {_fmt(self.reg_lambda)}\n")
        per_seed = " ".join(f"{s}:{_fmt(l)}" for s, l in sorted(self.lambda_per_seed.items()))
        buf.write(f"lambda_per_seed = {per_seed}\n")
        buf.write("\n[run]\n")
        buf.write(f"seeds = {' '.join(str(s) for s in self.seeds)}\n")
        buf.write(f"output_dir = {self.output_dir}\n")
        return buf.getvalue()

    def config_hash(self) -> str:
        return hashlib.sha256(self.canonical_text().encode()).hexdigest()


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _coerce(section: str, key: str, value: str, target_type):
    value = value.strip()
    try:
        if target_type is bool:
            if value.lower() in ("true", "1", "yes"):
                return True
            if value.lower() in ("false", "0", "no"):
                return False
            raise ValueError(value)
        if target_type is int:
            return int(value)
        if target_type is float:
            return float(value)
        return value
    except ValueError:
        raise ConfigError(
            f"invalid value {value!r} for [{section}] {key} (expected {target_type.__name__})"
        ) from None


def _apply_dataclass_section(section: str, items: dict[str, str], cls) -> dict:
    by_name = {f.name: f for f in fields(cls)}
    out = {}
    for key, value in items.items():
        if key not in by_name:
            raise ConfigError(f"unknown key {key!r} in section [{section}]")
        ftype = by_name[key].type
        if isinstance(ftype, str):
            ftype = {"int": int, "float": float, "bool": bool}.get(ftype, str)
        out[key] = _coerce(section, key, value, ftype)
    return out


def parse_config_text(text: str, overrides: list[str] | None = None) -> ExperimentConfig:
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from None

    sections = {name: dict(parser.items(name)) for name in parser.sections()}
    for item in overrides or []:
        key, _, value = item.partition("=")
        if not _:
            raise ConfigError(f"override {item!r} must look like section.key=value")
        section, _, name = key.strip().partition(".")
        if not name:
            raise ConfigError(f"override key {key!r} must look like section.key")
        sections.setdefault(section, {})[name] = value.strip()

    known = {"neat", "arena", "schedule", "evolve", "regularizer", "run"}
    for name in sections:
        if name not in known:
            raise ConfigError(f"unknown config section [{name}]")

    neat = NeatConfig(**_apply_dataclass_section("neat", sections.get("neat", {}), NeatConfig))
    arena = ArenaConfig(**_apply_dataclass_section("arena", sections.get("arena", {}), ArenaConfig))

    cfg = ExperimentConfig(neat=neat, arena=arena)
    sched = sections.get("schedule", {})
    for key, value in sched.items():
        if key == "colors":
            cfg.colors = tuple(value.split())
        elif key == "tasks":
            cfg.tasks = tuple(value.split())
        elif key == "generations_per_task":
            cfg.generations_per_task = _coerce("schedule", key, value, int)
        else:
            raise ConfigError(f"unknown key {key!r} in section [schedule]")
    ev = sections.get("evolve", {})
    for key, value in ev.items():
        if key in ("n_eval_envs", "retention_eval_cadence", "checkpoint_every", "n_workers"):
            setattr(cfg, key, _coerce("evolve", key, value, int))
        else:
            raise ConfigError(f"unknown key {key!r} in section [evolve]")
    reg = sections.get("regularizer", {})
    for key, value in reg.items():
        if key == "enabled":
            cfg.reg_enabled = _coerce("regularizer", key, value, bool)
        elif key == "lambda":
            cfg.reg_lambda = _coerce("regularizer", key, value, float)
        elif key == "lambda_per_seed":
            cfg.lambda_per_seed = _parse_lambda_map(value)
        else:
            raise ConfigError(f"unknown key {key!r} in section [regularizer]")
    run_sec = sections.get("run", {})
    for key, value in run_sec.items():
        if key == "seeds":
            try:
                cfg.seeds = tuple(int(s) for s in value.split())
            except ValueError:
                raise ConfigError(f"invalid seed list {value!r}") from None
        elif key == "output_dir":
            cfg.output_dir = value
        else:
            raise ConfigError(f"unknown key {key!r} in section [run]")

    if cfg.generations_per_task < 0:
        raise ConfigError("generations_per_task must be non-negative")
    if not cfg.seeds:
        raise ConfigError("seeds list is empty")
    cfg.schedule()  # validates tasks/colors
    return cfg


def _parse_lambda_map(value: str) -> dict[int, float]:
    out: dict[int, float] = {}
    for item in value.split():
        seed_s, _, lam_s = item.partition(":")
        try:
            out[int(seed_s)] = float(lam_s)
        except ValueError:
            raise ConfigError(f"invalid lambda_per_seed entry {item!r} "
                              "(expected seed:lambda)") from None
    return out


def load_config(path, overrides: list[str] | None = None) -> ExperimentConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config_text(text, overrides)


def resolve_output_dir(output_dir: str) -> Path:
    root = os.environ.get(OUTPUT_ROOT_ENV)
    path = Path(output_dir)
    if root and not path.is_absolute():
        return Path(root) / path
    return path


# --- CSV emission ------------------------------------------------------------

def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_csv(path: Path, columns, rows) -> None:
    with open(path, "w") as fh:
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_cell(v) for v in row) + "\n")


def write_metrics_csvs(metrics: LifelongMetrics, out_dir: Path) -> dict[str, Path]:
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = {}
    paths["fitness"] = out_dir / "fitness.csv"
    _write_csv(paths["fitness"], FITNESS_COLUMNS,
               [(r.generation, r.task_id, r.best_fitness, r.mean_fitness, r.n_species)
                for r in metrics.fitness_rows])
    paths["retention"] = out_dir / "retention.csv"
    _write_csv(paths["retention"], RETENTION_COLUMNS,
               [(r.generation, r.eval_task_id, r.r_pop, r.r_top)
                for r in metrics.retention_rows])
    paths["forgetting"] = out_dir / "forgetting.csv"
    _write_csv(paths["forgetting"], FORGETTING_COLUMNS,
               [(r.boundary_generation, r.task_id, r.f_pop, r.f_top)
                for r in metrics.forgetting_rows])
    paths["species"] = out_dir / "species.csv"
    _write_csv(paths["species"], SPECIES_COLUMNS,
               [(r.species_id, r.created_at, r.extinct_at, r.peak_size)
                for r in metrics.species_rows])
    return paths


def _mean(values: list[float]) -> float:
    return sum(values) / len(values)


def aggregate_metrics(per_seed: list[LifelongMetrics]) -> LifelongMetrics:
    """Seed-averaged metrics; rows are exact means of the per-seed rows."""
    first = per_seed[0]
    agg = LifelongMetrics()
    for i, row in enumerate(first.fitness_rows):
        agg.fitness_rows.append(dataclasses.replace(
            row,
            best_fitness=_mean([m.fitness_rows[i].best_fitness for m in per_seed]),
            mean_fitness=_mean([m.fitness_rows[i].mean_fitness for m in per_seed]),
            n_species=_mean([m.fitness_rows[i].n_species for m in per_seed]),
            alive_species=(), created_species=(), extinct_species=(),
        ))
    for i, row in enumerate(first.retention_rows):
        agg.retention_rows.append(dataclasses.replace(
            row,
            r_pop=_mean([m.retention_rows[i].r_pop for m in per_seed]),
            r_top=_mean([m.retention_rows[i].r_top for m in per_seed]),
        ))
    for i, row in enumerate(first.forgetting_rows):
        agg.forgetting_rows.append(dataclasses.replace(
            row,
            f_pop=_mean([m.forgetting_rows[i].f_pop for m in per_seed]),
            f_top=_mean([m.forgetting_rows[i].f_top for m in per_seed]),
        ))
    return agg


# --- running experiments ------------------------------------------------------

def run_seed(cfg: ExperimentConfig, seed: int, run_dir: Path,
             make_plots: bool = True) -> RunResult:
    """One lifelong run for one seed, with CSVs (and plots) under run_dir."""
    from . import plots

    run_dir.mkdir(parents=True, exist_ok=True)
    result = run_lifelong(cfg.schedule(), cfg.arena, cfg.neat,
                          cfg.eval_config(seed), cfg.reg_config(seed), seed,
                          checkpoint_dir=run_dir / "checkpoints",
                          checkpoint_every=cfg.checkpoint_every)
    write_metrics_csvs(result.metrics, run_dir)
    if make_plots:
        plots.plot_fitness(result.metrics, run_dir / "fitness.png")
        plots.plot_species_count(result.metrics, run_dir / "species_count.png")
        plots.plot_species_lifespan(result.metrics, run_dir / "species_lifespan.png")
    return result


def run_experiment(cfg: ExperimentConfig, out_dir: Path | None = None,
                   make_plots: bool = True) -> dict:
    """Run every configured seed and write per-seed plus seed-averaged outputs.

    Returns the manifest (also written to manifest.json in the output dir).
    """
    from . import plots
    from . import __version__

    out = out_dir if out_dir is not None else resolve_output_dir(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "config.txt").write_text(cfg.canonical_text())

    results: list[RunResult] = []
    run_ids = []
    artifacts: dict[str, str] = {"config": "config.txt"}
    for seed in cfg.seeds:
        run_id = f"seed_{seed}"
        run_ids.append(run_id)
        result = run_seed(cfg, seed, out / run_id, make_plots=make_plots)
        results.append(result)
        for name in ("fitness", "retention", "forgetting", "species"):
            artifacts[f"{run_id}/{name}"] = f"{run_id}/{name}.csv"

    if results and results[0].metrics.fitness_rows:
        agg = aggregate_metrics([r.metrics for r in results])
    else:
        agg = LifelongMetrics()
    agg_dir = out / "aggregate"
    paths = write_metrics_csvs(agg, agg_dir)
    paths.pop("species")  # species identities are per-seed; no cross-seed mean
    (agg_dir / "species.csv").unlink()
    for name, p in paths.items():
        artifacts[f"aggregate/{name}"] = str(p.relative_to(out))
    if make_plots and agg.fitness_rows:
        plots.plot_fitness(agg, agg_dir / "fitness.png")
        plots.plot_species_count(agg, agg_dir / "species_count.png")

    manifest = {
        "tool_version": __version__,
        "config_hash": cfg.config_hash(),
        "seeds": list(cfg.seeds),
        "run_ids": run_ids,
        "artifacts": artifacts,
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return manifest


# --- lambda sweep --------------------------------------------------------------

def run_lambda_sweep(cfg: ExperimentConfig, lambdas: list[float],
                     out_dir: Path | None = None, make_plots: bool = False) -> list[dict]:
    """One run set per coefficient; emits a comparison table of the final-task
    current fitness versus retention/forgetting on the first previous task."""
    if not lambdas:
        raise ConfigError("sweep needs a non-empty lambda list")
    if not cfg.reg_enabled:
        raise ConfigError("sweep requires [regularizer] enabled = true")
    if len(cfg.tasks) < 2:
        raise ConfigError("sweep needs a schedule with at least two tasks")

    out = out_dir if out_dir is not None else resolve_output_dir(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    table: list[dict] = []
    for lam in lambdas:
        sub = dataclasses.replace(cfg, reg_lambda=lam, lambda_per_seed={},
                                  output_dir=str(Path(cfg.output_dir) / f"lambda_{_fmt(lam)}"))
        manifest = run_experiment(sub, out / f"lambda_{_fmt(lam)}", make_plots=make_plots)
        agg = _read_aggregate(out / f"lambda_{_fmt(lam)}")
        table.append({"lambda": lam, **agg, "run": manifest["config_hash"][:12]})

    columns = ["lambda", "current_best", "retention_top", "forgetting_top", "run"]
    _write_csv(out / "sweep.csv", columns,
               [[row["lambda"], row["current_best"], row["retention_top"],
                 row["forgetting_top"], row["run"]] for row in table])
    return table


def _read_aggregate(out: Path) -> dict:
    fit = _read_csv(out / "aggregate" / "fitness.csv")
    ret = _read_csv(out / "aggregate" / "retention.csv")
    fgt = _read_csv(out / "aggregate" / "forgetting.csv")
    current = float(fit[-1]["best_fitness"]) if fit else float("nan")
    retention = float(ret[-1]["r_top"]) if ret else float("nan")
    forgot = float(fgt[-1]["f_top"]) if fgt else float("nan")
    return {"current_best": current, "retention_top": retention, "forgetting_top": forgot}


def _read_csv(path: Path) -> list[dict]:
    lines = path.read_text().splitlines()
    if not lines:
        return []
    header = lines[0].split(",")
    return [dict(zip(header, line.split(","))) for line in lines[1:]]


# --- single-genome evaluation and replay ---------------------------------------

def evaluate_genome_file(genome_path, cfg: ExperimentConfig, task_ids: list[str],
                         n_envs: int, seed: int) -> list[dict]:
    """Fitness report rows for one serialized genome on one or more tasks."""
    genome, _ = load_genome(genome_path)
    width = cfg.observation_width()
    if len(genome.input_ids()) != width:
        raise ConfigError(
            f"genome {genome_path} has {len(genome.input_ids())} inputs but the "
            f"configured color set needs {width}"
        )
    tasks = {t.task_id: t for t, _ in cfg.schedule()}
    rows = []
    for task_id in task_ids:
        if task_id not in tasks:
            raise ConfigError(f"unknown task {task_id!r}; configured tasks: {sorted(tasks)}")
        arena = Arena(cfg.arena, tasks[task_id])
        phenotype = decode(genome)
        episode_rewards = []
        for i in range(n_envs):
            episode_rewards.append(
                run_episode(phenotype, arena, derive_seed(seed, "cli-eval", task_id, i)))
        rows.append({
            "task_id": task_id,
            "mean_fitness": sum(episode_rewards) / len(episode_rewards),
            "episodes": episode_rewards,
        })
    return rows


def replay_genome_file(genome_path, cfg: ExperimentConfig, task_id: str, seed: int,
                       out_dir: Path, steps: int | None = None,
                       render: bool = True) -> dict:
    """Run one recorded episode; writes trajectory.csv and per-step frames."""
    from . import plots

    genome, _ = load_genome(genome_path)
    tasks = {t.task_id: t for t, _ in cfg.schedule()}
    if task_id not in tasks:
        raise ConfigError(f"unknown task {task_id!r}; configured tasks: {sorted(tasks)}")
    arena_cfg = cfg.arena if steps is None else dataclasses.replace(cfg.arena, duration=steps)
    arena = Arena(arena_cfg, tasks[task_id])
    phenotype = decode(genome)
    out_dir.mkdir(parents=True, exist_ok=True)
    frames_dir = out_dir / "frames"

    arena.recording = True
    obs = arena.reset(seed)
    total = 0.0
    frame = 0
    vmax = arena_cfg.max_wheel_velocity
    while True:
        actions = (2.0 * phenotype.activate_batch(obs) - 1.0) * vmax
        outcome = arena.step(actions)
        total += outcome.reward
        obs = outcome.observations
        frame += 1
        if render:
            frames_dir.mkdir(parents=True, exist_ok=True)
            plots.render_frame(arena, frames_dir / f"frame_{frame:05d}.png")
        if outcome.done:
            break
    trajectory_path = out_dir / "trajectory.csv"
    write_trajectory(trajectory_path, arena.trajectory)
    return {
        "reward": total,
        "steps": frame,
        "trajectory": trajectory_path,
        "frames_dir": frames_dir if render else None,
    }
