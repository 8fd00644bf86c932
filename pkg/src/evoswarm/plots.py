"""Static result plots: fitness/retention curves, species counts and
lifespans, and arena frames for replay export."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .arena import Arena, BOX_FREE, DROP_ZONE_DEPTH
from .evolution import LifelongMetrics

_NAMED = {"red", "green", "blue", "yellow", "purple", "cyan", "orange", "magenta",
          "pink", "brown", "gray", "olive", "black"}
_FALLBACK = plt.rcParams["axes.prop_cycle"].by_key()["color"]


def task_color(task_id: str, index: int) -> str:
    return task_id if task_id in _NAMED else _FALLBACK[index % len(_FALLBACK)]


def _segments(rows):
    """Split fitness rows into runs of consecutive generations on one task."""
    segments = []
    for row in rows:
        if segments and segments[-1][0] == row.task_id:
            segments[-1][1].append(row)
        else:
            segments.append((row.task_id, [row]))
    return segments


def plot_fitness(metrics: LifelongMetrics, path: Path) -> None:
    """Solid current-task fitness per segment, dashed retention curves, and
    vertical markers at the task boundaries."""
    fig, ax = plt.subplots(figsize=(8, 4.5))
    color_index: dict[str, int] = {}
    labeled: set[str] = set()
    for task_id, rows in _segments(metrics.fitness_rows):
        idx = color_index.setdefault(task_id, len(color_index))
        label = f"{task_id} (current)" if task_id not in labeled else None
        labeled.add(task_id)
        ax.plot([r.generation for r in rows], [r.best_fitness for r in rows],
                color=task_color(task_id, idx), linestyle="-", label=label)
        if rows[0].generation > 0:
            ax.axvline(rows[0].generation, color="gray", linestyle="--", linewidth=0.8)
    by_task: dict[str, list] = {}
    for row in metrics.retention_rows:
        by_task.setdefault(row.eval_task_id, []).append(row)
    for task_id, rows in sorted(by_task.items()):
        idx = color_index.setdefault(task_id, len(color_index))
        ax.plot([r.generation for r in rows], [r.r_pop for r in rows],
                color=task_color(task_id, idx), linestyle="--",
                label=f"{task_id} (retention)")
    ax.set_xlabel("generation")
    ax.set_ylabel("fitness")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)


def plot_species_count(metrics: LifelongMetrics, path: Path) -> None:
    fig, ax = plt.subplots(figsize=(8, 3.5))
    ax.plot([r.generation for r in metrics.fitness_rows],
            [r.n_species for r in metrics.fitness_rows], color="tab:blue")
    ax.set_xlabel("generation")
    ax.set_ylabel("species alive")
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)


def plot_species_lifespan(metrics: LifelongMetrics, path: Path) -> None:
    fig, ax = plt.subplots(figsize=(8, 4.5))
    last_gen = metrics.fitness_rows[-1].generation if metrics.fitness_rows else 0
    for i, row in enumerate(metrics.species_rows):
        end = row.extinct_at if row.extinct_at is not None else last_gen + 1
        ax.broken_barh([(row.created_at, max(end - row.created_at, 0.5))], (i - 0.4, 0.8),
                       facecolors="tab:green" if row.extinct_at is None else "tab:gray")
    ax.set_xlabel("generation")
    ax.set_ylabel("species")
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)


def render_frame(arena: Arena, path: Path) -> None:
    """One arena snapshot: drop zone band, boxes by color, agents with heading."""
    size = arena.config.size
    fig, ax = plt.subplots(figsize=(4, 4))
    ax.add_patch(plt.Rectangle((0, size - DROP_ZONE_DEPTH), size, DROP_ZONE_DEPTH,
                               color="0.85", zorder=0))
    for b in range(arena.config.n_boxes):
        if arena.box_state[b] != BOX_FREE:
            continue
        color = arena.task.color_set[int(arena.box_color[b])]
        if color not in _NAMED:
            color = "tab:gray"
        ax.plot(arena.box_pos[b, 0], arena.box_pos[b, 1], "s", color=color, markersize=5)
    for a in range(arena.config.n_agents):
        x, y = arena.agent_pos[a]
        ax.plot(x, y, "o", color="black", markersize=6)
        heading = arena.agent_heading[a]
        ax.plot([x, x + 0.6 * np.cos(heading)], [y, y + 0.6 * np.sin(heading)],
                color="black", linewidth=1)
        if arena.carried[a] >= 0:
            color = arena.task.color_set[int(arena.box_color[arena.carried[a]])]
            ax.plot(x, y, "s", color=color if color in _NAMED else "tab:gray",
                    markersize=3, zorder=5)
    ax.set_xlim(0, size)
    ax.set_ylim(0, size)
    ax.set_aspect("equal")
    ax.set_xticks([])
    ax.set_yticks([])
    ax.set_title(f"step {arena.step_count}  retrieved {arena.retrieve_count}", fontsize=8)
    fig.savefig(path, dpi=80)
    plt.close(fig)
