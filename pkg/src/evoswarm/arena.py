"""Episodic 2D swarm-foraging simulator.

Point robots on omnidirectional wheels forage color-coded boxes and carry
them to a drop zone along the arena's upper edge.  Distances are in arena
units (1 unit = 250 mm, so the default 20-unit arena is 5 m x 5 m, the
4-unit sensor range is 1 m and the 0.5-unit pickup sensitivity is 125 mm).

Within a step, motion integrates first, then deliveries resolve, then
pickups; an agent that drops a box can pick up another one in the same step.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError

log = logging.getLogger(__name__)

UNIT_MM = 250.0
ROBOT_RADIUS = 0.5       # body radius in units; wheels mount at this radius
DROP_ZONE_DEPTH = 1.0    # strip along the upper edge, one robot diameter deep
SQRT3 = math.sqrt(3.0)
TWO_PI = 2.0 * math.pi

# neighbor type codes used in observations
TYPE_NONE = 0
TYPE_WALL = 1
TYPE_AGENT = 2
TYPE_COLOR0 = 3  # color k encodes as TYPE_COLOR0 + k

# box states
BOX_FREE = 0
BOX_CARRIED = 1
BOX_RETIRED = 2  # only reachable with repositioning disabled

REWARD_PICKUP_TARGET = 1
REWARD_DELIVERY_TARGET = 2
REWARD_PICKUP_WRONG = -1
REWARD_DELIVERY_WRONG = 0

EVENT_VALUES = {
    "pickup-target": REWARD_PICKUP_TARGET,
    "pickup-wrong": REWARD_PICKUP_WRONG,
    "delivery-target": REWARD_DELIVERY_TARGET,
    "delivery-wrong": REWARD_DELIVERY_WRONG,
}


@dataclass(frozen=True)
class TaskSpec:
    """A foraging task: which color to fetch and which colors are in play."""

    task_id: str
    target_color: str
    active_colors: tuple[str, str]
    color_set: tuple[str, ...]  # global ordered color vocabulary

    def __post_init__(self):
        if len(self.active_colors) != 2:
            raise ConfigError(f"task {self.task_id!r} needs exactly 2 active colors")
        if self.target_color not in self.active_colors:
            raise ConfigError(f"task {self.task_id!r}: target {self.target_color!r} not in active colors")
        if not set(self.active_colors) <= set(self.color_set):
            raise ConfigError(f"task {self.task_id!r}: active colors outside the global color set")
        if len(set(self.color_set)) != len(self.color_set):
            raise ConfigError("global color set contains duplicates")

    @property
    def n_colors(self) -> int:
        return len(self.color_set)

    @property
    def target_index(self) -> int:
        return self.color_set.index(self.target_color)

    @property
    def distractor_color(self) -> str:
        a, b = self.active_colors
        return b if self.target_color == a else a


@dataclass
class ArenaConfig:
    size: float = 20.0
    n_agents: int = 5
    n_boxes: int = 20
    n_neighbors: int = 3
    sensor_range: float = 4.0
    max_wheel_velocity: float = 2.0
    sensitivity: float = 0.5
    time_step: float = 0.1
    duration: int = 500
    max_retrieves: int = 20
    rate_target_block: float = 0.5
    repositioning: bool = True
    efficiency_reward: bool = False
    see_other_agents: bool = False
    boxes_in_line: bool = False

    def __post_init__(self):
        for name in ("size", "n_agents", "n_boxes", "n_neighbors", "sensor_range",
                     "max_wheel_velocity", "sensitivity", "time_step", "duration",
                     "max_retrieves"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive, got {getattr(self, name)}")
        if not 0.0 <= self.rate_target_block <= 1.0:
            raise ConfigError(f"rate_target_block must be in [0, 1], got {self.rate_target_block}")
        if self.size <= DROP_ZONE_DEPTH:
            raise ConfigError(f"arena size {self.size} leaves no room outside the drop zone")
        if self.efficiency_reward:
            raise ConfigError("efficiency_reward mode is not supported")
        if self.boxes_in_line:
            raise ConfigError("boxes_in_line mode is not supported")


def observation_width(n_colors: int, n_neighbors: int) -> int:
    """Total controller input width for c colors and n neighbor slots."""
    c, n = n_colors, n_neighbors
    return (c + 3) * n + n + 2 * n + 2 + (c + 1) + c


@dataclass
class Event:
    kind: str  # pickup-target | pickup-wrong | delivery-target | delivery-wrong
    agent_id: int
    box_id: int
    color: str
    step: int

    @property
    def value(self) -> int:
        return EVENT_VALUES[self.kind]


@dataclass
class StepOutcome:
    observations: np.ndarray  # (n_agents, width)
    reward: int
    events: list[Event]
    done: bool


@dataclass
class TrajectoryRecord:
    step: int
    agent_id: int
    x: float
    y: float
    heading: float
    carrying: str  # color name or "-"
    events: str    # ";"-joined event kinds or "-"


def _integrate_py(pos, heading, wheels, dt, radius, size):
    for i in range(pos.shape[0]):
        v1 = wheels[i, 0]
        v2 = wheels[i, 1]
        v3 = wheels[i, 2]
        vx = (v3 - v2) / SQRT3
        vy = (2.0 * v1 - v2 - v3) / 3.0
        omega = (v1 + v2 + v3) / (3.0 * radius)
        c = math.cos(heading[i])
        s = math.sin(heading[i])
        x = pos[i, 0] + (c * vx - s * vy) * dt
        y = pos[i, 1] + (s * vx + c * vy) * dt
        pos[i, 0] = min(max(x, 0.0), size)
        pos[i, 1] = min(max(y, 0.0), size)
        heading[i] = (heading[i] + omega * dt) % TWO_PI


def _move_py(pos, heading, wheels, dt, radius, size, vmax, carried, box_pos):
    """Clamp wheel speeds, integrate all agents, and drag carried boxes along.
    Returns the number of clamped wheel entries."""
    clamped = 0
    for i in range(pos.shape[0]):
        v1 = wheels[i, 0]
        v2 = wheels[i, 1]
        v3 = wheels[i, 2]
        if v1 > vmax or v1 < -vmax or v2 > vmax or v2 < -vmax or v3 > vmax or v3 < -vmax:
            clamped += 1
            v1 = min(max(v1, -vmax), vmax)
            v2 = min(max(v2, -vmax), vmax)
            v3 = min(max(v3, -vmax), vmax)
        vx = (v3 - v2) / SQRT3
        vy = (2.0 * v1 - v2 - v3) / 3.0
        omega = (v1 + v2 + v3) / (3.0 * radius)
        c = math.cos(heading[i])
        s = math.sin(heading[i])
        x = pos[i, 0] + (c * vx - s * vy) * dt
        y = pos[i, 1] + (s * vx + c * vy) * dt
        pos[i, 0] = min(max(x, 0.0), size)
        pos[i, 1] = min(max(y, 0.0), size)
        heading[i] = (heading[i] + omega * dt) % TWO_PI
        b = carried[i]
        if b >= 0:
            box_pos[b, 0] = pos[i, 0]
            box_pos[b, 1] = pos[i, 1]
    return clamped


def _pickups_py(agent_pos, carried, box_pos, box_state, sens2, picked):
    """Resolve pickups in agent-id order; nearest free box wins, ties to the
    lowest box id.  Mutates carried/box_state/box_pos; fills picked."""
    for a in range(agent_pos.shape[0]):
        picked[a] = -1
        if carried[a] >= 0:
            continue
        best = -1
        best_d2 = 1e300
        for b in range(box_pos.shape[0]):
            if box_state[b] != BOX_FREE:
                continue
            dx = box_pos[b, 0] - agent_pos[a, 0]
            dy = box_pos[b, 1] - agent_pos[a, 1]
            d2 = dx * dx + dy * dy
            if d2 <= sens2 and d2 < best_d2:
                best = b
                best_d2 = d2
        if best >= 0:
            carried[a] = best
            box_state[best] = BOX_CARRIED
            box_pos[best, 0] = agent_pos[a, 0]
            box_pos[best, 1] = agent_pos[a, 1]
            picked[a] = best


def _observe_py(out, agent_pos, agent_heading, carried, box_pos, box_color,
                box_state, n_neighbors, sensor_range, size, n_colors, target_idx,
                see_agents):
    n_agents = agent_pos.shape[0]
    n_boxes = box_pos.shape[0]
    max_cand = n_boxes + 1 + n_agents
    sr2 = sensor_range * sensor_range
    type_width = n_colors + 3
    dist_off = type_width * n_neighbors
    dir_off = dist_off + n_neighbors
    head_off = dir_off + 2 * n_neighbors
    carry_off = head_off + 2
    target_off = carry_off + n_colors + 1

    cand_d2 = np.empty(max_cand, dtype=np.float64)
    cand_dx = np.empty(max_cand, dtype=np.float64)
    cand_dy = np.empty(max_cand, dtype=np.float64)
    cand_type = np.empty(max_cand, dtype=np.int64)
    cand_id = np.empty(max_cand, dtype=np.int64)

    for a in range(n_agents):
        ax = agent_pos[a, 0]
        ay = agent_pos[a, 1]
        n_cand = 0
        for b in range(n_boxes):
            if box_state[b] != BOX_FREE:
                continue
            dx = box_pos[b, 0] - ax
            dy = box_pos[b, 1] - ay
            d2 = dx * dx + dy * dy
            if d2 <= sr2:
                cand_d2[n_cand] = d2
                cand_dx[n_cand] = dx
                cand_dy[n_cand] = dy
                cand_type[n_cand] = TYPE_COLOR0 + box_color[b]
                cand_id[n_cand] = b
                n_cand += 1
        # nearest boundary point, fixed left/right/bottom/top priority on ties
        wall_d = ax
        wall_dx = -ax
        wall_dy = 0.0
        if size - ax < wall_d:
            wall_d = size - ax
            wall_dx = size - ax
            wall_dy = 0.0
        if ay < wall_d:
            wall_d = ay
            wall_dx = 0.0
            wall_dy = -ay
        if size - ay < wall_d:
            wall_d = size - ay
            wall_dx = 0.0
            wall_dy = size - ay
        if wall_d <= sensor_range:
            cand_d2[n_cand] = wall_d * wall_d
            cand_dx[n_cand] = wall_dx
            cand_dy[n_cand] = wall_dy
            cand_type[n_cand] = TYPE_WALL
            cand_id[n_cand] = n_boxes
            n_cand += 1
        if see_agents:
            for j in range(n_agents):
                if j == a:
                    continue
                dx = agent_pos[j, 0] - ax
                dy = agent_pos[j, 1] - ay
                d2 = dx * dx + dy * dy
                if d2 <= sr2:
                    cand_d2[n_cand] = d2
                    cand_dx[n_cand] = dx
                    cand_dy[n_cand] = dy
                    cand_type[n_cand] = TYPE_AGENT
                    cand_id[n_cand] = n_boxes + 1 + j
                    n_cand += 1

        heading = agent_heading[a]
        for slot in range(n_neighbors):
            best = -1
            for k in range(n_cand):
                if cand_id[k] < 0:
                    continue
                if best < 0:
                    best = k
                    continue
                if (cand_d2[k] < cand_d2[best]
                        or (cand_d2[k] == cand_d2[best]
                            and (cand_type[k] < cand_type[best]
                                 or (cand_type[k] == cand_type[best]
                                     and cand_id[k] < cand_id[best])))):
                    best = k
            if best < 0:
                out[a, slot * type_width + TYPE_NONE] = 1.0
                out[a, dir_off + 2 * slot] = 0.5
                out[a, dir_off + 2 * slot + 1] = 0.5
            else:
                out[a, slot * type_width + cand_type[best]] = 1.0
                out[a, dist_off + slot] = math.sqrt(cand_d2[best]) / sensor_range
                angle = math.atan2(cand_dy[best], cand_dx[best]) - heading
                out[a, dir_off + 2 * slot] = (math.sin(angle) + 1.0) / 2.0
                out[a, dir_off + 2 * slot + 1] = (math.cos(angle) + 1.0) / 2.0
                cand_id[best] = -1
        out[a, head_off] = (math.sin(heading) + 1.0) / 2.0
        out[a, head_off + 1] = (math.cos(heading) + 1.0) / 2.0
        if carried[a] < 0:
            out[a, carry_off] = 1.0
        else:
            out[a, carry_off + 1 + box_color[carried[a]]] = 1.0
        out[a, target_off + target_idx] = 1.0


try:  # pragma: no cover
    from numba import njit

    _integrate = njit(cache=True)(_integrate_py)
    _move = njit(cache=True)(_move_py)
    _pickups = njit(cache=True)(_pickups_py)
    _observe = njit(cache=True)(_observe_py)
except ImportError:  # pragma: no cover
    _integrate = _integrate_py
    _move = _move_py
    _pickups = _pickups_py
    _observe = _observe_py


def integrate_motion(position, heading: float, wheel_velocities, dt: float,
                     size: float, radius: float = ROBOT_RADIUS):
    """Advance one robot by one time step.

    The three omni wheels mount tangentially at body angles 0/120/240 degrees;
    the body twist is the (exact) pseudo-inverse of the wheel Jacobian applied
    to the wheel speeds, integrated in the world frame via the current heading.
    Positions clamp to the arena bounds.
    """
    pos = np.array([position], dtype=np.float64)
    head = np.array([heading], dtype=np.float64)
    wheels = np.array([wheel_velocities], dtype=np.float64)
    _integrate(pos, head, wheels, dt, radius, size)
    return (pos[0, 0], pos[0, 1]), head[0]


class Arena:
    """One episodic arena instance.  Single-threaded; independent instances
    are safe to run concurrently (all randomness is instance-local)."""

    def __init__(self, config: ArenaConfig, task: TaskSpec):
        self.config = config
        self.task = task
        self.rng: np.random.Generator | None = None
        self.agent_pos = np.zeros((config.n_agents, 2))
        self.agent_heading = np.zeros(config.n_agents)
        self.carried = np.full(config.n_agents, -1, dtype=np.int64)  # box index or -1
        self.box_pos = np.zeros((config.n_boxes, 2))
        self.box_color = np.zeros(config.n_boxes, dtype=np.int64)    # global color index
        self.box_state = np.zeros(config.n_boxes, dtype=np.int64)
        self.step_count = 0
        self.retrieve_count = 0
        self.clamp_count = 0
        self.recording = False
        self.trajectory: list[TrajectoryRecord] = []
        self._picked = np.full(config.n_agents, -1, dtype=np.int64)  # kernel scratch
        self._cache_task()

    def _cache_task(self) -> None:
        self._target_idx = self.task.target_index
        self._distractor_idx = self.task.color_set.index(self.task.distractor_color)
        self._obs_width = observation_width(self.task.n_colors, self.config.n_neighbors)
        self._n_colors = self.task.n_colors

    @property
    def observation_size(self) -> int:
        return self._obs_width

    def change_task(self, new_task: TaskSpec) -> None:
        """Switch the active task; takes effect at the next reset."""
        if tuple(new_task.color_set) != tuple(self.task.color_set):
            raise ConfigError(
                f"task {new_task.task_id!r} uses a different global color set; "
                "the observation width is fixed by the color vocabulary"
            )
        self.task = new_task
        self._cache_task()

    def _sample_outside_drop_zone(self, rng: np.random.Generator) -> tuple[float, float]:
        x = rng.uniform(0.0, self.config.size)
        y = rng.uniform(0.0, self.config.size - DROP_ZONE_DEPTH)
        return x, y

    def reset(self, seed: int) -> np.ndarray:
        """Place boxes and agents uniformly at random outside the drop zone
        and return the initial observations.  Deterministic given the seed."""
        cfg = self.config
        self.rng = np.random.default_rng(seed)
        n_target = round(cfg.n_boxes * cfg.rate_target_block)
        for b in range(cfg.n_boxes):
            self.box_pos[b] = self._sample_outside_drop_zone(self.rng)
            self.box_color[b] = self._target_idx if b < n_target else self._distractor_idx
        self.box_state[:] = BOX_FREE

        placed: list[tuple[float, float]] = []
        for a in range(cfg.n_agents):
            for _ in range(1000):
                x, y = self._sample_outside_drop_zone(self.rng)
                if all((x - px) ** 2 + (y - py) ** 2 >= 1.0 for px, py in placed):
                    placed.append((x, y))
                    break
            else:
                raise ConfigError(
                    f"could not place {cfg.n_agents} agents with 1-unit separation "
                    f"in a {cfg.size}-unit arena (too crowded)"
                )
            self.agent_pos[a] = placed[-1]
        self.agent_heading[:] = self.rng.uniform(0.0, TWO_PI, cfg.n_agents)

        self.carried[:] = -1
        self.step_count = 0
        self.retrieve_count = 0
        self.clamp_count = 0
        self.trajectory = []
        return self._compute_observations()

    def step(self, actions) -> StepOutcome:
        """Advance the arena by one time step given per-agent wheel triples."""
        cfg = self.config
        actions = np.asarray(actions, dtype=np.float64)
        if actions.shape != (cfg.n_agents, 3):
            raise ValueError(f"expected actions of shape {(cfg.n_agents, 3)}, got {actions.shape}")
        self.clamp_count += _move(self.agent_pos, self.agent_heading, actions,
                                  cfg.time_step, ROBOT_RADIUS, cfg.size,
                                  cfg.max_wheel_velocity, self.carried, self.box_pos)

        self.step_count += 1
        events: list[Event] = []
        drop_edge = cfg.size - DROP_ZONE_DEPTH
        target_idx = self._target_idx

        carried = self.carried.tolist()
        if any(b >= 0 for b in carried):
            ys = self.agent_pos[:, 1].tolist()
            for a, b in enumerate(carried):
                if b < 0 or ys[a] < drop_edge:
                    continue
                color_idx = int(self.box_color[b])
                kind = "delivery-target" if color_idx == target_idx else "delivery-wrong"
                events.append(Event(kind, a, b, self.task.color_set[color_idx], self.step_count))
                self.carried[a] = -1
                self.retrieve_count += 1
                if cfg.repositioning:
                    self.box_pos[b] = self._sample_outside_drop_zone(self.rng)
                    self.box_state[b] = BOX_FREE
                else:
                    self.box_state[b] = BOX_RETIRED

        _pickups(self.agent_pos, self.carried, self.box_pos, self.box_state,
                 cfg.sensitivity ** 2, self._picked)
        for a, b in enumerate(self._picked.tolist()):
            if b < 0:
                continue
            color_idx = int(self.box_color[b])
            kind = "pickup-target" if color_idx == target_idx else "pickup-wrong"
            events.append(Event(kind, a, b, self.task.color_set[color_idx], self.step_count))

        reward = sum(e.value for e in events) if events else 0
        done = self.step_count >= cfg.duration or self.retrieve_count >= cfg.max_retrieves
        if done and self.clamp_count:
            log.debug("episode clamped out-of-range wheel velocities on %d agent-steps",
                      self.clamp_count)
        obs = self._compute_observations()
        if self.recording:
            self._record(events)
        return StepOutcome(obs, reward, events, done)

    def _record(self, events: list[Event]) -> None:
        by_agent: dict[int, list[str]] = {}
        for e in events:
            by_agent.setdefault(e.agent_id, []).append(e.kind)
        for a in range(self.config.n_agents):
            b = self.carried[a]
            carrying = self.task.color_set[int(self.box_color[b])] if b >= 0 else "-"
            kinds = ";".join(by_agent[a]) if a in by_agent else "-"
            self.trajectory.append(TrajectoryRecord(
                self.step_count, a, float(self.agent_pos[a, 0]), float(self.agent_pos[a, 1]),
                float(self.agent_heading[a]), carrying, kinds,
            ))

    def _compute_observations(self) -> np.ndarray:
        cfg = self.config
        out = np.zeros((cfg.n_agents, self._obs_width))
        _observe(out, self.agent_pos, self.agent_heading, self.carried,
                 self.box_pos, self.box_color, self.box_state,
                 cfg.n_neighbors, cfg.sensor_range, cfg.size, self._n_colors,
                 self._target_idx, cfg.see_other_agents)
        return out

    def observe(self, agent_id: int) -> np.ndarray:
        """Observation vector for one agent at the current state."""
        if not 0 <= agent_id < self.config.n_agents:
            raise ValueError(f"no agent {agent_id}")
        return self._compute_observations()[agent_id]


def write_trajectory(path, records: list[TrajectoryRecord]) -> None:
    with open(path, "w") as fh:
        fh.write("step,agent_id,x,y,heading,carrying,events\n")
        for r in records:
            fh.write(f"{r.step},{r.agent_id},{r.x!r},{r.y!r},{r.heading!r},{r.carrying},{r.events}\n")


def read_trajectory(path) -> list[TrajectoryRecord]:
    records = []
    with open(path) as fh:
        next(fh)  # header
        for line in fh:
            step, agent_id, x, y, heading, carrying, events = line.rstrip("\n").split(",")
            records.append(TrajectoryRecord(int(step), int(agent_id), float(x), float(y),
                                            float(heading), carrying, events))
    return records


def trajectory_reward(records: list[TrajectoryRecord]) -> int:
    """Recount the episode reward from a trajectory log's event column."""
    total = 0
    for r in records:
        if r.events != "-":
            for kind in r.events.split(";"):
                total += EVENT_VALUES[kind]
    return total
