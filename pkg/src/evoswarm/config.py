"""Evolution parameter table with validation.

Field names follow the neat-python configuration vocabulary so a parameter
table can be transcribed into a config file verbatim.  Activation and
response rows are carried for completeness but are not evolvable here:
the activation function is fixed and the response multiplier stays at 1.0.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

from .errors import ConfigError

_PROBABILITY_FIELDS = (
    "conn_add_prob", "conn_delete_prob", "node_add_prob", "node_delete_prob",
    "activation_mutate_rate", "bias_replace_rate", "bias_mutate_rate",
    "response_replace_rate", "response_mutate_rate",
    "weight_mutate_rate", "weight_replace_rate", "enabled_mutate_rate",
    "survival_threshold",
)


@dataclass
class NeatConfig:
    population_size: int = 300
    num_hidden: int = 1
    initial_connection: str = "partial_direct 0.5"
    feed_forward: bool = True
    compatibility_disjoint_coefficient: float = 1.0
    compatibility_weight_coefficient: float = 0.6
    conn_add_prob: float = 0.2
    conn_delete_prob: float = 0.2
    node_add_prob: float = 0.2
    node_delete_prob: float = 0.2
    activation_default: str = "neat_sigmoid"
    activation_options: str = "neat_sigmoid"
    activation_mutate_rate: float = 0.0
    bias_init_mean: float = 0.0
    bias_init_stdev: float = 1.0
    bias_replace_rate: float = 0.1
    bias_mutate_rate: float = 0.7
    bias_mutate_power: float = 0.5
    bias_max_value: float = 5.0
    bias_min_value: float = -5.0
    response_init_mean: float = 1.0
    response_init_stdev: float = 0.0
    response_replace_rate: float = 0.0
    response_mutate_rate: float = 0.0
    response_mutate_power: float = 0.0
    response_max_value: float = 5.0
    response_min_value: float = -5.0
    weight_max_value: float = 5.0
    weight_min_value: float = -5.0
    weight_init_mean: float = 0.0
    weight_init_stdev: float = 1.0
    weight_mutate_rate: float = 0.8
    weight_replace_rate: float = 0.1
    weight_mutate_power: float = 1.0
    enabled_default: bool = True
    enabled_mutate_rate: float = 0.01
    compatibility_threshold: float = 3.0
    species_fitness_func: str = "max"
    max_stagnation: int = 20
    species_elitism: int = 1
    elitism: int = 5
    survival_threshold: float = 0.2

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if self.population_size < 2:
            raise ConfigError(f"population_size must be >= 2, got {self.population_size}")
        if self.num_hidden < 0:
            raise ConfigError(f"num_hidden must be >= 0, got {self.num_hidden}")
        for name in _PROBABILITY_FIELDS:
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ConfigError(f"{name} must be in [0, 1], got {v}")
        for prefix in ("weight", "bias", "response"):
            lo = getattr(self, f"{prefix}_min_value")
            hi = getattr(self, f"{prefix}_max_value")
            if lo > hi:
                raise ConfigError(f"{prefix}_min_value {lo} exceeds {prefix}_max_value {hi}")
        if self.compatibility_threshold <= 0:
            raise ConfigError(f"compatibility_threshold must be positive, got {self.compatibility_threshold}")
        if self.compatibility_disjoint_coefficient < 0 or self.compatibility_weight_coefficient < 0:
            raise ConfigError("compatibility coefficients must be non-negative")
        if self.max_stagnation < 1:
            raise ConfigError(f"max_stagnation must be >= 1, got {self.max_stagnation}")
        if self.species_elitism < 0 or self.elitism < 0:
            raise ConfigError("species_elitism and elitism must be non-negative")
        if not self.feed_forward:
            raise ConfigError("only feed_forward = True networks are supported")
        if self.species_fitness_func != "max":
            raise ConfigError(f"unsupported species_fitness_func {self.species_fitness_func!r}")
        parts = self.initial_connection.split()
        if len(parts) != 2 or parts[0] != "partial_direct":
            raise ConfigError(f"unsupported initial_connection {self.initial_connection!r}")
        try:
            frac = float(parts[1])
        except ValueError:
            raise ConfigError(f"invalid initial_connection fraction {parts[1]!r}") from None
        if not 0.0 <= frac <= 1.0:
            raise ConfigError(f"initial_connection fraction must be in [0, 1], got {frac}")

    @property
    def initial_connection_fraction(self) -> float:
        return float(self.initial_connection.split()[1])

    @classmethod
    def field_names(cls) -> list[str]:
        return [f.name for f in fields(cls)]
