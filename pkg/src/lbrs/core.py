"""Shared domain types: catalog, users, slates, and run configuration.

Every random quantity in a run is drawn from a stream derived from
(master seed, user id), so a full run is a pure function of its
configuration and can be executed with sessions in any order.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from typing import Optional

import numpy as np

AGENT_KINDS = ("B-LBRS", "P-LBRS", "H-LBRS", "Random", "EpsGreedy")

# Spawn-key domains for deriving independent RNG streams from one seed.
_DOMAIN_CORPUS = 0
_DOMAIN_USER = 1
_DOMAIN_AGENT = 2
_DOMAIN_SWEEP = 3


class ConfigurationError(ValueError):
    """Raised when a SimConfig (or derived setting) is invalid."""


class ContractViolation(ValueError):
    """Raised when an operation is called outside its stated precondition."""


@dataclass(frozen=True)
class Document:
    """One recommendable item: a topic label plus an inherent quality score."""

    id: int
    topic: int
    quality: float


class Corpus:
    """Fixed catalog of M documents, stored columnar for fast scans.

    The first ``high_topic_count`` topics hold non-negative qualities,
    all remaining topics hold non-positive ones.
    """

    def __init__(self, topics: np.ndarray, qualities: np.ndarray, high_topic_count: int):
        topics = np.asarray(topics, dtype=np.int64)
        qualities = np.asarray(qualities, dtype=np.float64)
        if topics.shape != qualities.shape or topics.ndim != 1:
            raise ConfigurationError("corpus topics/qualities must be 1-d arrays of equal length")
        self.topics = topics
        self.qualities = qualities
        self.high_topic_count = int(high_topic_count)

    def __len__(self) -> int:
        return self.topics.shape[0]

    @property
    def size(self) -> int:
        return len(self)

    def document(self, doc_id: int) -> Document:
        return Document(int(doc_id), int(self.topics[doc_id]), float(self.qualities[doc_id]))

    def __iter__(self):
        for i in range(len(self)):
            yield self.document(i)


@dataclass
class UserState:
    """Per-session user state: topic interests in [-1, 1] and a time budget."""

    user_id: int
    interest: np.ndarray
    budget: float


@dataclass(frozen=True)
class Slate:
    """Ordered list of recommended document ids for one time step."""

    items: tuple[int, ...]
    step: int

    def __post_init__(self):
        if len(set(self.items)) != len(self.items):
            raise ContractViolation("slate contains duplicate document ids")

    def __len__(self) -> int:
        return len(self.items)


@dataclass(frozen=True)
class SimConfig:
    """All parameters of one simulated run.

    ``p`` defaults to k/100 and ``q_min`` to -q_max when left unset.
    Field names double as the keys of the flat key-value config file
    format understood by the CLI (``lambda_`` is written as ``lambda``).
    """

    N: int = 5000                # users per run
    M: int = 10000               # catalog size
    T: int = 20                  # topic count
    k: int = 5                   # slate size
    p: Optional[float] = None    # per-item recommendation probability
    q_max: float = 3.0
    q_min: Optional[float] = None
    y: float = 0.3               # interest-change coefficient
    gamma: float = 1.0           # utility mixing weight
    alpha: float = 1.0           # within-slate diversity weight
    beta: float = 1.0            # between-slate diversity weight
    b0: float = 200.0            # initial time budget
    len_doc: float = 4.0         # budget cost of consuming a document
    len_null: float = 1.0        # budget cost of choosing nothing
    len_bonus: float = 4.0       # consumption length in the bonus formula
    p_null: float = 0.5          # probability of choosing nothing
    reward_click: float = 4.0
    lambda_: float = 0.0         # heterogeneity coefficient
    q_threshold: Optional[float] = None  # quality cutoff for the high pool
    seed: int = 0
    agent_kind: str = "B-LBRS"
    epsilon: float = 0.1         # exploration rate of the EpsGreedy agent
    deterministic_k: bool = True  # False: raw probabilistic election, noisy slate sizes
    # which optional fields were derived rather than given (kept so that
    # replace() re-derives them when their source field changes)
    _derived: frozenset = field(default=frozenset(), init=False, compare=False, repr=False)

    def __post_init__(self):
        derived = set()
        if self.p is None:
            object.__setattr__(self, "p", self.k / 100.0)
            derived.add("p")
        if self.q_min is None:
            object.__setattr__(self, "q_min", -self.q_max)
            derived.add("q_min")
        if self.q_threshold is None:
            object.__setattr__(self, "q_threshold", -self.q_max)
            derived.add("q_threshold")
        object.__setattr__(self, "_derived", frozenset(derived))
        self.validate()

    def validate(self) -> None:
        checks = [
            (self.N >= 1, "N", "must be >= 1"),
            (self.M >= 1, "M", "must be >= 1"),
            (self.T >= 1, "T", "must be >= 1"),
            (self.k >= 1, "k", "must be >= 1"),
            (self.k <= self.M, "k", "must not exceed M"),
            (0.0 < self.p <= 1.0, "p", "must lie in (0, 1]"),
            (self.q_max > 0.0, "q_max", "must be positive"),
            (self.q_min < self.q_max, "q_min", "must be below q_max"),
            (0.0 <= self.y <= 1.0, "y", "must lie in [0, 1]"),
            (0.0 <= self.gamma <= 1.0, "gamma", "must lie in [0, 1]"),
            (self.alpha >= 0.0, "alpha", "must be >= 0"),
            (self.beta >= 0.0, "beta", "must be >= 0"),
            (self.b0 > 0.0, "b0", "must be positive"),
            (self.len_doc > 0.0, "len_doc", "must be positive"),
            (self.len_null > 0.0, "len_null", "must be positive"),
            (self.len_bonus >= 0.0, "len_bonus", "must be >= 0"),
            (0.0 <= self.p_null <= 1.0, "p_null", "must lie in [0, 1]"),
            (self.reward_click >= 0.0, "reward_click", "must be >= 0"),
            (self.lambda_ >= 0.0, "lambda", "must be >= 0"),
            (self.seed >= 0, "seed", "must be >= 0"),
            (self.agent_kind in AGENT_KINDS, "agent_kind",
             f"must be one of {', '.join(AGENT_KINDS)}"),
            (0.0 <= self.epsilon <= 1.0, "epsilon", "must lie in [0, 1]"),
        ]
        bad = [f"{name} {msg} (got {getattr(self, 'lambda_' if name == 'lambda' else name)!r})"
               for ok, name, msg in checks if not ok]
        if bad:
            raise ConfigurationError("; ".join(bad))

    def replace(self, **overrides) -> "SimConfig":
        values = {f.name: getattr(self, f.name) for f in fields(self) if f.init}
        if "k" in overrides and "p" not in overrides and "p" in self._derived:
            values["p"] = None
        if "q_max" in overrides:
            if "q_min" not in overrides and "q_min" in self._derived:
                values["q_min"] = None
            if "q_threshold" not in overrides and "q_threshold" in self._derived:
                values["q_threshold"] = None
        values.update(overrides)
        return SimConfig(**values)

    @property
    def high_topic_count(self) -> int:
        return self.T // 3


def corpus_rng(config: SimConfig) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(config.seed, spawn_key=(_DOMAIN_CORPUS,)))


def user_rng(config: SimConfig, user_id: int) -> np.random.Generator:
    """Environment-side stream (interests, choices, interest drift) of one user."""
    return np.random.default_rng(
        np.random.SeedSequence(config.seed, spawn_key=(_DOMAIN_USER, user_id)))


def agent_rng(config: SimConfig, user_id: int) -> np.random.Generator:
    """Agent-side stream (slate election coins) of one user's session."""
    return np.random.default_rng(
        np.random.SeedSequence(config.seed, spawn_key=(_DOMAIN_AGENT, user_id)))


def sweep_seed(master_seed: int, value_index: int, replicate: int) -> int:
    """Derive the run seed of one sweep cell from (master seed, cell coordinates)."""
    ss = np.random.SeedSequence(master_seed, spawn_key=(_DOMAIN_SWEEP, value_index, replicate))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def build_corpus(config: SimConfig, rng: Optional[np.random.Generator] = None) -> Corpus:
    """Draw the document catalog.

    Topics are assigned uniformly.  Documents in the first T//3 topics get
    qualities uniform on [0, q_max]; all others uniform on [-q_max, 0].
    """
    config.validate()
    if rng is None:
        rng = corpus_rng(config)
    topics = rng.integers(0, config.T, size=config.M, dtype=np.int64)
    magnitudes = rng.uniform(0.0, config.q_max, size=config.M)
    high = topics < config.high_topic_count
    qualities = np.where(high, magnitudes, -magnitudes)
    return Corpus(topics, qualities, config.high_topic_count)


def spawn_user(config: SimConfig, user_id: int,
               rng: Optional[np.random.Generator] = None) -> UserState:
    """Draw a fresh user: interests i.i.d. uniform on [-1, 1], full budget."""
    config.validate()
    if rng is None:
        rng = user_rng(config, user_id)
    interest = rng.uniform(-1.0, 1.0, size=config.T)
    return UserState(user_id=user_id, interest=interest, budget=float(config.b0))
