"""Simulation workbench for load-balanced slate recommendation policies."""

from .core import (
    AGENT_KINDS,
    ConfigurationError,
    ContractViolation,
    Corpus,
    Document,
    SimConfig,
    Slate,
    UserState,
    build_corpus,
    spawn_user,
)
from .environment import ChoiceOutcome, bonus, choose, step, update_interest, utility
from .agents import (
    EpsGreedyAgent,
    LBRSAgent,
    RandomAgent,
    base_threshold,
    hetero_probs,
    make_agent,
    normalize_quality,
    priority_threshold,
    random_slate,
    window_length,
)
from .metrics import (
    RunSummary,
    StepRecord,
    bls,
    diversity_score,
    ils,
    item_similarity,
    summarize,
)
from .harness import SweepSpec, load_config_file, run_experiment, run_sweep

__version__ = "0.1.0"

__all__ = [
    "AGENT_KINDS",
    "ChoiceOutcome",
    "ConfigurationError",
    "ContractViolation",
    "Corpus",
    "Document",
    "EpsGreedyAgent",
    "LBRSAgent",
    "RandomAgent",
    "RunSummary",
    "SimConfig",
    "Slate",
    "StepRecord",
    "SweepSpec",
    "UserState",
    "base_threshold",
    "bls",
    "bonus",
    "build_corpus",
    "choose",
    "diversity_score",
    "hetero_probs",
    "ils",
    "item_similarity",
    "load_config_file",
    "make_agent",
    "normalize_quality",
    "priority_threshold",
    "random_slate",
    "run_experiment",
    "run_sweep",
    "spawn_user",
    "step",
    "summarize",
    "update_interest",
    "utility",
    "window_length",
]
