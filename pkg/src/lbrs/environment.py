"""Simulated user dynamics.

One step of a session: the user either ignores the slate (probability
``p_null``) or picks one item with probability proportional to
interest + 1 in the item's topic.  Consuming an item costs ``len_doc``
budget units, replenishes ``(0.9 / 3.4) * len_bonus * S`` where S is the
item's utility, pays a fixed click reward, and drifts the consumed
topic's interest.  Ignoring the slate costs ``len_null``.  The session is
over once the remaining budget cannot cover another document.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import Corpus, SimConfig, Slate, UserState, ContractViolation

BONUS_SCALE = 0.9 / 3.4


@dataclass(frozen=True)
class ChoiceOutcome:
    """Result of one step: what was chosen, the reward, and the budget left."""

    chosen: Optional[int]
    reward: float
    budget_after: float
    session_over: bool


def utility(user: UserState, doc_id: int, corpus: Corpus, config: SimConfig) -> float:
    """Blend of the user's interest in the item's topic and the item's quality."""
    interest = float(user.interest[corpus.topics[doc_id]])
    quality = float(corpus.qualities[doc_id])
    return (1.0 - config.gamma) * interest + config.gamma * quality


def bonus(utility_value: float, config: SimConfig) -> float:
    """Budget replenishment earned by consuming an item; negative for bad items."""
    return BONUS_SCALE * config.len_bonus * utility_value


def choose(user: UserState, slate: Slate, corpus: Corpus, config: SimConfig,
           rng: np.random.Generator) -> Optional[int]:
    """Pick the null option or one slate item.

    The null coin is resolved first with probability ``p_null``.  Otherwise
    one item is drawn with weight interest + 1 (uniform if all weights
    vanish, i.e. the user is maximally uninterested in every topic shown).
    """
    if len(slate) == 0:
        raise ContractViolation("choose() requires a non-empty slate")
    if rng.random() < config.p_null:
        return None
    weights = user.interest[corpus.topics[list(slate.items)]] + 1.0
    total = float(weights.sum())
    u = rng.random()
    if total <= 0.0:
        index = min(int(u * len(slate)), len(slate) - 1)
        return slate.items[index]
    cum = np.cumsum(weights)
    index = int(np.searchsorted(cum, u * total, side="right"))
    return slate.items[min(index, len(slate) - 1)]


def update_interest(user: UserState, consumed_topic: int, config: SimConfig,
                    rng: np.random.Generator) -> UserState:
    """Drift the consumed topic's interest in place; returns the same user.

    The magnitude is (-y|I| + y) * (-I); it is added with probability
    (I + 1) / 2 and subtracted otherwise, then clamped to [-1, 1].
    """
    if consumed_topic >= config.T:
        raise ContractViolation(f"topic {consumed_topic} out of range (T={config.T})")
    i = float(user.interest[consumed_topic])
    delta = (-config.y * abs(i) + config.y) * (-i)
    if rng.random() < (i + 1.0) / 2.0:
        i = i + delta
    else:
        i = i - delta
    user.interest[consumed_topic] = min(1.0, max(-1.0, i))
    return user


def step(user: UserState, slate: Slate, corpus: Corpus, config: SimConfig,
         rng: np.random.Generator) -> ChoiceOutcome:
    """Run one interaction step, mutating the user's budget and interests."""
    if user.budget < config.len_doc:
        raise ContractViolation("step() called with budget below len_doc")
    chosen = choose(user, slate, corpus, config, rng)
    if chosen is None:
        user.budget -= config.len_null
        reward = 0.0
    else:
        s = utility(user, chosen, corpus, config)
        user.budget -= config.len_doc
        user.budget += bonus(s, config)
        reward = config.reward_click
        update_interest(user, int(corpus.topics[chosen]), config, rng)
    return ChoiceOutcome(
        chosen=chosen,
        reward=reward,
        budget_after=user.budget,
        session_over=user.budget < config.len_doc,
    )
