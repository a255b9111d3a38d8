"""Accuracy and diversity measurement.

Items carry two one-hot feature blocks: topic, and quality class (high
when quality >= 0, low otherwise).  Pairwise similarity is the cosine of
those blocks: 1 when both match, 0.5 when one matches, 0 otherwise.

ILS averages similarity over ordered within-slate pairs.  BLS averages
it over cross pairs of two consecutive slates, except a repeated item
counts with weight k instead of 1 in both numerator and denominator,
which pulls the score toward 1 when slates repeat items.  The combined
score is (alpha * ILS + beta * BLS) / 2, so lower means more diverse.
The first slate of a session has no predecessor; its combined score is
its ILS alone and its BLS is recorded as absent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .core import ContractViolation, Corpus, Document, SimConfig, Slate


def item_similarity(a: Document, b: Document) -> float:
    """Cosine of the concatenated (topic, quality-class) one-hot features."""
    topic_match = 1.0 if a.topic == b.topic else 0.0
    class_match = 1.0 if (a.quality >= 0) == (b.quality >= 0) else 0.0
    return (topic_match + class_match) / 2.0


def _slate_features(slate: Sequence[int], corpus: Corpus) -> tuple[np.ndarray, np.ndarray]:
    ids = np.asarray(slate, dtype=np.int64)
    return corpus.topics[ids], corpus.qualities[ids] >= 0


def _pair_similarities(topics_a, classes_a, topics_b, classes_b) -> np.ndarray:
    topic = topics_a[:, None] == topics_b[None, :]
    cls = classes_a[:, None] == classes_b[None, :]
    return (topic.astype(np.float64) + cls.astype(np.float64)) / 2.0


def ils(slate: Slate | Sequence[int], corpus: Corpus) -> Optional[float]:
    """Mean similarity over ordered within-slate pairs; None below two items."""
    items = slate.items if isinstance(slate, Slate) else tuple(slate)
    n = len(items)
    if n < 2:
        return None
    topics, classes = _slate_features(items, corpus)
    sims = _pair_similarities(topics, classes, topics, classes)
    # drop the diagonal (identical-item pairs are not part of the average)
    return float((sims.sum() - n) / (n * (n - 1)))


def bls(prev: Slate | Sequence[int], nxt: Slate | Sequence[int], corpus: Corpus,
        k: int) -> float:
    """Cross-slate similarity with repeated items weighted by k."""
    prev_items = prev.items if isinstance(prev, Slate) else tuple(prev)
    next_items = nxt.items if isinstance(nxt, Slate) else tuple(nxt)
    if not prev_items or not next_items:
        raise ContractViolation("bls() requires two non-empty slates")
    ta, ca = _slate_features(prev_items, corpus)
    tb, cb = _slate_features(next_items, corpus)
    sims = _pair_similarities(ta, ca, tb, cb)
    same = (np.asarray(prev_items)[:, None] == np.asarray(next_items)[None, :])
    numerator = float(sims[~same].sum()) + k * float(same.sum())
    denominator = float((~same).sum()) + k * float(same.sum())
    return numerator / denominator


def diversity_score(ils_value: Optional[float], bls_value: Optional[float],
                    config: SimConfig) -> Optional[float]:
    """Weighted combination; falls back to ILS alone on the first slate."""
    if ils_value is None:
        return None
    if bls_value is None:
        return ils_value
    return (config.alpha * ils_value + config.beta * bls_value) / 2.0


@dataclass(frozen=True)
class StepRecord:
    """Everything observed at one step of one session."""

    user_id: int
    step: int
    slate: tuple[int, ...]
    chosen: Optional[int]
    reward: float
    ils: Optional[float]
    bls: Optional[float]
    d_score: Optional[float]


@dataclass(frozen=True)
class RunSummary:
    """Aggregates of one run with 95% confidence half-widths over users."""

    n_users: int
    n_steps: int
    avg_reward_step: float
    avg_reward_session: float
    avg_diversity: float
    avg_ils: float
    avg_bls: float
    mean_session_len: float
    ci_reward_step: float
    ci_reward_session: float
    ci_diversity: float
    ci_ils: float
    ci_bls: float
    ci_session_len: float


class UserAccumulator:
    """Streaming per-session sums; avoids retaining every step record."""

    __slots__ = ("user_id", "steps", "reward", "ils_sum", "ils_n",
                 "bls_sum", "bls_n", "d_sum", "d_n")

    def __init__(self, user_id: int):
        self.user_id = user_id
        self.steps = 0
        self.reward = 0.0
        self.ils_sum = 0.0
        self.ils_n = 0
        self.bls_sum = 0.0
        self.bls_n = 0
        self.d_sum = 0.0
        self.d_n = 0

    def add(self, reward: float, ils_value: Optional[float],
            bls_value: Optional[float], d_value: Optional[float]) -> None:
        self.steps += 1
        self.reward += reward
        if ils_value is not None:
            self.ils_sum += ils_value
            self.ils_n += 1
        if bls_value is not None:
            self.bls_sum += bls_value
            self.bls_n += 1
        if d_value is not None:
            self.d_sum += d_value
            self.d_n += 1

    def as_row(self) -> tuple:
        return (self.user_id, self.steps, self.reward, self.ils_sum, self.ils_n,
                self.bls_sum, self.bls_n, self.d_sum, self.d_n)


def _ci_half_width(values: np.ndarray) -> float:
    n = values.size
    if n < 2:
        return 0.0
    return 1.96 * float(values.std(ddof=1)) / math.sqrt(n)


def summarize_user_rows(rows: Sequence[tuple]) -> RunSummary:
    """Reduce per-user accumulator rows (in user order) to a RunSummary."""
    if not rows:
        raise ContractViolation("summarize requires at least one completed session")
    arr = np.asarray([r[1:] for r in rows], dtype=np.float64)
    steps, reward = arr[:, 0], arr[:, 1]
    ils_sum, ils_n = arr[:, 2], arr[:, 3]
    bls_sum, bls_n = arr[:, 4], arr[:, 5]
    d_sum, d_n = arr[:, 6], arr[:, 7]

    def pooled(total, count):
        c = float(count.sum())
        return float(total.sum()) / c if c > 0 else float("nan")

    def per_user(total, count):
        with np.errstate(invalid="ignore", divide="ignore"):
            vals = total / count
        return vals[count > 0]

    return RunSummary(
        n_users=len(rows),
        n_steps=int(steps.sum()),
        avg_reward_step=pooled(reward, steps),
        avg_reward_session=float(reward.sum()) / len(rows),
        avg_diversity=pooled(d_sum, d_n),
        avg_ils=pooled(ils_sum, ils_n),
        avg_bls=pooled(bls_sum, bls_n),
        mean_session_len=float(steps.mean()),
        ci_reward_step=_ci_half_width(per_user(reward, steps)),
        ci_reward_session=_ci_half_width(reward),
        ci_diversity=_ci_half_width(per_user(d_sum, d_n)),
        ci_ils=_ci_half_width(per_user(ils_sum, ils_n)),
        ci_bls=_ci_half_width(per_user(bls_sum, bls_n)),
        ci_session_len=_ci_half_width(steps),
    )


def summarize(records: Iterable[StepRecord], config: SimConfig) -> RunSummary:
    """Aggregate step records (any order) into a RunSummary."""
    users: dict[int, UserAccumulator] = {}
    for rec in records:
        acc = users.get(rec.user_id)
        if acc is None:
            acc = users[rec.user_id] = UserAccumulator(rec.user_id)
        acc.add(rec.reward, rec.ils, rec.bls, rec.d_score)
    rows = [users[uid].as_row() for uid in sorted(users)]
    return summarize_user_rows(rows)
