"""Recommendation policies.

The three load-balanced policies elect items probabilistically: at step t
an eligible item is included when a uniform draw falls below its
threshold, and every included item is barred from re-election until the
rotation window (ceil(1/p) steps) wraps.  The basic variant treats all
items alike, the priority variant scales each item's threshold by its
normalized quality, and the heterogeneous variant splits the catalog
into a high- and a low-quality pool with separate election
probabilities and windows.

Slate construction rescans the eligible items until exactly k are
elected.  When every eligible item is already barred and the slate is
still short, the window is reset early (counted, so tests can assert it
never happens in configurations that guarantee a full rotation).

Item order within a slate carries no meaning; every consumer treats a
slate as a set.
"""

from __future__ import annotations

import math

import numpy as np

from .core import (
    ConfigurationError,
    ContractViolation,
    Corpus,
    SimConfig,
    Slate,
)


def window_length(p: float) -> int:
    """Rotation window in steps; probabilities >= 1 rotate every step."""
    if p >= 1.0:
        return 1
    return math.ceil(1.0 / p)


def base_threshold(p: float, step_index: int) -> float:
    """Election threshold p / (1 - p * (t mod ceil(1/p))), clamped to [0, 1].

    The clamp only binds when 1/p is not an integer, where the final step
    of a window pushes the raw value above one (certain election either way).
    """
    w = window_length(p)
    t = step_index % w
    raw = p / (1.0 - p * t)
    return min(1.0, max(0.0, raw))


def normalize_quality(q: float, q_min: float, q_max: float) -> float:
    """Map a quality in [q_min, q_max] linearly onto [0, 1]."""
    if q < q_min or q > q_max:
        raise ContractViolation(f"quality {q} outside [{q_min}, {q_max}]")
    return (q - q_min) / (q_max - q_min)


def priority_threshold(p: float, step_index: int, q: float,
                       q_min: float, q_max: float) -> float:
    """Basic threshold scaled by normalized quality."""
    return base_threshold(p, step_index) * normalize_quality(q, q_min, q_max)


def hetero_probs(p: float, lambda_: float, f: float) -> tuple[float, float]:
    """Election probabilities (p_high, p_low) for a high-pool fraction f.

    p_low = p / (1 + lambda * f) and p_high = p_low * (1 + lambda), so the
    high pool is elected (1 + lambda) times more often per step.
    """
    if lambda_ < 0.0 or not (0.0 <= f <= 1.0):
        raise ContractViolation("hetero_probs requires lambda >= 0 and f in [0, 1]")
    p_low = p / (1.0 + lambda_ * f)
    return p_low * (1.0 + lambda_), p_low


class LBRSAgent:
    """Windowed probabilistic item election (basic / priority / hetero).

    One instance serves one session at a time: call ``begin_session``
    before issuing slates for a new user.
    """

    VARIANTS = {"B-LBRS": "basic", "P-LBRS": "priority", "H-LBRS": "hetero"}

    def __init__(self, config: SimConfig, corpus: Corpus):
        if config.k > len(corpus):
            raise ConfigurationError("k must not exceed M")
        self.config = config
        self.corpus = corpus
        self.variant = self.VARIANTS[config.agent_kind]
        m = len(corpus)

        if self.variant == "hetero":
            self.high_mask = corpus.qualities >= config.q_threshold
            self.f = float(self.high_mask.mean())
            self.p_high, self.p_low = hetero_probs(config.p, config.lambda_, self.f)
            self.window_high = window_length(self.p_high)
            self.window_low = window_length(self.p_low)
        else:
            self.high_mask = np.ones(m, dtype=bool)
            self.window = window_length(config.p)
        if self.variant == "priority":
            self.q_norm = (corpus.qualities - config.q_min) / (config.q_max - config.q_min)

        self.excluded = np.zeros(m, dtype=bool)
        self.in_slate = np.zeros(m, dtype=bool)
        self.slates_issued = 0
        self.early_resets = 0
        self._eligible_cache: dict[int, np.ndarray] = {}

    def begin_session(self) -> None:
        self.excluded[:] = False
        self.in_slate[:] = False
        self.slates_issued = 0
        self.early_resets = 0
        self._eligible_cache.clear()

    # -- eligibility bookkeeping ------------------------------------------

    def _eligible(self, pool: int) -> np.ndarray:
        """Eligible ids of a pool (0 = high/only, 1 = low), cached per rescan."""
        if pool not in self._eligible_cache:
            mask = self.high_mask if pool == 0 else ~self.high_mask
            self._eligible_cache[pool] = np.flatnonzero(
                mask & ~self.excluded & ~self.in_slate)
        return self._eligible_cache[pool]

    def _mark(self, ids: np.ndarray) -> None:
        self.excluded[ids] = True
        self.in_slate[ids] = True
        self._eligible_cache.clear()

    def _apply_window_resets(self) -> None:
        n = self.slates_issued
        if self.variant == "hetero":
            if n % self.window_high == 0:
                self.excluded[self.high_mask] = False
            if n % self.window_low == 0:
                self.excluded[~self.high_mask] = False
        else:
            if n % self.window == 0:
                self.excluded[:] = False
        self._eligible_cache.clear()

    def _early_reset(self) -> None:
        self.excluded[:] = False
        self.excluded[self.in_slate] = True  # items already shown this step stay barred
        self.early_resets += 1
        self._eligible_cache.clear()

    # -- election ----------------------------------------------------------

    def _thresholds(self) -> tuple[float, float]:
        n = self.slates_issued
        if self.variant == "hetero":
            return base_threshold(self.p_high, n), base_threshold(self.p_low, n)
        return base_threshold(self.config.p, n), 0.0

    def _scan_once(self, rng: np.random.Generator, pool: int,
                   threshold: float) -> np.ndarray:
        """Acceptances of one full scan over a pool (no slate cap)."""
        eligible = self._eligible(pool)
        if eligible.size == 0 or threshold <= 0.0:
            return eligible[:0]
        if self.variant == "priority":
            per_item = threshold * self.q_norm[eligible]
            return eligible[rng.random(eligible.size) < per_item]
        count = rng.binomial(eligible.size, min(1.0, threshold))
        if count >= eligible.size:
            return eligible
        return rng.choice(eligible, size=count, replace=False)

    def _draw_priority(self, rng: np.random.Generator, threshold: float,
                       need: int) -> np.ndarray:
        accepted = self._scan_once(rng, 0, threshold)
        if accepted.size > need:
            accepted = rng.choice(accepted, size=need, replace=False)
        return accepted

    def _draw_scalar(self, rng: np.random.Generator, t_a: float, t_b: float,
                     need: int) -> np.ndarray:
        """First rescan with any acceptance, capped at ``need`` items.

        Stopping at the first ``need`` acceptances along a uniformly random
        scan order equals taking a uniform subset of the accepted set, and
        for pool-constant thresholds the accepted counts are binomial.
        All-miss rescans have no side effects, so identical rescans are
        simulated in batches and the first one that accepts anything is
        used; this keeps near-zero election probabilities (huge
        heterogeneity coefficients) from grinding one rescan at a time.
        """
        elig_a = self._eligible(0)
        elig_b = self._eligible(1) if self.variant == "hetero" else elig_a[:0]
        n_a = elig_a.size if t_a > 0.0 else 0
        n_b = elig_b.size if t_b > 0.0 else 0
        if n_a == 0 and n_b == 0:
            return elig_a[:0]
        miss = (1.0 - min(1.0, t_a)) ** n_a * (1.0 - min(1.0, t_b)) ** n_b
        if 1.0 - miss < 1e-12:
            return elig_a[:0]  # election would practically never terminate
        m_a = rng.binomial(n_a, min(1.0, t_a)) if n_a else 0
        m_b = rng.binomial(n_b, min(1.0, t_b)) if n_b else 0
        while m_a + m_b == 0:
            batch = 512
            c_a = (rng.binomial(n_a, min(1.0, t_a), size=batch) if n_a
                   else np.zeros(batch, dtype=np.int64))
            c_b = (rng.binomial(n_b, min(1.0, t_b), size=batch) if n_b
                   else np.zeros(batch, dtype=np.int64))
            hits = np.flatnonzero(c_a + c_b)
            if hits.size:
                m_a, m_b = int(c_a[hits[0]]), int(c_b[hits[0]])
        if m_a + m_b > need:
            if m_a and m_b:
                keep_a = int(rng.hypergeometric(m_a, m_b, need))
            else:
                keep_a = need if m_a else 0
            keep_b = need - keep_a
        else:
            keep_a, keep_b = m_a, m_b
        parts = []
        if keep_a:
            parts.append(elig_a if keep_a >= elig_a.size
                         else rng.choice(elig_a, size=keep_a, replace=False))
        if keep_b:
            parts.append(elig_b if keep_b >= elig_b.size
                         else rng.choice(elig_b, size=keep_b, replace=False))
        if not parts:
            return elig_a[:0]
        return np.concatenate(parts)

    def next_slate(self, rng: np.random.Generator) -> Slate:
        config = self.config
        self._apply_window_resets()
        self.in_slate[:] = False
        self._eligible_cache.clear()

        items: list[int] = []
        if not config.deterministic_k:
            t_a, t_b = self._thresholds()
            picked = self._scan_once(rng, 0, t_a)
            items.extend(picked.tolist())
            self._mark(picked)
            if self.variant == "hetero":
                picked = self._scan_once(rng, 1, t_b)
                items.extend(picked.tolist())
                self._mark(picked)
        else:
            stalled_resets = 0
            while len(items) < config.k:
                need = config.k - len(items)
                t_a, t_b = self._thresholds()
                if self.variant == "priority":
                    accepted = self._draw_priority(rng, t_a, need)
                else:
                    accepted = self._draw_scalar(rng, t_a, t_b, need)
                if accepted.size:
                    items.extend(accepted.tolist())
                    self._mark(accepted)
                    stalled_resets = 0
                    continue
                # scalar draws only come back empty when the election is dead;
                # a priority rescan may simply have missed and can retry
                dead = (self.variant != "priority" or self._pool_exhausted()
                        or self._max_threshold() <= 0.0)
                if dead:
                    self._early_reset()
                    stalled_resets += 1
                    if stalled_resets > 1:
                        raise RuntimeError(
                            "slate election stalled: all eligible thresholds are zero")

        slate = Slate(items=tuple(int(i) for i in items), step=self.slates_issued)
        self.slates_issued += 1
        self.in_slate[:] = False
        self._eligible_cache.clear()
        return slate

    def _pool_exhausted(self) -> bool:
        if self.variant == "hetero":
            return self._eligible(0).size == 0 and self._eligible(1).size == 0
        return self._eligible(0).size == 0

    def _max_threshold(self) -> float:
        t_a, t_b = self._thresholds()
        if self.variant == "priority":
            eligible = self._eligible(0)
            if eligible.size == 0:
                return 0.0
            return t_a * float(self.q_norm[eligible].max())
        if self.variant == "hetero":
            return max(t_a if self._eligible(0).size else 0.0,
                       t_b if self._eligible(1).size else 0.0)
        return t_a if self._eligible(0).size else 0.0

    def observe(self, slate: Slate, chosen: int | None) -> None:
        pass


class RandomAgent:
    """Uniform slates without replacement."""

    def __init__(self, config: SimConfig, corpus: Corpus):
        if config.k > len(corpus):
            raise ConfigurationError("k must not exceed M")
        self.config = config
        self.m = len(corpus)
        self.slates_issued = 0

    def begin_session(self) -> None:
        self.slates_issued = 0

    def next_slate(self, rng: np.random.Generator) -> Slate:
        items = rng.choice(self.m, size=self.config.k, replace=False)
        slate = Slate(items=tuple(int(i) for i in items), step=self.slates_issued)
        self.slates_issued += 1
        return slate

    def observe(self, slate: Slate, chosen: int | None) -> None:
        pass


class EpsGreedyAgent:
    """Per-slot epsilon-greedy over running mean item rewards.

    Estimates are shared across every session of a run, so runs using this
    agent are executed sequentially.  Displayed items are credited with the
    click reward or zero; ties in the exploit step break toward lower ids.
    """

    def __init__(self, config: SimConfig, corpus: Corpus):
        if config.k > len(corpus):
            raise ConfigurationError("k must not exceed M")
        self.config = config
        self.m = len(corpus)
        self.estimates = np.zeros(self.m)
        self.counts = np.zeros(self.m, dtype=np.int64)
        self.slates_issued = 0

    def begin_session(self) -> None:
        self.slates_issued = 0

    def next_slate(self, rng: np.random.Generator) -> Slate:
        used = np.zeros(self.m, dtype=bool)
        # stable sort keeps ascending id among equal estimates
        ranked = np.argsort(-self.estimates, kind="stable")
        cursor = 0
        items: list[int] = []
        for _ in range(self.config.k):
            if rng.random() < self.config.epsilon:
                pick = int(rng.choice(np.flatnonzero(~used)))
            else:
                while used[ranked[cursor]]:
                    cursor += 1
                pick = int(ranked[cursor])
            used[pick] = True
            items.append(pick)
        slate = Slate(items=tuple(items), step=self.slates_issued)
        self.slates_issued += 1
        return slate

    def observe(self, slate: Slate, chosen: int | None) -> None:
        for item in slate.items:
            r = self.config.reward_click if item == chosen else 0.0
            self.counts[item] += 1
            self.estimates[item] += (r - self.estimates[item]) / self.counts[item]


def random_slate(corpus: Corpus, config: SimConfig, rng: np.random.Generator) -> Slate:
    """One-off uniform slate (stateless form of RandomAgent)."""
    if config.k > len(corpus):
        raise ConfigurationError("k must not exceed M")
    items = rng.choice(len(corpus), size=config.k, replace=False)
    return Slate(items=tuple(int(i) for i in items), step=0)


def make_agent(config: SimConfig, corpus: Corpus):
    """Build the policy named by ``config.agent_kind``."""
    if config.agent_kind in LBRSAgent.VARIANTS:
        return LBRSAgent(config, corpus)
    if config.agent_kind == "Random":
        return RandomAgent(config, corpus)
    if config.agent_kind == "EpsGreedy":
        return EpsGreedyAgent(config, corpus)
    raise ConfigurationError(f"agent_kind {config.agent_kind!r} is not recognized")
