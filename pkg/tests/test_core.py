import numpy as np
import pytest

from lbrs import ConfigurationError, SimConfig, build_corpus, spawn_user
from lbrs.core import corpus_rng, sweep_seed, user_rng


class TestSimConfigDefaults:
    def test_table_defaults(self):
        cfg = SimConfig()
        assert cfg.N == 5000
        assert cfg.M == 10000
        assert cfg.T == 20
        assert cfg.k == 5
        assert cfg.q_max == 3.0
        assert cfg.y == 0.3
        assert cfg.alpha == cfg.beta == cfg.gamma == 1.0
        assert cfg.b0 == 200.0
        assert cfg.len_doc == 4.0
        assert cfg.len_null == 1.0
        assert cfg.len_bonus == 4.0
        assert cfg.p_null == 0.5
        assert cfg.reward_click == 4.0

    def test_p_defaults_to_k_over_100(self):
        assert SimConfig().p == pytest.approx(0.05)
        assert SimConfig(k=15).p == pytest.approx(0.15)
        assert SimConfig(k=15, p=0.05).p == 0.05

    def test_q_min_defaults_to_negative_q_max(self):
        assert SimConfig().q_min == -3.0
        assert SimConfig(q_max=2.0).q_min == -2.0
        assert SimConfig(q_min=-1.0).q_min == -1.0

    def test_high_topic_count_is_floor_third(self):
        assert SimConfig(T=20).high_topic_count == 6
        assert SimConfig(T=3).high_topic_count == 1
        assert SimConfig(T=21).high_topic_count == 7

    def test_replace_rederives_defaults(self):
        cfg = SimConfig().replace(k=15)
        assert cfg.p == pytest.approx(0.15)
        pinned = SimConfig(p=0.02).replace(k=15)
        assert pinned.p == 0.02
        assert SimConfig().replace(q_max=2.0).q_min == -2.0


class TestSimConfigValidation:
    @pytest.mark.parametrize("overrides,field", [
        (dict(M=0), "M"),
        (dict(T=0), "T"),
        (dict(N=0), "N"),
        (dict(k=0), "k"),
        (dict(M=3, k=4), "k"),
        (dict(p=0.0), "p"),
        (dict(p=1.5), "p"),
        (dict(gamma=1.5), "gamma"),
        (dict(p_null=-0.1), "p_null"),
        (dict(lambda_=-1.0), "lambda"),
        (dict(epsilon=2.0), "epsilon"),
        (dict(agent_kind="DQN"), "agent_kind"),
    ])
    def test_invalid_configs_name_the_field(self, overrides, field):
        with pytest.raises(ConfigurationError, match=field):
            SimConfig(**overrides)


class TestBuildCorpus:
    def test_quality_sign_partitions_by_topic(self):
        for seed in range(5):
            cfg = SimConfig(M=500, T=20, seed=seed)
            corpus = build_corpus(cfg)
            high = corpus.topics < 6
            assert np.all(corpus.qualities[high] >= 0.0)
            assert np.all(corpus.qualities[high] <= cfg.q_max)
            assert np.all(corpus.qualities[~high] <= 0.0)
            assert np.all(corpus.qualities[~high] >= -cfg.q_max)

    def test_three_topic_example(self):
        cfg = SimConfig(M=3, T=3, k=1, N=1, seed=42)
        corpus = build_corpus(cfg)
        assert corpus.high_topic_count == 1
        for doc in corpus:
            if doc.topic == 0:
                assert doc.quality >= 0.0
            else:
                assert doc.quality <= 0.0

    def test_deterministic_for_seed(self):
        cfg = SimConfig(M=200, seed=9)
        a, b = build_corpus(cfg), build_corpus(cfg)
        assert np.array_equal(a.topics, b.topics)
        assert np.array_equal(a.qualities, b.qualities)

    def test_document_accessor(self):
        corpus = build_corpus(SimConfig(M=10, seed=1))
        doc = corpus.document(3)
        assert doc.id == 3
        assert doc.topic == corpus.topics[3]
        assert doc.quality == corpus.qualities[3]
        assert len(corpus) == 10


class TestSpawnUser:
    def test_budget_and_interest_range(self):
        cfg = SimConfig()
        for uid in range(20):
            user = spawn_user(cfg, uid)
            assert user.budget == 200.0
            assert user.interest.shape == (cfg.T,)
            assert np.all(user.interest >= -1.0)
            assert np.all(user.interest <= 1.0)

    def test_deterministic_per_seed_and_user(self):
        cfg = SimConfig(seed=5)
        a, b = spawn_user(cfg, 7), spawn_user(cfg, 7)
        assert np.array_equal(a.interest, b.interest)
        c = spawn_user(cfg, 8)
        assert not np.array_equal(a.interest, c.interest)


class TestRngStreams:
    def test_streams_are_independent_of_each_other(self):
        cfg = SimConfig(seed=3)
        assert corpus_rng(cfg).random() != user_rng(cfg, 0).random()
        assert user_rng(cfg, 0).random() != user_rng(cfg, 1).random()

    def test_sweep_seed_varies_with_cell(self):
        seeds = {sweep_seed(1, vi, rep) for vi in range(3) for rep in range(3)}
        assert len(seeds) == 9
        assert sweep_seed(1, 0, 0) == sweep_seed(1, 0, 0)
