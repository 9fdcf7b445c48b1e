import pytest

from duopoly_lab.config import (
    ExperimentConfig,
    apply_env_overrides,
    apply_overrides,
    default_pairings,
    from_mapping,
    load_config,
)
from duopoly_lab.errors import ConfigError


class TestDefaults:
    def test_full_grid_shape(self):
        cfg = ExperimentConfig()
        assert len(cfg.pairings) == 10
        assert len(cfg.markets) == 3
        assert len(cfg.regimes) == 4
        assert cfg.seeds == 20
        assert cfg.horizon == 10_000
        assert cfg.window == 1_000
        assert cfg.mc_samples == 100_000

    def test_pairings_are_unordered_combinations(self):
        pairs = default_pairings()
        assert ("qlearning", "qlearning") in pairs
        assert ("qlearning", "ddpg") in pairs
        assert ("ddpg", "qlearning") not in pairs

    def test_defaults_validate(self):
        assert ExperimentConfig().validate() is not None


class TestValidation:
    def test_unknown_market(self):
        cfg = ExperimentConfig(markets=["cournot"])
        with pytest.raises(ConfigError, match="cournot"):
            cfg.validate()

    def test_unknown_regime(self):
        cfg = ExperimentConfig(regimes=["scheme_d"])
        with pytest.raises(ConfigError, match="scheme_d"):
            cfg.validate()

    def test_unknown_agent_in_pairing(self):
        cfg = ExperimentConfig(pairings=[("qlearning", "sarsa")])
        with pytest.raises(ConfigError, match="sarsa"):
            cfg.validate()

    def test_correlated_shocks_reserved(self):
        cfg = ExperimentConfig(correlated_shocks=True)
        with pytest.raises(ConfigError, match="correlated"):
            cfg.validate()

    def test_window_cannot_exceed_horizon(self):
        cfg = ExperimentConfig(horizon=100, window=200)
        with pytest.raises(ConfigError):
            cfg.validate()

    def test_seeds_must_be_positive(self):
        cfg = ExperimentConfig(seeds=0)
        with pytest.raises(ConfigError):
            cfg.validate()


class TestMappingAndFiles:
    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigError, match="typo_key"):
            from_mapping({"typo_key": 1})

    def test_agents_table(self):
        cfg = from_mapping({"agents": {"qlearning": {"alpha": 0.2}}})
        assert cfg.agent_overrides == {"qlearning": {"alpha": 0.2}}

    def test_pairings_become_tuples(self):
        cfg = from_mapping({"pairings": [["pso", "pso"]]})
        assert cfg.pairings == [("pso", "pso")]

    def test_load_packaged_single_cell(self):
        import duopoly_lab

        import os

        path = os.path.join(os.path.dirname(duopoly_lab.__file__),
                            "configs", "single_cell.toml")
        cfg = load_config(path).validate()
        assert cfg.markets == ["hotelling"]
        assert cfg.pairings == [("qlearning", "qlearning")]
        assert cfg.seeds == 1


class TestOverrides:
    def test_scalar_parsing(self):
        cfg = ExperimentConfig()
        apply_overrides(cfg, ["seeds=3", "series=true", "markets=logit,linear",
                              "out_dir=elsewhere"])
        assert cfg.seeds == 3
        assert cfg.series is True
        assert cfg.markets == ["logit", "linear"]
        assert cfg.out_dir == "elsewhere"

    def test_pairing_override(self):
        cfg = ExperimentConfig()
        apply_overrides(cfg, ["pairings=pso:pso,qlearning:ddpg"])
        assert cfg.pairings == [("pso", "pso"), ("qlearning", "ddpg")]

    def test_agent_dotted_override(self):
        cfg = ExperimentConfig()
        apply_overrides(cfg, ["agents.qlearning.alpha=0.3",
                              "agents.ddqn.batch_size=64"])
        assert cfg.agent_overrides["qlearning"]["alpha"] == 0.3
        assert cfg.agent_overrides["ddqn"]["batch_size"] == 64

    def test_malformed_overrides_rejected(self):
        cfg = ExperimentConfig()
        with pytest.raises(ConfigError):
            apply_overrides(cfg, ["seeds"])
        with pytest.raises(ConfigError):
            apply_overrides(cfg, ["seeds=three"])
        with pytest.raises(ConfigError):
            apply_overrides(cfg, ["agents.bandit.alpha=0.1"])
        with pytest.raises(ConfigError):
            apply_overrides(cfg, ["nope=1"])

    def test_env_overrides(self):
        cfg = ExperimentConfig()
        apply_env_overrides(cfg, {"DUOPOLY_LAB_SEEDS": "7",
                                  "DUOPOLY_LAB_QUIET": "true",
                                  "UNRELATED": "x"})
        assert cfg.seeds == 7
        assert cfg.quiet is True

    def test_resolved_is_json_friendly(self):
        import json

        blob = json.dumps(ExperimentConfig().resolved())
        assert "qlearning" in blob
