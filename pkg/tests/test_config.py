import pytest

from occaudit.config import RunConfig, load_config_file, resolve_config
from occaudit.errors import ConfigError


class TestResolve:
    def test_defaults(self):
        cfg = resolve_config()
        assert cfg.rep == "bow"
        assert cfg.ratios == (0.65, 0.10, 0.25)
        assert cfg.seed == 0

    def test_file_values_applied(self, tmp_path):
        path = tmp_path / "run.toml"
        path.write_text('rep = "we"\nseed = 7\nlam = 0.5\n')
        cfg = resolve_config(path)
        assert (cfg.rep, cfg.seed, cfg.lam) == ("we", 7, 0.5)

    def test_flags_beat_file(self, tmp_path):
        path = tmp_path / "run.toml"
        path.write_text('rep = "we"\nseed = 7\n')
        cfg = resolve_config(path, rep="dnn")
        assert cfg.rep == "dnn"
        assert cfg.seed == 7

    def test_none_overrides_ignored(self, tmp_path):
        path = tmp_path / "run.toml"
        path.write_text('seed = 7\n')
        assert resolve_config(path, seed=None).seed == 7

    def test_unknown_file_key(self, tmp_path):
        path = tmp_path / "run.toml"
        path.write_text('learning_rate = 0.1\n')
        with pytest.raises(ConfigError):
            load_config_file(path)

    def test_invalid_toml(self, tmp_path):
        path = tmp_path / "run.toml"
        path.write_text('rep = [unclosed\n')
        with pytest.raises(ConfigError):
            load_config_file(path)

    def test_ratio_list_from_file(self, tmp_path):
        path = tmp_path / "run.toml"
        path.write_text('ratios = [0.5, 0.25, 0.25]\n')
        assert resolve_config(path).ratios == (0.5, 0.25, 0.25)


class TestValidation:
    def test_bad_rep(self):
        with pytest.raises(ConfigError):
            resolve_config(rep="tfidf")

    def test_bad_condition(self):
        with pytest.raises(ConfigError):
            resolve_config(condition="maybe")

    def test_ratios_must_sum_to_one(self):
        with pytest.raises(ConfigError):
            resolve_config(ratios=(0.5, 0.4, 0.2))

    def test_bad_horizon(self):
        with pytest.raises(ConfigError):
            resolve_config(horizon=0)


class TestHash:
    def test_stable_for_equal_configs(self):
        assert RunConfig().content_hash == RunConfig().content_hash

    def test_changes_with_any_field(self):
        assert RunConfig().content_hash != RunConfig(seed=1).content_hash
        assert RunConfig().content_hash != RunConfig(lam=2.0).content_hash

    def test_provenance_fields(self):
        p = RunConfig(seed=5).provenance()
        assert p["schema_version"] == "1"
        assert p["seed"] == 5
        assert len(p["config_hash"]) == 16
