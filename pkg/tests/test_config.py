import pytest
import yaml

from laneflock.config import (
    ConfigError,
    RunConfig,
    ScenarioParams,
    dump,
    from_dict,
    load,
    to_dict,
    validate,
)
from laneflock.geometry import Vec2


class TestDefaults:
    def test_default_config_valid(self):
        cfg = RunConfig()
        validate(cfg)
        assert cfg.nb == 7
        assert cfg.master_seed == 42

    def test_with_nb(self):
        cfg = RunConfig().with_nb(14)
        assert cfg.nb == 14
        assert cfg.lifecycle_for_nb().target_flock_size == 14

    def test_scenario_params_build(self):
        scenario = ScenarioParams().build()
        assert scenario.duration == 60.0
        assert len(scenario.vehicles) == 4


class TestRoundTrip:
    def test_dict_round_trip(self):
        cfg = RunConfig()
        again = from_dict(to_dict(cfg))
        assert again == cfg

    def test_yaml_round_trip(self, tmp_path):
        cfg = RunConfig(nb=5, runs=3, master_seed=99)
        path = tmp_path / "config.yaml"
        dump(cfg, path)
        again = load(path)
        assert again == cfg

    def test_vector_weights_round_trip(self, tmp_path):
        data = {"weights": {"w_sep": [0.2, 0.1], "w_alil": [0.5, 0.25]}}
        path = tmp_path / "config.yaml"
        with open(path, "w") as fh:
            yaml.safe_dump(data, fh)
        cfg = load(path)
        assert cfg.weights.w_sep == Vec2(0.2, 0.1)
        assert cfg.weights.w_alil == Vec2(0.5, 0.25)
        # dump/reload keeps the overridden vectors
        out = tmp_path / "dumped.yaml"
        dump(cfg, out)
        assert load(out).weights.w_alil == Vec2(0.5, 0.25)

    def test_empty_file_gives_defaults(self, tmp_path):
        path = tmp_path / "empty.yaml"
        path.write_text("")
        assert load(path) == RunConfig()

    def test_partial_sections_keep_defaults(self):
        cfg = from_dict({"noise": {"lateral_sigma": 0.5}})
        assert cfg.noise.lateral_sigma == 0.5
        assert cfg.noise.detection_range == RunConfig().noise.detection_range


class TestErrors:
    def test_unknown_root_key(self):
        with pytest.raises(ConfigError, match="unknown key 'bogus'"):
            from_dict({"bogus": 1})

    def test_unknown_section_key(self):
        with pytest.raises(ConfigError, match="noise.bogus"):
            from_dict({"noise": {"bogus": 1}})

    def test_bad_vector_shape(self):
        with pytest.raises(ConfigError, match="2-element list"):
            from_dict({"weights": {"w_sep": [1.0]}})

    def test_invalid_section_value(self):
        with pytest.raises(ConfigError):
            from_dict({"noise": {"lateral_sigma": -1.0}})

    def test_non_mapping_root(self):
        with pytest.raises(ConfigError):
            from_dict([1, 2, 3])

    def test_validate_rejects_bad_scalars(self):
        with pytest.raises(ConfigError):
            from_dict({"nb": 0})
        with pytest.raises(ConfigError):
            from_dict({"runs": 0})
        with pytest.raises(ConfigError):
            from_dict({"parallel_gate": 0.0})
        with pytest.raises(ConfigError):
            from_dict({"scenario": {"duration": -5.0}})
