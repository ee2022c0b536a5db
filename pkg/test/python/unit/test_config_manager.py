"""
Unit tests for simulation configuration
"""

import pytest

from bnstructure.config_manager import ConfigManager, SimulationConfig
from bnstructure.errors import ConfigError


def write_config(path, text):
    path.write_text(text)
    return path


class TestConfigManager:
    """Test cases for ConfigManager"""

    def test_load_file(self, temp_dir):
        """Test YAML values and relative reference resolution"""
        path = write_config(
            temp_dir / "sim.yaml",
            "reference: net.bif\nratios: [0.1, 0.5]\nreplicates: 3\n"
            "strategies: ['bdeu:1+u']\nseed: 7\n",
        )
        config = ConfigManager(path).build()
        assert config.reference == str(temp_dir / "net.bif")
        assert config.ratios == [0.1, 0.5]
        assert config.replicates == 3
        assert config.strategies == ["bdeu:1+u"]
        assert config.seed == 7
        assert config.threads == 1

    def test_overrides_win(self, temp_dir):
        """Test command-line values replace file values, None is ignored"""
        path = write_config(temp_dir / "sim.yaml", "reference: net.bif\nreplicates: 3\n")
        config = ConfigManager(path).build({"replicates": 5, "seed": None, "reference": "other.bif"})
        assert config.replicates == 5
        assert config.seed == 0
        assert config.reference == "other.bif"

    def test_scalar_lists(self):
        """Test a single ratio or strategy is promoted to a list"""
        config = ConfigManager().build({"reference": "x.bif", "ratios": 0.2, "strategies": "k2+u"})
        assert config.ratios == [0.2]
        assert config.strategies == ["k2+u"]

    def test_unknown_key(self, temp_dir):
        """Test typos in the file are reported"""
        path = write_config(temp_dir / "sim.yaml", "reference: net.bif\nreplicate: 3\n")
        with pytest.raises(ConfigError, match="unknown keys"):
            ConfigManager(path).build()

    def test_bad_value(self, temp_dir):
        """Test values that cannot be converted"""
        path = write_config(temp_dir / "sim.yaml", "reference: net.bif\nreplicates: many\n")
        with pytest.raises(ConfigError, match="replicates"):
            ConfigManager(path).build()

    @pytest.mark.parametrize(
        "overrides",
        [
            {},
            {"reference": "x.bif", "ratios": [-0.1]},
            {"reference": "x.bif", "replicates": 0},
            {"reference": "x.bif", "threads": 0},
            {"reference": "x.bif", "seed": -1},
            {"reference": "x.bif", "strategies": []},
        ],
    )
    def test_validation(self, overrides):
        """Test invalid settings raise ConfigError"""
        with pytest.raises(ConfigError):
            ConfigManager().build(overrides)

    def test_invalid_yaml(self, temp_dir):
        """Test unparsable files and non-mapping documents"""
        path = write_config(temp_dir / "sim.yaml", "reference: [unclosed\n")
        with pytest.raises(ConfigError):
            ConfigManager(path).build()
        write_config(path, "- a\n- b\n")
        with pytest.raises(ConfigError, match="mapping"):
            ConfigManager(path).build()

    def test_synthetic_reference(self):
        """Test synthetic:N:ARCS[:SEED] references"""
        config = ConfigManager().build({"reference": "synthetic:6:5:2"})
        assert config.is_synthetic
        assert config.synthetic_spec() == (6, 5, 2)
        assert ConfigManager().build({"reference": "synthetic:6:5"}).synthetic_spec() == (6, 5, 0)
        with pytest.raises(ConfigError):
            ConfigManager().build({"reference": "synthetic:six"})

    def test_save_and_reload(self, temp_dir):
        """Test the effective config can be written and read back"""
        config = SimulationConfig(reference=str(temp_dir / "net.bif"), replicates=4, seed=9)
        path = temp_dir / "effective.yaml"
        ConfigManager.save(config, path)
        again = ConfigManager(path).build()
        assert again == config

    def test_shipped_config(self, sparse10_path):
        """Test the bundled example configuration is valid"""
        config = ConfigManager(sparse10_path.parent.parent / "config" / "sparse10.yaml").build()
        assert config.reference.endswith("sparse10.bif")
        assert config.replicates == 20
        assert len(config.strategies) == 4
