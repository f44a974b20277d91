"""Tests for run configuration loading."""
import numpy as np
import pytest

from tangle.cli.config import RunConfig, SystemConfig, find_config, load_config, parse_config
from tangle.models.params import MHZ
from tangle.quantum.operators import bell_state
from tangle.utils.errors import ConfigError


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    """Empty working and home directories"""
    monkeypatch.chdir(tmp_path)
    monkeypatch.setenv("HOME", str(tmp_path / "home"))
    return tmp_path


def test_defaults_without_config_file(workdir):
    """No file anywhere gives the built-in defaults"""
    assert find_config() is None
    config = load_config()
    assert config == RunConfig()
    assert config.sequences_per_setting == 40000
    assert config.seed is None


def test_config_in_working_directory(workdir):
    """./tangle-config.yaml is picked up"""
    (workdir / "tangle-config.yaml").write_text("seed: 12\nsequences_per_setting: 100\n")
    config = load_config()
    assert config.seed == 12
    assert config.sequences_per_setting == 100


def test_config_in_home_directory(workdir):
    """~/.tangle/config.yaml is the fallback"""
    home = workdir / "home" / ".tangle"
    home.mkdir(parents=True)
    (home / "config.yaml").write_text("workers: 3\n")
    assert load_config().workers == 3


def test_explicit_config_must_exist(workdir):
    """A named config file that does not exist is an error"""
    with pytest.raises(ConfigError) as exc:
        load_config(workdir / "missing.yaml")
    assert exc.value.fields == ["config"]


def test_invalid_values_name_their_fields(workdir):
    """Validation errors carry dotted field names"""
    path = workdir / "bad.yaml"
    path.write_text("system:\n  kappa: -1\nsweep:\n  amplitudes: [0.5, 1.5]\n")
    with pytest.raises(ConfigError) as exc:
        load_config(path)
    assert set(exc.value.fields) == {"system.kappa", "sweep.amplitudes"}


def test_unreadable_yaml(workdir):
    """Broken YAML and non-mapping documents are configuration errors"""
    path = workdir / "broken.yaml"
    path.write_text("system: [unclosed\n")
    with pytest.raises(ConfigError):
        load_config(path)
    with pytest.raises(ConfigError):
        parse_config(["a", "list"])
    assert parse_config(None) == RunConfig()


def test_to_params_converts_units():
    """MHz and microseconds become rad/s and seconds"""
    p = SystemConfig(target_amplitude=None, resonant=False).to_params()
    assert p.g == pytest.approx(1.4 * MHZ)
    assert p.kappa == pytest.approx(0.05 * MHZ)
    assert p.T == pytest.approx(40e-6)
    assert p.Delta1 == pytest.approx(-400 * MHZ)


def test_to_params_retargets_amplitude():
    """target_amplitude sets the coupling ratio"""
    from tangle.dynamics.hamiltonians import amplitude_angle

    p = SystemConfig(target_amplitude=1 / np.sqrt(3)).to_params()
    assert np.cos(amplitude_angle(p)) == pytest.approx(1 / np.sqrt(3), rel=1e-6)


def test_invalid_system_becomes_config_error():
    """Physics validation errors surface under the system section"""
    with pytest.raises(ConfigError) as exc:
        SystemConfig(Delta1=0.0, target_amplitude=None, resonant=False).to_params()
    assert exc.value.fields == ["system.Delta1"]


def test_ideal_noise_flag():
    """noise.ideal ignores the other noise fields"""
    config = parse_config({"noise": {"ideal": True, "exit_efficiency": 0.1}})
    model = config.noise_model()
    assert model.exit_efficiency == 1.0 and model.dark_rate == 0.0


def test_detection_window_in_microseconds():
    """The noise window is configured in microseconds"""
    assert parse_config({"noise": {"detection_window": 20}}).noise_model().detection_window == pytest.approx(20e-6)


def test_pulse_must_fit_the_sequence():
    """The Raman pulse is limited by the other steps of the 1.5 ms sequence"""
    assert parse_config({"system": {"T": 130.0}}).system.T == 130.0
    with pytest.raises(ConfigError, match="does not fit") as exc:
        parse_config({"system": {"T": 200.0}})
    assert exc.value.fields == ["system"]


def test_require_seed():
    """The flag wins over the file and one of them is needed"""
    assert RunConfig(seed=4).require_seed() == 4
    assert RunConfig(seed=4).require_seed(9) == 9
    with pytest.raises(ConfigError) as exc:
        RunConfig().require_seed()
    assert exc.value.fields == ["seed"]


def test_target_state():
    """The default target is |Phi+>, an explicit target overrides it"""
    np.testing.assert_allclose(RunConfig().target_state(), bell_state(), atol=1e-12)
    explicit = parse_config({"target": {"cos_alpha": 1.0, "phase": 0.3}})
    np.testing.assert_allclose(explicit.target_state(), [1, 0, 0, 0], atol=1e-12)


def test_config_hash():
    """Equal configurations hash equally"""
    assert RunConfig().config_hash() == RunConfig().config_hash()
    assert RunConfig().config_hash() != RunConfig(seed=1).config_hash()
    assert len(RunConfig().config_hash()) == 64
