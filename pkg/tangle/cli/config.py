"""Run configuration: YAML file -> validated pydantic records -> physics parameters."""
import hashlib
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np
import yaml
from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from tangle.dynamics.hamiltonians import amplitude_angle, raman_resonant, target_state, with_target_amplitude
from tangle.models.noise import NoiseModel
from tangle.models.params import MHZ, SystemParams
from tangle.models.timing import SequenceTiming
from tangle.quantum.operators import Ket
from tangle.utils.errors import ConfigError, DataError
from tangle.utils.logging import get_logger

logger = get_logger(__name__)

CONFIG_FILE_NAME = "tangle-config.yaml"


class SystemConfig(BaseModel):
    """System parameters in laboratory units (MHz, us, rad)."""
    g: float = Field(default=1.4, gt=0, description="Atom-cavity coupling g / 2pi (MHz)")
    kappa: float = Field(default=0.05, gt=0, description="Cavity-field decay / 2pi (MHz)")
    gamma: float = Field(default=11.2, gt=0, description="Atomic polarization decay / 2pi (MHz)")
    Omega1: float = Field(default=4.5, ge=0, description="Raman tone 1 amplitude / 2pi (MHz)")
    Omega2: float = Field(default=4.5, ge=0, description="Raman tone 2 amplitude / 2pi (MHz)")
    Delta1: Optional[float] = Field(default=None, description="Tone 1 detuning / 2pi (MHz)")
    Delta2: Optional[float] = Field(default=None, description="Tone 2 detuning / 2pi (MHz)")
    DeltaC1: float = Field(default=-400.0, description="Cavity detuning from P-D / 2pi (MHz)")
    DeltaDDp: float = Field(default=4.97, description="Zeeman splitting / 2pi (MHz)")
    G1: float = Field(default=1 / np.sqrt(2), ge=0)
    G2: float = Field(default=1 / np.sqrt(2), ge=0)
    phiL: float = Field(default=0.0, description="Raman phase (rad)")
    T: float = Field(default=40.0, gt=0, description="Raman pulse duration (us)")
    scatter_return: float = Field(default=0.935, ge=0, le=1)
    target_amplitude: Optional[float] = Field(
        default=1 / np.sqrt(2), ge=0, le=1,
        description="Target cos(alpha); None keeps the configured Omega1, Omega2"
    )
    resonant: bool = Field(default=True, description="Calibrate Raman resonance including light shifts")

    @model_validator(mode="after")
    def pulse_fits_sequence(self):
        timing = SequenceTiming()
        spare = timing.period - (timing.active - timing.raman)
        if self.T * 1e-6 > spare:
            raise ValueError(f"a {self.T:g} us Raman pulse does not fit the {timing.period * 1e3:g} ms sequence "
                             f"(at most {spare * 1e6:.1f} us)")
        return self

    def to_params(self) -> SystemParams:
        """Convert to angular frequencies and seconds, then apply the drive calibration.

        Raises:
            ConfigError: If the resulting parameter set is invalid.
        """
        values: Dict[str, Any] = {
            "g": self.g * MHZ, "kappa": self.kappa * MHZ, "gamma": self.gamma * MHZ,
            "Omega1": self.Omega1 * MHZ, "Omega2": self.Omega2 * MHZ,
            "DeltaC1": self.DeltaC1 * MHZ, "DeltaDDp": self.DeltaDDp * MHZ,
            "G1": self.G1, "G2": self.G2, "phiL": self.phiL, "T": self.T * 1e-6,
            "scatter_return": self.scatter_return,
        }
        if self.Delta1 is not None:
            values["Delta1"] = self.Delta1 * MHZ
        if self.Delta2 is not None:
            values["Delta2"] = self.Delta2 * MHZ
        try:
            p = SystemParams(**values)
            if self.target_amplitude is not None:
                return with_target_amplitude(p, float(np.arccos(self.target_amplitude)), self.resonant)
            return raman_resonant(p) if self.resonant else p
        except ValidationError as e:
            raise _config_error(e, prefix="system")
        except DataError as e:
            raise ConfigError(f"system: {e}", fields=["system"])


class NoiseConfig(BaseModel):
    """Noise model with the detection window in microseconds."""
    exit_efficiency: float = 0.16
    apd_efficiency0: float = 0.40
    apd_efficiency1: float = 0.40
    dark_rate: float = 36.0
    dark_split: float = 0.5
    detection_window: float = Field(default=40.0, description="Detection window (us)")
    readout_error: float = 0.0
    path_imbalance: float = 1.0
    ideal: bool = Field(default=False, description="Ignore the other fields and use a perfect apparatus")

    def to_model(self) -> NoiseModel:
        if self.ideal:
            return NoiseModel.ideal()
        values = self.model_dump(exclude={"ideal"})
        values["detection_window"] *= 1e-6
        try:
            return NoiseModel(**values)
        except ValidationError as e:
            raise _config_error(e, prefix="noise")


class SweepConfig(BaseModel):
    phases: List[float] = Field(default_factory=lambda: [k * np.pi / 4 for k in range(8)])
    amplitudes: List[float] = Field(default_factory=lambda: [1 / np.sqrt(2), 1 / np.sqrt(3), 1 / np.sqrt(8)])
    fit: bool = True

    @field_validator("amplitudes")
    @classmethod
    def amplitudes_in_range(cls, value: List[float]) -> List[float]:
        bad = [a for a in value if not 0 <= a <= 1]
        if bad:
            raise ValueError(f"target amplitudes must lie in [0, 1], got {bad}")
        return value


class TargetConfig(BaseModel):
    """Explicit target state cos(alpha)|DH> + e^{i phase} sin(alpha)|D'V>."""
    cos_alpha: float = Field(ge=0, le=1)
    phase: float = 0.0


class RunConfig(BaseModel):
    """Everything a command needs besides its input files."""
    system: SystemConfig = Field(default_factory=SystemConfig)
    noise: NoiseConfig = Field(default_factory=NoiseConfig)
    sweep: SweepConfig = Field(default_factory=SweepConfig)
    sequences_per_setting: int = Field(default=40000, ge=0)
    seed: Optional[int] = Field(default=None, ge=0, lt=2 ** 64)
    output_dir: Optional[str] = None
    workers: Optional[int] = Field(default=None, ge=1)
    target: Optional[TargetConfig] = None

    def params(self) -> SystemParams:
        return self.system.to_params()

    def noise_model(self) -> NoiseModel:
        return self.noise.to_model()

    def target_state(self, p: Optional[SystemParams] = None) -> Ket:
        """Explicit target if configured, else the state the configured drive aims for."""
        if self.target is not None:
            return target_state(float(np.arccos(self.target.cos_alpha)), self.target.phase)
        cos_alpha = self.system.target_amplitude
        if cos_alpha is None:
            return target_state(amplitude_angle(p or self.params()), self.system.phiL)
        return target_state(float(np.arccos(cos_alpha)), self.system.phiL)

    def require_seed(self, override: Optional[int] = None) -> int:
        """Seed for a stochastic command: the CLI flag wins over the file."""
        seed = override if override is not None else self.seed
        if seed is None:
            raise ConfigError("a seed is required for this command (set 'seed' or pass --seed)",
                              fields=["seed"])
        return seed

    def config_hash(self) -> str:
        """SHA-256 of the canonical JSON dump of the validated configuration."""
        return hashlib.sha256(self.model_dump_json().encode()).hexdigest()


def _config_error(e: ValidationError, prefix: str = "") -> ConfigError:
    fields = []
    messages = []
    for err in e.errors():
        loc = ".".join(str(part) for part in err["loc"])
        field = f"{prefix}.{loc}" if prefix and loc else (prefix or loc)
        fields.append(field)
        messages.append(f"{field}: {err['msg']}")
    return ConfigError("invalid configuration: " + "; ".join(messages), fields=fields)


def find_config(config_file: Optional[Union[str, Path]] = None) -> Optional[Path]:
    """Locate the configuration file.

    Looks for config in the following locations (in order):
    1. Explicitly provided config file path (--config option)
    2. ./tangle-config.yaml in current directory
    3. ~/.tangle/config.yaml in user's home directory
    """
    if config_file:
        path = Path(config_file).expanduser()
        if not path.exists():
            raise ConfigError(f"config file not found: {path}", fields=["config"])
        return path
    for loc in (Path.cwd() / CONFIG_FILE_NAME, Path.home() / ".tangle" / "config.yaml"):
        if loc.exists():
            return loc
    return None


def parse_config(data: Any) -> RunConfig:
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError("configuration must be a mapping of sections", fields=[])
    try:
        return RunConfig.model_validate(data)
    except ValidationError as e:
        raise _config_error(e)


def load_config(config_file: Optional[Union[str, Path]] = None) -> RunConfig:
    """Load and validate the run configuration; built-in defaults when no file is found."""
    path = find_config(config_file)
    if path is None:
        logger.debug("No config file found, using built-in defaults")
        return RunConfig()
    try:
        data = yaml.safe_load(path.read_text())
    except yaml.YAMLError as e:
        raise ConfigError(f"unreadable config {path}: {e}", fields=[])
    logger.debug(f"Loaded config from {path}")
    return parse_config(data)
