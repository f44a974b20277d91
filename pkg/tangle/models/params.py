"""Physical parameters of the bichromatic Raman protocol.

All frequencies are angular (rad/s) and all times are seconds. Human-facing
configuration is in MHz and microseconds; see ``tangle.cli.config``.
"""
import hashlib
from typing import Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from tangle.utils.logging import get_logger

logger = get_logger(__name__)

MHZ = 2 * np.pi * 1e6
"""Angular frequency of 1 MHz (rad/s)."""

ADIABATIC_RATIO = 10.0


class LevelFrequencies(BaseModel):
    """Absolute angular frequencies of |S>, |D>, |D'> and the cavity mode."""
    model_config = ConfigDict(frozen=True)

    omegaS: float = Field(description="Frequency of |S> (rad/s)")
    omegaD: float = Field(description="Frequency of |D> (rad/s)")
    omegaDp: float = Field(description="Frequency of |D'> (rad/s)")
    omegaC: float = Field(description="Cavity mode frequency (rad/s)")

    @property
    def zeeman_splitting(self) -> float:
        return self.omegaDp - self.omegaD


class SystemParams(BaseModel):
    """All rates, detunings, drive amplitudes, geometry factors and phases.

    Conventions:
        Delta_i = omega_i - (omega_P - omega_S) is the detuning of tone i from
        the S-P transition, DeltaC1 = omega_C - (omega_P - omega_D) the cavity
        detuning from P-D, DeltaDDp = omega_D' - omega_D. The two-photon
        detuning of path i is Delta_i - DeltaC_i with DeltaC2 = DeltaC1 + DeltaDDp.
    """
    model_config = ConfigDict(frozen=True)

    g: float = Field(default=1.4 * MHZ, gt=0, description="Atom-cavity coupling")
    kappa: float = Field(default=0.05 * MHZ, gt=0, description="Cavity-field decay")
    gamma: float = Field(default=11.2 * MHZ, gt=0, description="Atomic polarization decay")
    Omega1: float = Field(default=4.5 * MHZ, ge=0, description="Raman tone 1 amplitude")
    Omega2: float = Field(default=4.5 * MHZ, ge=0, description="Raman tone 2 amplitude")
    Delta1: Optional[float] = Field(default=None, description="Tone 1 detuning from S-P")
    Delta2: Optional[float] = Field(default=None, description="Tone 2 detuning from S-P")
    DeltaC1: float = Field(default=-400.0 * MHZ, description="Cavity detuning from P-D")
    DeltaDDp: float = Field(default=4.97 * MHZ, description="Zeeman splitting omega_D' - omega_D")
    G1: float = Field(default=1 / np.sqrt(2), ge=0, description="Projection factor of the H path")
    G2: float = Field(default=1 / np.sqrt(2), ge=0, description="Projection factor of the V path")
    phiL: float = Field(default=0.0, description="Relative phase of the two Raman tones (rad)")
    T: float = Field(default=40e-6, gt=0, description="Raman pulse duration (s)")
    omega1: Optional[float] = Field(default=None, description="Absolute tone 1 frequency (rad/s)")
    omega2: Optional[float] = Field(default=None, description="Absolute tone 2 frequency (rad/s)")
    levels: Optional[LevelFrequencies] = None
    scatter_return: float = Field(
        default=0.935, ge=0, le=1,
        description="Fraction of P decays that return incoherently to |S>; the rest is lost"
    )

    @model_validator(mode="before")
    @classmethod
    def fill_bare_resonance(cls, data):
        """Missing tone detunings default to bare two-photon resonance."""
        if isinstance(data, dict):
            data = dict(data)
            delta_c1 = data.get("DeltaC1", cls.model_fields["DeltaC1"].default)
            zeeman = data.get("DeltaDDp", cls.model_fields["DeltaDDp"].default)
            if data.get("Delta1") is None:
                data["Delta1"] = delta_c1
            if data.get("Delta2") is None:
                data["Delta2"] = delta_c1 + zeeman
        return data

    @field_validator("Delta1", "Delta2")
    @classmethod
    def nonzero_detuning(cls, value: float) -> float:
        if value == 0:
            raise ValueError("Raman detuning must be nonzero")
        return value

    @model_validator(mode="after")
    def check_consistency(self):
        if self.levels is not None:
            splitting = self.levels.zeeman_splitting
            if abs(splitting - self.DeltaDDp) > 1e-6 * max(abs(self.DeltaDDp), 1.0):
                raise ValueError(
                    f"levels give omega_D' - omega_D = {splitting:.6g} rad/s "
                    f"but DeltaDDp = {self.DeltaDDp:.6g} rad/s"
                )
        if (self.omega1 is None) != (self.omega2 is None):
            raise ValueError("omega1 and omega2 must be given together")
        for i, (Omega, Delta) in enumerate(((self.Omega1, self.Delta1), (self.Omega2, self.Delta2)), 1):
            if abs(Delta) < ADIABATIC_RATIO * max(Omega, self.g):
                logger.warning(
                    f"|Delta{i}| = {abs(Delta) / MHZ:.3g} MHz is less than {ADIABATIC_RATIO:g} x "
                    f"max(Omega{i}, g); adiabatic elimination is questionable"
                )
        return self

    @property
    def tone_splitting(self) -> float:
        """nu = omega2 - omega1."""
        if self.omega1 is not None and self.omega2 is not None:
            return self.omega2 - self.omega1
        return self.Delta2 - self.Delta1

    @property
    def zeeman_splitting(self) -> float:
        if self.levels is not None:
            return self.levels.zeeman_splitting
        return self.DeltaDDp

    def two_photon_detunings(self) -> Tuple[float, float]:
        """Bare two-photon detunings (delta1, delta2) of the H and V paths."""
        if self.levels is not None and self.omega1 is not None:
            lv = self.levels
            return (
                (lv.omegaS + self.omega1) - (lv.omegaD + lv.omegaC),
                (lv.omegaS + self.omega2) - (lv.omegaDp + lv.omegaC),
            )
        return (
            self.Delta1 - self.DeltaC1,
            self.Delta2 - (self.DeltaC1 + self.DeltaDDp),
        )

    def key(self) -> str:
        """Stable hash of the parameter set, used to cache derived artifacts."""
        return hashlib.sha256(self.model_dump_json().encode()).hexdigest()
