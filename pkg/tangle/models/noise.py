"""Imperfections of the photon path, the detectors and the ion readout."""
from pydantic import BaseModel, ConfigDict, Field


class NoiseModel(BaseModel):
    """Mirror, detector and readout imperfections used by the event Monte Carlo.

    ``path_imbalance`` scales the efficiency of the path behind beamsplitter
    port 1 relative to port 0, so the port efficiencies are
    ``apd_efficiency0`` and ``apd_efficiency1 * path_imbalance``.
    """
    model_config = ConfigDict(frozen=True)

    exit_efficiency: float = Field(default=0.16, ge=0, le=1,
                                   description="Probability that a cavity photon exits into the output mode")
    apd_efficiency0: float = Field(default=0.40, ge=0, le=1)
    apd_efficiency1: float = Field(default=0.40, ge=0, le=1)
    dark_rate: float = Field(default=36.0, ge=0, description="Combined APD dark-count rate (1/s)")
    dark_split: float = Field(default=0.5, ge=0, le=1,
                              description="Fraction of dark counts attributed to APD 0")
    detection_window: float = Field(default=40e-6, ge=0,
                                    description="Window over which clicks are registered (s)")
    readout_error: float = Field(default=0.0, ge=0, le=1)
    path_imbalance: float = Field(default=1.0, ge=0)

    @classmethod
    def ideal(cls) -> "NoiseModel":
        """Lossless, dark-count free, perfect readout."""
        return cls(exit_efficiency=1.0, apd_efficiency0=1.0, apd_efficiency1=1.0,
                   dark_rate=0.0, readout_error=0.0, path_imbalance=1.0)

    @property
    def port_efficiencies(self) -> tuple:
        return (self.apd_efficiency0, min(1.0, self.apd_efficiency1 * self.path_imbalance))

    @property
    def mean_apd_efficiency(self) -> float:
        return 0.5 * sum(self.port_efficiencies)
