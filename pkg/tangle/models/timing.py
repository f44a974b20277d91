from pydantic import BaseModel, ConfigDict, Field, model_validator


class SequenceTiming(BaseModel):
    """Durations (s) of one experimental sequence."""
    model_config = ConfigDict(frozen=True)

    cooling: float = Field(default=800e-6, ge=0)
    pumping: float = Field(default=60e-6, ge=0)
    raman: float = Field(default=40e-6, ge=0)
    mapping: float = Field(default=4e-6, ge=0)
    rotation: float = Field(default=4.3e-6, ge=0)
    detection: float = Field(default=500e-6, ge=0)
    period: float = Field(default=1.5e-3, gt=0, description="Repetition period, including dead time")

    @model_validator(mode="after")
    def period_covers_steps(self):
        if self.active > self.period * (1 + 1e-12):
            raise ValueError(f"steps take {self.active * 1e3:.4g} ms, longer than the {self.period * 1e3:.4g} ms period")
        return self

    @property
    def active(self) -> float:
        return self.cooling + self.pumping + self.raman + self.mapping + self.rotation + self.detection

    @property
    def repetition_rate(self) -> float:
        return 1.0 / self.period
