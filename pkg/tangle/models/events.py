"""Detection events produced by the sequence Monte Carlo."""
import json
from typing import Any, Dict, Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator

from tangle.models.settings import BasisSetting


class DetectionEvent(BaseModel):
    """One sequence in which an APD clicked.

    ``detector`` is the physical APD that fired; the logical analyzer port is
    ``detector XOR setting.swapped``.
    """
    model_config = ConfigDict(frozen=True)

    sequence_index: int = Field(ge=0)
    detection_time: float = Field(ge=0, description="Click time from the start of the Raman pulse (s)")
    detector: Literal[0, 1]
    dark: bool = False
    ion_outcome: Literal["S", "D"]
    setting: BasisSetting

    @field_validator("detection_time")
    @classmethod
    def finite_time(cls, value: float) -> float:
        if value != value or value == float("inf"):
            raise ValueError("detection_time must be finite")
        return value

    @property
    def port(self) -> int:
        """Logical analyzer port, undoing the path swap."""
        return self.detector ^ int(self.setting.swapped)

    def to_record(self) -> Dict[str, Any]:
        return {
            "sequence_index": self.sequence_index,
            "setting": self.setting.id,
            "swapped": self.setting.swapped,
            "detector": self.detector,
            "detection_time_us": round(self.detection_time * 1e6, 9),
            "dark": self.dark,
            "ion_outcome": self.ion_outcome,
        }

    def to_json(self) -> str:
        """One line of the event log."""
        return json.dumps(self.to_record(), sort_keys=True)

    @classmethod
    def from_record(cls, record: Dict[str, Any]) -> "DetectionEvent":
        basis, axis = record["setting"].split("-")
        return cls(
            sequence_index=record["sequence_index"],
            detection_time=record["detection_time_us"] / 1e6,
            detector=record["detector"],
            dark=record["dark"],
            ion_outcome=record["ion_outcome"],
            setting=BasisSetting(photon_basis=basis, ion_axis=axis, swapped=record["swapped"]),
        )
