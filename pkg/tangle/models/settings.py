"""Measurement settings: photon analyzer basis, ion Pauli axis and path swap."""
from typing import List, Literal, Tuple

from pydantic import BaseModel, ConfigDict

PhotonBasis = Literal["HV", "DA", "RL"]
IonAxis = Literal["x", "y", "z"]
IonOutcome = Literal["S", "D"]

PHOTON_BASES: Tuple[str, ...] = ("HV", "DA", "RL")
ION_AXES: Tuple[str, ...] = ("x", "y", "z")

# Joint outcome order of every count row: detector in {0, 1} x ion in {S, D}
OUTCOMES: Tuple[Tuple[int, str], ...] = ((0, "S"), (0, "D"), (1, "S"), (1, "D"))


def outcome_index(detector: int, ion: str) -> int:
    return OUTCOMES.index((detector, ion))


class BasisSetting(BaseModel):
    """One tomography setting.

    ``swapped`` marks the partner measurement in which the output waveplates
    are rotated so that the two analyzer paths trade places.
    """
    model_config = ConfigDict(frozen=True)

    photon_basis: PhotonBasis
    ion_axis: IonAxis
    swapped: bool = False

    @property
    def id(self) -> str:
        """Setting id without the swap flag, e.g. ``DA-x``."""
        return f"{self.photon_basis}-{self.ion_axis}"

    @property
    def label(self) -> str:
        return f"{self.id}{'-swapped' if self.swapped else ''}"

    def partner(self) -> "BasisSetting":
        return self.model_copy(update={"swapped": not self.swapped})

    def logical(self) -> "BasisSetting":
        return self.model_copy(update={"swapped": False})

    @classmethod
    def from_label(cls, label: str) -> "BasisSetting":
        parts = label.strip().split("-")
        if len(parts) not in (2, 3) or (len(parts) == 3 and parts[2] != "swapped"):
            raise ValueError(f"Invalid setting label: {label!r}")
        return cls(photon_basis=parts[0], ion_axis=parts[1], swapped=len(parts) == 3)


def logical_settings() -> List[BasisSetting]:
    """The nine unswapped settings (photon basis x ion axis)."""
    return [BasisSetting(photon_basis=b, ion_axis=a) for b in PHOTON_BASES for a in ION_AXES]


def standard_settings() -> List[BasisSetting]:
    """All 18 settings: each logical setting followed by its swapped partner."""
    settings = []
    for setting in logical_settings():
        settings.extend([setting, setting.partner()])
    return settings
