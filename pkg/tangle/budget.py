"""Closed-form efficiency budget of the cavity photon source."""
from typing import List, NamedTuple, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from tangle.models.noise import NoiseModel
from tangle.models.timing import SequenceTiming
from tangle.utils.errors import DataError


class MirrorBudget(BaseModel):
    """Mirror transmissions and losses in ppm."""
    model_config = ConfigDict(frozen=True)

    T1: float = Field(default=13.0, ge=0, description="Output mirror transmission (ppm)")
    T2: float = Field(default=1.3, ge=0, description="Back mirror transmission (ppm)")
    L: float = Field(default=68.0, ge=0, description="Combined scatter and absorption losses (ppm)")

    @model_validator(mode="after")
    def nonzero_total(self):
        if self.T1 + self.T2 + self.L <= 0:
            raise ValueError("mirror budget must have nonzero total transmission plus loss")
        return self


def output_coupling(m: MirrorBudget) -> float:
    """T1 / (T1 + T2 + L)."""
    total = m.T1 + m.T2 + m.L
    if total <= 0:
        raise DataError("mirror budget is all zero")
    return m.T1 / total


def free_space_collection(NA: float) -> float:
    """Fraction of an isotropic emitter's light collected by a lens: (1 - sqrt(1 - NA^2)) / 2."""
    if not 0 <= NA <= 1:
        raise DataError(f"numerical aperture must lie in [0, 1], got {NA}")
    return float((1 - np.sqrt(1 - NA ** 2)) / 2)


class DetectionBudget(NamedTuple):
    probability: float
    rate: float
    per_port: tuple


def detection_budget(generation_prob: float, n: NoiseModel,
                     sequence_duration: Optional[float] = None) -> DetectionBudget:
    """Per-sequence detection probability and event rate.

    probability = generation x exit x mean port efficiency (path imbalance
    included), capped at 1;
    rate = probability / sequence duration (default: one 1.5 ms sequence).
    """
    if not 0 <= generation_prob <= 1:
        raise DataError(f"generation probability must lie in [0, 1], got {generation_prob}")
    duration = SequenceTiming().period if sequence_duration is None else sequence_duration
    if duration <= 0:
        raise DataError("sequence duration must be positive")
    emitted = generation_prob * n.exit_efficiency
    probability = min(1.0, emitted * n.mean_apd_efficiency)
    per_port = tuple(min(1.0, emitted * eta) for eta in n.port_efficiencies)
    return DetectionBudget(probability=probability, rate=probability / duration, per_port=per_port)


class BudgetRow(NamedTuple):
    label: str
    efficiency: float


def comparison_table(current: Optional[MirrorBudget] = None) -> List[BudgetRow]:
    """Current mirrors, state-of-the-art losses, a high-T1 output mirror and free space at NA 0.5."""
    current = current or MirrorBudget()
    improved = current.model_copy(update={"L": 4.0})
    high_t1 = improved.model_copy(update={"T1": 500.0})
    return [
        BudgetRow(f"current mirrors (T1={current.T1:g}, T2={current.T2:g}, L={current.L:g} ppm)",
                  output_coupling(current)),
        BudgetRow(f"state-of-the-art losses (L={improved.L:g} ppm)", output_coupling(improved)),
        BudgetRow(f"high-transmission output mirror (T1={high_t1.T1:g} ppm)", output_coupling(high_t1)),
        BudgetRow("free-space lens, NA 0.5", free_space_collection(0.5)),
    ]
