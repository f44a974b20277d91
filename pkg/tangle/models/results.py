"""Result records of reconstruction and witness analysis."""
import json
from typing import Dict, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field


class TomographyResult(BaseModel):
    """Output of the maximum-likelihood reconstruction."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    rho_hat: np.ndarray
    iterations: int = Field(ge=0)
    final_loglikelihood: float
    converged: bool
    loglikelihood_history: List[float] = Field(default_factory=list, repr=False)

    def summary(self) -> str:
        """One-line JSON record (iterations, LL, converged)."""
        return json.dumps({
            "iterations": self.iterations,
            "final_loglikelihood": self.final_loglikelihood,
            "converged": self.converged,
        }, sort_keys=True)


class WitnessReport(BaseModel):
    """Fidelity, concurrence, CHSH value and coherence phase with bootstrap errors."""
    fidelity: float = Field(ge=0, le=1 + 1e-9)
    fidelity_std: float = 0.0
    concurrence: float = Field(ge=0, le=1 + 1e-9)
    concurrence_std: float = 0.0
    chsh: float = Field(ge=0, le=2 * np.sqrt(2) + 1e-9)
    chsh_std: float = 0.0
    coherence_phase: Optional[float] = None
    coherence_phase_std: float = 0.0
    rho11: float = 0.0
    rho11_std: float = 0.0
    rho44: float = 0.0
    rho44_std: float = 0.0
    purity: float = 0.0
    events: int = 0
    converged: bool = True
    label: str = ""

    def to_record(self) -> str:
        """Flat ``key=value`` text, one pair per line, in field order."""
        lines = []
        for key, value in self.model_dump().items():
            if isinstance(value, float):
                value = f"{value:.12g}"
            lines.append(f"{key}={value}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_record(cls, text: str) -> "WitnessReport":
        values: Dict[str, object] = {}
        for line in text.splitlines():
            if not line.strip():
                continue
            key, _, value = line.partition("=")
            values[key.strip()] = None if value == "None" else value
        return cls.model_validate(values)

    def row(self) -> Dict[str, object]:
        return self.model_dump()
