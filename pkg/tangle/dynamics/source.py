"""Photon source: everything the sequence Monte Carlo needs from the dynamics.

A source is computed once per parameter set and cached in the registry under
the hash of the parameters, so worker processes and repeated sweeps reuse it.
"""
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy.integrate import cumulative_trapezoid, trapezoid

from tangle.dynamics.master import (
    DEFAULT_POINTS,
    EMISSION_FLOOR,
    Trajectory,
    conditional_joint_state,
    emission_pulse,
    simulate_trajectory,
)
from tangle.models.params import SystemParams
from tangle.quantum.operators import Operator, identity, partial_trace
from tangle.utils import registry
from tangle.utils.errors import EmissionError
from tangle.utils.logging import get_logger

logger = get_logger(__name__)


class PhotonSource(BaseModel):
    """Pulse shapes, emission statistics and conditional states of one parameter set."""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    params: SystemParams
    trajectory: Trajectory
    I_H: np.ndarray
    I_V: np.ndarray
    cdf: np.ndarray
    emission_probability: float
    conditional_states: np.ndarray
    ion_state: Operator

    @property
    def times(self) -> np.ndarray:
        return self.trajectory.times

    @property
    def pdf(self) -> np.ndarray:
        return self.I_H + self.I_V

    @classmethod
    def build(cls, p: SystemParams, points: int = DEFAULT_POINTS) -> "PhotonSource":
        trajectory = simulate_trajectory(p, "effective", points)
        I_H, I_V = emission_pulse(trajectory, p)
        pdf = I_H + I_V
        times = trajectory.times
        cdf = cumulative_trapezoid(pdf, times, initial=0.0)
        probability = float(min(cdf[-1], 1.0))

        states = np.zeros((len(times), 4, 4), dtype=complex)
        valid = np.zeros(len(times), dtype=bool)
        for k, t in enumerate(times):
            try:
                states[k] = conditional_joint_state(trajectory, t, p)
                valid[k] = True
            except EmissionError:
                continue
        if valid.any():
            # Empty grid points (t = 0) borrow the nearest defined state
            good = np.flatnonzero(valid)
            for k in np.flatnonzero(~valid):
                states[k] = states[good[np.argmin(np.abs(good - k))]]
            weights = pdf / pdf.sum() if pdf.sum() > 0 else np.full(len(times), 1 / len(times))
            joint = np.einsum('k,kij->ij', weights, states)
            ion_state = partial_trace(joint, (2, 2), keep=0)
        else:
            ion_state = identity(2) / 2

        logger.debug(f"Photon source: emission probability {probability:.4f} over {p.T * 1e6:g} us")
        return cls(params=p, trajectory=trajectory, I_H=I_H, I_V=I_V, cdf=cdf,
                   emission_probability=probability, conditional_states=states, ion_state=ion_state)

    def sample_time(self, u: float) -> float:
        """Emission time for a uniform variate u in [0, 1) given that a photon is emitted."""
        if self.emission_probability <= EMISSION_FLOOR:
            raise EmissionError("source never emits")
        target = u * self.cdf[-1]
        return float(np.interp(target, self.cdf, self.times))

    def joint_state_at(self, t: float) -> Operator:
        """Conditional joint state at t, interpolated between grid points."""
        times = self.times
        k = int(np.clip(np.searchsorted(times, t, side="right") - 1, 0, len(times) - 2))
        w = float(np.clip((t - times[k]) / (times[k + 1] - times[k]), 0.0, 1.0))
        rho = (1 - w) * self.conditional_states[k] + w * self.conditional_states[k + 1]
        return rho / np.trace(rho).real

    def unconditional_joint_state(self) -> Operator:
        """Ion marginal averaged over the pulse, with an unpolarised photon."""
        return np.kron(self.ion_state, identity(2) / 2)


def generation_probability(source: PhotonSource) -> float:
    """Probability that a photon leaves the cavity during the Raman pulse."""
    return source.emission_probability


def pulse_overlap(source: PhotonSource) -> float:
    """L1 distance between the normalised H and V pulse shapes (0 for identical shapes)."""
    times = source.times
    norm_h = trapezoid(source.I_H, times)
    norm_v = trapezoid(source.I_V, times)
    if norm_h <= 0 or norm_v <= 0:
        return 2.0
    return float(trapezoid(np.abs(source.I_H / norm_h - source.I_V / norm_v), times))


def get_photon_source(p: SystemParams, points: int = DEFAULT_POINTS) -> PhotonSource:
    """Cached PhotonSource for a parameter set."""
    key = f"{p.key()}:{points}"
    source: Optional[PhotonSource] = registry.get_source(key)
    if source is None:
        source = registry.register_source(key, PhotonSource.build(p, points))
    return source
