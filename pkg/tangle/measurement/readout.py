"""Ion-qubit readout after the shelving map and the analysis rotation.

The ion qubit {|D>, |D'>} is mapped onto {S, D} and rotated so that the chosen
Pauli axis is read out by fluorescence. Outcome ``D`` is the +1 eigenvalue of
that Pauli, ``S`` the -1 eigenvalue.
"""
from typing import NamedTuple

import numpy as np
import numpy.typing as npt

from tangle.models.settings import IonAxis, IonOutcome
from tangle.quantum.operators import Operator, as_operator, eigenprojector, identity, tensor
from tangle.utils.errors import DimensionError

ION_SIGN = {"D": 1, "S": -1}


class IonReadout(NamedTuple):
    outcome: IonOutcome
    true_outcome: IonOutcome
    state: Operator


def ion_projector(axis: IonAxis, outcome: IonOutcome) -> Operator:
    """Joint-space projector for an ion outcome, identity on the photon."""
    return tensor(eigenprojector(axis, ION_SIGN[outcome]), identity(2))


def ion_readout(joint_state: npt.ArrayLike, axis: IonAxis, error: float, rng: np.random.Generator,
                u: float = None, u_flip: float = None) -> IonReadout:
    """Born-rule sample of the ion qubit along ``axis``, flipped with probability ``error``.

    ``u`` and ``u_flip`` let the caller supply its own uniform variates so the
    draw order of a sequence is fixed; otherwise they come from ``rng``.
    """
    rho = as_operator(joint_state)
    if rho.shape != (4, 4):
        raise DimensionError(f"ion readout needs a 4x4 joint state, got {rho.shape}")
    u = rng.random() if u is None else u
    u_flip = rng.random() if u_flip is None else u_flip

    projector = ion_projector(axis, "D")
    p_d = float(np.clip(np.trace(projector @ rho).real / np.trace(rho).real, 0.0, 1.0))
    true_outcome = "D" if u < p_d else "S"
    if true_outcome == "S":
        projector = ion_projector(axis, "S")
    collapsed = projector @ rho @ projector
    norm = np.trace(collapsed).real
    if norm > 0:
        collapsed = collapsed / norm
    outcome = true_outcome
    if u_flip < error:
        outcome = "S" if true_outcome == "D" else "D"
    return IonReadout(outcome=outcome, true_outcome=true_outcome, state=collapsed)
