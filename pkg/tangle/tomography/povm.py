"""Joint ion-photon POVM elements and the tomography design matrix."""
from typing import Sequence, Tuple

import numpy as np

from tangle.measurement.optics import logical_port_projector
from tangle.measurement.readout import ION_SIGN
from tangle.models.settings import OUTCOMES, BasisSetting
from tangle.quantum.operators import Operator, eigenprojector, tensor

FULL_RANK = 16


def povm_element(setting: BasisSetting, outcome: Tuple[int, str]) -> Operator:
    """(ion Pauli eigenprojector) x (logical analyzer-port projector).

    ``outcome`` is (port, ion) with port in {0, 1} and ion in {"S", "D"}.
    """
    port, ion = outcome
    return tensor(eigenprojector(setting.ion_axis, ION_SIGN[ion]), logical_port_projector(setting, port))


def setting_povm(setting: BasisSetting) -> np.ndarray:
    """The four elements of one setting, stacked in OUTCOMES order."""
    return np.stack([povm_element(setting, outcome) for outcome in OUTCOMES])


def povm_stack(settings: Sequence[BasisSetting]) -> np.ndarray:
    return np.concatenate([setting_povm(s) for s in settings]) if settings else np.zeros((0, 4, 4), complex)


def design_matrix(settings: Sequence[BasisSetting]) -> np.ndarray:
    """Rows A_k with A_k . vec(rho) = tr(rho Pi_k)."""
    elements = povm_stack(settings)
    return np.transpose(elements, (0, 2, 1)).reshape(len(elements), -1)


def informationally_complete(settings: Sequence[BasisSetting]) -> bool:
    """True when the settings' elements span the 16-dimensional operator space."""
    if not settings:
        return False
    return int(np.linalg.matrix_rank(design_matrix(settings))) == FULL_RANK


def probabilities(rho: np.ndarray, elements: np.ndarray) -> np.ndarray:
    """tr(rho Pi_k) for a stack of elements."""
    return np.einsum('kij,ji->k', elements, rho).real

