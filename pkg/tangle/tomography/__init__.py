"""Quantum state tomography of the joint ion-photon state."""
from tangle.tomography.povm import (
    povm_element,
    setting_povm,
    povm_stack,
    design_matrix,
    informationally_complete,
    probabilities,
)
from tangle.tomography.reconstruct import linear_inversion, loglikelihood, mle_reconstruct
