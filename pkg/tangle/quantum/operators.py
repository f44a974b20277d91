"""Dense complex linear algebra and two-qubit state primitives.

Operators and kets are plain complex128 numpy arrays. The Hilbert spaces
here never exceed dimension ~10, so everything is dense.

Two-qubit conventions used across the package:

- ion qubit basis {|D>, |D'>}, with |D> the +1 eigenstate of sigma_z
- photon qubit basis {|H>, |V>}
- joint basis ion (x) photon = {DH, DV, D'H, D'V}
"""
from typing import Literal, Tuple, NamedTuple, Sequence

import numpy as np
import numpy.typing as npt

from tangle.utils.errors import DimensionError

Operator = npt.NDArray[np.complex128]
Ket = npt.NDArray[np.complex128]

Axis = Literal["x", "y", "z"]

DEFAULT_TOL = 1e-9

_PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}


class DensityCheck(NamedTuple):
    """Outcome of check_density_matrix."""
    ok: bool
    diagnostic: str


def as_operator(a: npt.ArrayLike) -> Operator:
    """Coerce to a square complex matrix, raising DimensionError otherwise."""
    op = np.asarray(a, dtype=complex)
    if op.ndim != 2 or op.shape[0] != op.shape[1] or op.shape[0] == 0:
        raise DimensionError(f"Operator must be a non-empty square matrix, got shape {op.shape}")
    return op


def as_ket(v: npt.ArrayLike) -> Ket:
    """Coerce to a non-empty complex vector."""
    ket = np.asarray(v, dtype=complex).reshape(-1)
    if ket.size == 0:
        raise DimensionError("Ket must have at least one amplitude")
    return ket


def identity(dim: int) -> Operator:
    return np.eye(dim, dtype=complex)


def tensor(a: npt.ArrayLike, b: npt.ArrayLike) -> Operator:
    """Kronecker product of two operators (or two kets)."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.ndim == 1 and b.ndim == 1:
        return np.kron(a, b)
    return np.kron(as_operator(a), as_operator(b))


def partial_trace(rho: npt.ArrayLike, dims: Tuple[int, int], keep: int) -> Operator:
    """Reduced operator of a bipartite system.

    Args:
        rho: Operator on a space of dimension dA*dB
        dims: (dA, dB)
        keep: 0 to keep subsystem A, 1 to keep subsystem B

    Raises:
        DimensionError: If the dimensions do not factor rho
    """
    rho = as_operator(rho)
    d_a, d_b = dims
    if d_a * d_b != rho.shape[0]:
        raise DimensionError(f"dims {dims} do not match operator dimension {rho.shape[0]}")
    if keep not in (0, 1):
        raise ValueError(f"keep must be 0 or 1, got {keep}")
    blocks = rho.reshape(d_a, d_b, d_a, d_b)
    if keep == 0:
        return np.einsum('ijkj->ik', blocks)
    return np.einsum('ijil->jl', blocks)


def pauli(axis: Axis) -> Operator:
    """Standard 2x2 Pauli matrix for axis x, y or z."""
    try:
        return _PAULI[axis].copy()
    except KeyError:
        raise ValueError(f"Unknown Pauli axis: {axis}")


def eigenprojector(axis: Axis, sign: int) -> Operator:
    """Projector onto the +1 (sign=+1) or -1 (sign=-1) eigenspace of a Pauli."""
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    return 0.5 * (identity(2) + sign * pauli(axis))


def dagger(a: npt.ArrayLike) -> Operator:
    return np.conj(np.asarray(a, dtype=complex)).T


def ket_to_dm(psi: npt.ArrayLike) -> Operator:
    """Density matrix |psi><psi| of a (normalised) ket."""
    psi = as_ket(psi)
    return np.outer(psi, psi.conj())


def hermitian_eigh(a: npt.ArrayLike) -> Tuple[np.ndarray, Operator]:
    """Eigen-decomposition of a Hermitian operator (ascending real eigenvalues)."""
    a = as_operator(a)
    return np.linalg.eigh(0.5 * (a + dagger(a)))


def check_density_matrix(rho: npt.ArrayLike, tol: float = DEFAULT_TOL) -> DensityCheck:
    """Validate that rho is Hermitian, unit trace and positive semidefinite.

    Returns:
        DensityCheck(ok, diagnostic) where diagnostic names the first violated
        condition ("hermiticity", "trace", "positivity") or is "ok".
    """
    rho = as_operator(rho)
    if np.max(np.abs(rho - dagger(rho))) > tol:
        return DensityCheck(False, "hermiticity")
    if abs(np.trace(rho) - 1.0) > tol:
        return DensityCheck(False, "trace")
    eigenvalues = np.linalg.eigvalsh(rho)
    if eigenvalues.min() < -tol:
        return DensityCheck(False, "positivity")
    return DensityCheck(True, "ok")


def purity(rho: npt.ArrayLike) -> float:
    rho = as_operator(rho)
    return float(np.real(np.trace(rho @ rho)))


def trace_distance(rho: npt.ArrayLike, sigma: npt.ArrayLike) -> float:
    """Half the trace norm of rho - sigma."""
    diff = as_operator(rho) - as_operator(sigma)
    return float(0.5 * np.sum(np.abs(np.linalg.eigvalsh(0.5 * (diff + dagger(diff))))))


def project_to_physical(rho: npt.ArrayLike) -> Operator:
    """Nearest density matrix obtained by clipping negative eigenvalues."""
    values, vectors = hermitian_eigh(rho)
    values = np.clip(values, 0.0, None)
    if values.sum() <= 0:
        raise DimensionError("Operator has no positive spectrum to project onto")
    values /= values.sum()
    return (vectors * values) @ dagger(vectors)


def bell_state(phase: float = 0.0) -> Ket:
    """(|DH> + e^{i phase}|D'V>)/sqrt(2), i.e. |Phi+> for phase 0."""
    return np.array([1, 0, 0, np.exp(1j * phase)], dtype=complex) / np.sqrt(2)


def werner_state(p: float, psi: Ket = None) -> Operator:
    """p |psi><psi| + (1 - p) I/4 with psi defaulting to |Phi+>."""
    psi = bell_state() if psi is None else as_ket(psi)
    return p * ket_to_dm(psi) + (1 - p) * identity(4) / 4


def random_density_matrix(dim: int, rng: np.random.Generator, rank: int = None) -> Operator:
    """Random density matrix from the Ginibre ensemble (used by tests and oracles)."""
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ dagger(g)
    return rho / np.trace(rho)


def embed(op: npt.ArrayLike, indices: Sequence[int], dim: int) -> Operator:
    """Place a small operator on the given basis indices of a larger space."""
    op = as_operator(op)
    if op.shape[0] != len(indices):
        raise DimensionError(f"Operator of dimension {op.shape[0]} cannot fill {len(indices)} indices")
    out = np.zeros((dim, dim), dtype=complex)
    idx = np.asarray(indices)
    out[np.ix_(idx, idx)] = op
    return out
