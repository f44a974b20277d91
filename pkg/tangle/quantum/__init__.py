"""Quantum-state primitives shared by every other module."""
from tangle.quantum.operators import (
    Operator,
    Ket,
    DensityCheck,
    as_operator,
    as_ket,
    identity,
    tensor,
    partial_trace,
    pauli,
    eigenprojector,
    dagger,
    ket_to_dm,
    hermitian_eigh,
    check_density_matrix,
    purity,
    trace_distance,
    project_to_physical,
    bell_state,
    werner_state,
    random_density_matrix,
    embed,
)
from tangle.quantum.serialization import format_operator, parse_operator
