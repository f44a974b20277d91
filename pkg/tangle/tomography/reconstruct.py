"""Density-matrix reconstruction from post-selected joint counts.

Only sequences with a detected photon enter; each setting is its own
multinomial over four outcomes. Swap partners are summed first, so a table
with 18 rows and its compensated 9-row form give the same estimate.
"""
from typing import Tuple

import numpy as np
import weave

from tangle.models.counts import CountTable
from tangle.models.results import TomographyResult
from tangle.quantum.operators import Operator, identity
from tangle.tomography.povm import FULL_RANK, design_matrix, povm_stack, probabilities
from tangle.utils.errors import DataError, LikelihoodError, RankDeficientError
from tangle.utils.logging import get_logger

logger = get_logger(__name__)

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 100_000
DEFAULT_DILUTION = 0.1
MONOTONE_SLACK = 1e-12


def _flatten(counts: CountTable) -> Tuple[list, np.ndarray, np.ndarray]:
    """Settings with data, their stacked elements and the matching counts."""
    table = counts.compensated()
    rows = [r for r in table.rows.values() if r.detected > 0]
    if not rows:
        raise DataError("count table holds no detected events")
    settings = [r.setting for r in rows]
    n = np.concatenate([np.asarray(r.outcomes, dtype=float) for r in rows])
    return settings, povm_stack(settings), n


def _require_rank(settings) -> None:
    rank = int(np.linalg.matrix_rank(design_matrix(settings)))
    if rank < FULL_RANK:
        raise RankDeficientError(
            f"settings {', '.join(s.id for s in settings)} span rank {rank} < {FULL_RANK}"
        )


def linear_inversion(counts: CountTable) -> Operator:
    """Least-squares solution of tr(rho Pi_k) = f_k; Hermitian and unit trace, maybe not positive.

    Raises:
        RankDeficientError: If the settings are not informationally complete.
    """
    settings, _, _ = _flatten(counts)
    _require_rank(settings)
    table = counts.compensated()
    frequencies = np.concatenate([table.rows[s.label].frequencies() for s in settings])
    A = design_matrix(settings)
    x, *_ = np.linalg.lstsq(A, frequencies.astype(complex), rcond=None)
    rho = x.reshape(4, 4)
    rho = 0.5 * (rho + rho.conj().T)
    return rho / np.trace(rho).real


def loglikelihood(rho: Operator, counts: CountTable) -> float:
    """Sum of n_k log tr(rho Pi_k) over detected outcomes.

    Raises:
        LikelihoodError: If an observed outcome has nonpositive probability.
    """
    _, elements, n = _flatten(counts)
    return _loglikelihood(rho, elements, n)


def _loglikelihood(rho: Operator, elements: np.ndarray, n: np.ndarray) -> float:
    p = probabilities(rho, elements)
    observed = n > 0
    if np.any(p[observed] <= 0):
        raise LikelihoodError("state assigns zero probability to an observed outcome")
    return float(np.sum(n[observed] * np.log(p[observed])))


@weave.op()
def mle_reconstruct(counts: CountTable, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER,
                    dilution: float = DEFAULT_DILUTION, adaptive: bool = False) -> TomographyResult:
    """Diluted R rho R iteration from I/4.

    rho <- M rho M / tr(M rho M) with M = (1 - eps) I + eps R(rho) and
    R(rho) = sum_k (n_k / N) Pi_k / tr(rho Pi_k). A step that lowers the
    log-likelihood is retried with half the dilution. With ``adaptive`` the
    dilution doubles (up to 1) after each accepted step.

    Raises:
        RankDeficientError: If the settings with data are not informationally complete.
    """
    settings, elements, n = _flatten(counts)
    _require_rank(settings)
    total = n.sum()
    I = identity(4)

    rho = I / 4
    ll = _loglikelihood(rho, elements, n)
    history = [ll]
    eps = dilution
    converged = False
    iterations = 0
    while iterations < max_iter:
        p = probabilities(rho, elements)
        weights = np.divide(n, p, out=np.zeros_like(n), where=n > 0) / total
        R = np.einsum('k,kij->ij', weights, elements)
        while True:
            M = (1 - eps) * I + eps * R
            candidate = M @ rho @ M.conj().T
            candidate = 0.5 * (candidate + candidate.conj().T)
            candidate /= np.trace(candidate).real
            try:
                candidate_ll = _loglikelihood(candidate, elements, n)
            except LikelihoodError:
                candidate_ll = -np.inf
            if candidate_ll >= ll - MONOTONE_SLACK or eps < 1e-12:
                break
            eps /= 2
            logger.debug(f"Likelihood decreased; dilution halved to {eps:g}")
        iterations += 1
        delta = candidate_ll - ll
        rho, ll = candidate, candidate_ll
        history.append(ll)
        if abs(delta) < tol:
            converged = True
            break
        if adaptive:
            eps = min(1.0, 2 * eps)

    if converged:
        logger.info(f"MLE converged after {iterations} iterations, LL={ll:.6f}")
    else:
        logger.warning(f"MLE did not converge in {max_iter} iterations (last change above {tol:g})")
    return TomographyResult(rho_hat=rho, iterations=iterations, final_loglikelihood=ll,
                            converged=converged, loglikelihood_history=history)
