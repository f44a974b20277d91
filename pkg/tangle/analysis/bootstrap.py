"""Non-parametric bootstrap over per-setting multinomial resamples."""
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, List, Optional, Union

import numpy as np
from scipy.stats import circstd

from tangle.models.counts import CountTable
from tangle.utils.errors import DataError, TangleError
from tangle.utils.logging import get_logger

logger = get_logger(__name__)

MIN_RESAMPLES = 100
FAILURE_WARNING_RATE = 0.01

Estimator = Callable[[CountTable], Union[float, np.ndarray]]


def _evaluate(counts: CountTable, estimator: Estimator, seed_seq: np.random.SeedSequence):
    resampled = counts.resample(np.random.default_rng(seed_seq))
    try:
        return np.atleast_1d(np.asarray(estimator(resampled), dtype=float))
    except (TangleError, ValueError, np.linalg.LinAlgError) as e:
        return e


def bootstrap_estimates(counts: CountTable, estimator: Estimator, resamples: int, seed: int,
                        workers: int = 1) -> np.ndarray:
    """Estimator values on ``resamples`` multinomial resamples, failures excluded.

    Each resample draws from its own child of SeedSequence(seed), so the
    result does not depend on ``workers``.

    Raises:
        DataError: If resamples < 100 or every resample failed.
    """
    if resamples < MIN_RESAMPLES:
        raise DataError(f"bootstrap needs at least {MIN_RESAMPLES} resamples, got {resamples}")
    children = np.random.SeedSequence(seed).spawn(resamples)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_evaluate, [counts] * resamples, [estimator] * resamples, children))
    else:
        outcomes = [_evaluate(counts, estimator, child) for child in children]

    values: List[np.ndarray] = [o for o in outcomes if not isinstance(o, Exception)]
    failures = resamples - len(values)
    if failures:
        first_error = next(o for o in outcomes if isinstance(o, Exception))
        message = f"{failures}/{resamples} bootstrap resamples failed, first: {first_error}"
        if failures / resamples > FAILURE_WARNING_RATE:
            logger.warning(message)
        else:
            logger.debug(message)
    if not values:
        raise DataError("estimator failed on every bootstrap resample")
    return np.vstack(values)


def bootstrap_std(counts: CountTable, estimator: Estimator, resamples: int = MIN_RESAMPLES, seed: int = 0,
                  circular: Optional[Union[bool, List[bool]]] = False, workers: int = 1
                  ) -> Union[float, np.ndarray]:
    """Standard deviation of an estimator over bootstrap resamples.

    ``circular`` marks angle-valued components, whose spread is the circular
    standard deviation. A scalar estimator gives a float.
    """
    values = bootstrap_estimates(counts, estimator, resamples, seed, workers)
    flags = np.broadcast_to(np.asarray(circular, dtype=bool), (values.shape[1],))
    stds = np.array([
        circstd(values[:, k], high=np.pi, low=-np.pi) if flags[k] else np.std(values[:, k], ddof=1)
        for k in range(values.shape[1])
    ])
    return float(stds[0]) if stds.size == 1 else stds
