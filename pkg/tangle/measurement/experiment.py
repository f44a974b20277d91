"""Monte Carlo of experimental sequences and their aggregation into counts."""
import os
from concurrent.futures import ProcessPoolExecutor
from typing import List, Optional, Sequence, Tuple

import numpy as np
import weave
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from tangle.dynamics.source import PhotonSource, get_photon_source
from tangle.measurement.optics import port_projector
from tangle.measurement.readout import ion_readout
from tangle.models.counts import CountTable
from tangle.models.events import DetectionEvent
from tangle.models.noise import NoiseModel
from tangle.models.params import SystemParams
from tangle.models.settings import BasisSetting
from tangle.models.timing import SequenceTiming
from tangle.quantum.operators import identity, tensor
from tangle.utils.errors import DataError
from tangle.utils.logging import get_logger

logger = get_logger(__name__)

# Uniform variates drawn by every sequence, in this order
DRAWS = ("emit", "time", "exit", "port", "apd", "dark0", "dark1", "ion", "flip")
CHUNK_SIZE = 5000


def sequence_rng(seed: int, sequence_index: int) -> np.random.Generator:
    """Counter-based stream for one sequence: Philox keyed by (seed, index)."""
    if not 0 <= seed < 2 ** 64:
        raise DataError(f"seed must lie in [0, 2**64), got {seed}")
    return np.random.Generator(np.random.Philox(key=(seed << 64) | sequence_index))


def _first_dark_click(u: float, rate: float, window: float) -> Optional[float]:
    """First dark-count arrival in [0, window], or None (one uniform variate)."""
    if rate <= 0 or window <= 0 or u >= -np.expm1(-rate * window):
        return None
    return float(-np.log1p(-u) / rate)


def simulate_sequence(p: SystemParams, n: NoiseModel, s: BasisSetting, seed: int,
                      sequence_index: int = 0, source: Optional[PhotonSource] = None
                      ) -> Optional[DetectionEvent]:
    """Simulate one sequence; return the detection event or None for no click."""
    source = source or get_photon_source(p)
    u = dict(zip(DRAWS, sequence_rng(seed, sequence_index).random(len(DRAWS))))

    clicks: List[Tuple[float, int, bool, np.ndarray]] = []
    generated = u["emit"] < source.emission_probability
    if generated and u["exit"] < n.exit_efficiency:
        t_emit = source.sample_time(u["time"])
        joint = source.joint_state_at(t_emit)
        projectors = [tensor(identity(2), port_projector(s, d)) for d in (0, 1)]
        p_port0 = float(np.clip(np.trace(projectors[0] @ joint).real, 0.0, 1.0))
        detector = 0 if u["port"] < p_port0 else 1
        if u["apd"] < n.port_efficiencies[detector]:
            P = projectors[detector]
            conditioned = P @ joint @ P
            clicks.append((t_emit, detector, False, conditioned / np.trace(conditioned).real))

    # No Raman photon: the ion is outside the {D, D'} qubit and reads out at random
    dark_state = source.unconditional_joint_state() if generated else identity(4) / 4
    window = min(n.detection_window, p.T)
    for detector, rate in ((0, n.dark_rate * n.dark_split), (1, n.dark_rate * (1 - n.dark_split))):
        t_dark = _first_dark_click(u[f"dark{detector}"], rate, window)
        if t_dark is not None:
            clicks.append((t_dark, detector, True, dark_state))

    if not clicks:
        return None
    t_click, detector, dark, state = min(clicks, key=lambda c: (c[0], c[2]))
    readout = ion_readout(state, s.ion_axis, n.readout_error, rng=None, u=u["ion"], u_flip=u["flip"])
    return DetectionEvent(sequence_index=sequence_index, detection_time=t_click, detector=detector,
                          dark=dark, ion_outcome=readout.outcome, setting=s)


class ExperimentResult(BaseModel):
    """Aggregated counts plus the event log ordered by sequence index."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    counts: CountTable
    events: List[DetectionEvent] = Field(default_factory=list)
    sequences_per_setting: int = 0
    timing: SequenceTiming = Field(default_factory=SequenceTiming)

    @property
    def detection_fraction(self) -> float:
        total = self.counts.sequences
        return self.counts.detected / total if total else 0.0

    def event_log(self) -> str:
        return "".join(e.to_json() + "\n" for e in self.events)


def _simulate_chunk(p: SystemParams, n: NoiseModel, setting: BasisSetting, seed: int,
                    start: int, stop: int, source: PhotonSource) -> List[DetectionEvent]:
    events = []
    for index in range(start, stop):
        event = simulate_sequence(p, n, setting, seed, index, source)
        if event is not None:
            events.append(event)
    return events


def _chunks(settings: Sequence[BasisSetting], sequences_per_setting: int):
    for k, setting in enumerate(settings):
        first = k * sequences_per_setting
        for start in range(first, first + sequences_per_setting, CHUNK_SIZE):
            yield setting, start, min(start + CHUNK_SIZE, first + sequences_per_setting)


def resolve_workers(workers: Optional[int] = None) -> int:
    if workers is None:
        workers = int(os.getenv("TANGLE_WORKERS", "1"))
    return max(1, workers)


@weave.op()
def run_experiment(p: SystemParams, n: NoiseModel, settings: Sequence[BasisSetting],
                   sequences_per_setting: int, seed: int, workers: Optional[int] = None,
                   timing: Optional[SequenceTiming] = None) -> ExperimentResult:
    """Run every setting for ``sequences_per_setting`` sequences.

    Sequence indices are global (setting position x sequences_per_setting +
    local index), so the output depends on the seed and not on how the work
    is split between processes.

    Raises:
        DataError: If a setting's swap partner is missing or the Raman pulse
            does not fit the sequence period.
    """
    settings = list(settings)
    labels = {s.label for s in settings}
    missing = sorted(s.partner().label for s in settings if s.partner().label not in labels)
    if missing:
        raise DataError(f"missing swap partners: {', '.join(missing)}")
    if sequences_per_setting < 0:
        raise DataError("sequences_per_setting must be nonnegative")

    if timing is None:
        try:
            timing = SequenceTiming(raman=p.T)
        except ValidationError as e:
            raise DataError(f"Raman pulse of {p.T * 1e6:g} us does not fit the sequence: {e.errors()[0]['msg']}")

    source = get_photon_source(p)
    workers = resolve_workers(workers)
    chunks = list(_chunks(settings, sequences_per_setting))
    logger.info(f"Simulating {len(settings)} settings x {sequences_per_setting} sequences "
                f"on {workers} worker(s)")

    events: List[DetectionEvent] = []
    if workers == 1 or len(chunks) <= 1:
        for setting, start, stop in chunks:
            events.extend(_simulate_chunk(p, n, setting, seed, start, stop, source))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_simulate_chunk, p, n, setting, seed, start, stop, source)
                       for setting, start, stop in chunks]
            for future in futures:
                events.extend(future.result())
    events.sort(key=lambda e: e.sequence_index)

    counts = CountTable.from_events(events, settings, sequences_per_setting)
    result = ExperimentResult(counts=counts, events=events, sequences_per_setting=sequences_per_setting,
                              timing=timing)
    logger.info(f"Detected {counts.detected} events in {counts.sequences} sequences "
                f"({100 * result.detection_fraction:.2f}%)")
    return result
