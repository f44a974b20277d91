"""Sequence Monte Carlo: analyzer optics, detectors, ion readout and counts."""
from tangle.measurement.optics import (
    WAVEPLATE_ANGLES,
    retarder,
    half_wave_plate,
    quarter_wave_plate,
    polarization_ket,
    analyzer_unitary,
    port_projector,
    logical_port_projector,
)
from tangle.measurement.readout import IonReadout, ion_projector, ion_readout
from tangle.measurement.experiment import (
    ExperimentResult,
    sequence_rng,
    simulate_sequence,
    run_experiment,
    resolve_workers,
)
