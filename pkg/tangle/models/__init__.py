"""Domain records shared across tangle modules."""
from tangle.models.params import MHZ, LevelFrequencies, SystemParams
from tangle.models.noise import NoiseModel
from tangle.models.settings import (
    OUTCOMES,
    PHOTON_BASES,
    ION_AXES,
    BasisSetting,
    logical_settings,
    standard_settings,
    outcome_index,
)
from tangle.models.events import DetectionEvent
from tangle.models.counts import CountTable, SettingCounts
from tangle.models.results import TomographyResult, WitnessReport
from tangle.models.timing import SequenceTiming
