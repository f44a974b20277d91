"""tangle - simulator and analysis toolkit for tunable ion-photon entanglement"""

__version__ = "0.1.0"

from tangle.utils.logging import get_logger
from tangle.models.params import SystemParams
from tangle.models.noise import NoiseModel
from tangle.models.settings import BasisSetting, standard_settings
from tangle.models.counts import CountTable
from tangle.models.results import TomographyResult, WitnessReport
from tangle.dynamics.hamiltonians import default_params, target_state
from tangle.dynamics.source import PhotonSource, get_photon_source
from tangle.measurement.experiment import run_experiment
from tangle.tomography.reconstruct import mle_reconstruct
from tangle.storage.run_store import RunStore
from tangle.utils.registry import Registry

# Configure logging when package is imported
logger = get_logger(__name__)
