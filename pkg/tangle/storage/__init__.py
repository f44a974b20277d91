"""Run output storage for tangle"""
from .run_store import RunStore, RunStoreError, ManifestError

__all__ = ['RunStore', 'RunStoreError', 'ManifestError']
