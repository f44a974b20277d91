"""Run output storage implementation"""
import json
import os
import tempfile
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from tangle.utils.logging import get_logger

# Get configured logger
logger = get_logger(__name__)

MANIFEST_NAME = "manifest.json"


class RunStoreError(Exception):
    """Base exception for run store errors"""
    pass


class ManifestError(RunStoreError):
    """Raised when a manifest is missing or unreadable"""
    pass


class RunStore:
    """
    Output directory for one command run.

    The recommended way to create a RunStore is using the factory method:

    ```python
    # Default location (TANGLE_OUTPUT_DIR or ./tangle-runs)
    store = RunStore.create()

    # Explicit directory
    store = RunStore.create("runs/phase-sweep")
    ```

    Every write goes to a temporary file in the target directory and is moved
    into place with ``os.replace``, so a reader never sees a partial file.
    The manifest carries no timestamps: rerunning a command with the same
    configuration and seed reproduces the directory byte for byte.
    """

    DEFAULT_DIR_NAME = "tangle-runs"

    @classmethod
    def create(cls, base_path: Optional[Union[str, Path]] = None) -> 'RunStore':
        """
        Factory method to create and validate a RunStore instance.

        Raises:
            RunStoreError: If the directory cannot be created or written
        """
        store = cls(base_path)
        try:
            check_file = store.base_path / ".tangle-write-check"
            store._atomic_write(check_file, b"storage validation")
            content = check_file.read_bytes()
            check_file.unlink()
            if content != b"storage validation":
                raise RunStoreError("Storage validation failed: content mismatch")
            logger.debug(f"Run store validated at {store.base_path}")
            return store
        except RunStoreError:
            raise
        except Exception as e:
            logger.error(f"Storage validation failed: {e}")
            raise RunStoreError(f"Storage validation failed: {e}")

    def __init__(self, base_path: Optional[Union[str, Path]] = None):
        """Initialize run store

        Args:
            base_path: Output directory. If not provided, uses the
                TANGLE_OUTPUT_DIR env var or defaults to ./tangle-runs
        """
        if base_path:
            self.base_path = Path(base_path).expanduser()
        else:
            self.base_path = self.get_default_path()
        self.files: List[str] = []
        self._ensure_directory()

    @classmethod
    def get_default_path(cls) -> Path:
        """Get the default output path based on environment or defaults"""
        env_path = os.getenv('TANGLE_OUTPUT_DIR')
        if env_path:
            return Path(env_path).expanduser()
        return Path.cwd() / cls.DEFAULT_DIR_NAME

    def _ensure_directory(self) -> None:
        try:
            self.base_path.mkdir(parents=True, exist_ok=True)
        except Exception as e:
            logger.error(f"Failed to create output directory {self.base_path}: {e}")
            raise RunStoreError(f"Output directory initialization failed: {e}")

    def path(self, name: str) -> Path:
        """Full path of a file inside the run directory"""
        if Path(name).is_absolute() or ".." in Path(name).parts:
            raise RunStoreError(f"File name must be relative to the run directory: {name}")
        return self.base_path / name

    def _atomic_write(self, target: Path, content: bytes) -> None:
        target.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp_name = tempfile.mkstemp(dir=target.parent, prefix=f".{target.name}.", suffix=".tmp")
        try:
            with os.fdopen(fd, "wb") as f:
                f.write(content)
            os.replace(tmp_name, target)
        except Exception:
            if os.path.exists(tmp_name):
                os.unlink(tmp_name)
            raise

    def save(self, name: str, content: Union[str, bytes]) -> Path:
        """Write one output file atomically and record it for the manifest"""
        target = self.path(name)
        data = content.encode("utf-8") if isinstance(content, str) else content
        try:
            self._atomic_write(target, data)
        except OSError as e:
            raise RunStoreError(f"Failed to write {target}: {e}")
        if name not in self.files:
            self.files.append(name)
        logger.debug(f"Wrote {len(data)} bytes to {target}")
        return target

    def save_json(self, name: str, payload: Dict[str, Any]) -> Path:
        return self.save(name, json.dumps(payload, indent=2, sort_keys=True) + "\n")

    def write_manifest(self, command: str, seed: Optional[int], config_hash: str,
                       extra: Optional[Dict[str, Any]] = None) -> Path:
        """Record what produced this directory: command, seed, config hash, version and files"""
        from tangle import __version__

        manifest = {
            "command": command,
            "seed": seed,
            "config_hash": config_hash,
            "version": __version__,
            "files": sorted(self.files),
        }
        if extra:
            manifest.update(extra)
        return self.save_json(MANIFEST_NAME, manifest)

    def read_manifest(self) -> Dict[str, Any]:
        target = self.path(MANIFEST_NAME)
        if not target.exists():
            raise ManifestError(f"No manifest in {self.base_path}")
        try:
            return json.loads(target.read_text())
        except json.JSONDecodeError as e:
            raise ManifestError(f"Unreadable manifest {target}: {e}")
