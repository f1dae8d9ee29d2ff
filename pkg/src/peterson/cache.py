"""On-disk cache of :class:`RootSystemData`, keyed by a digest of the Cartan matrix."""

from __future__ import annotations

import json
import logging
import os
import tempfile
from pathlib import Path

from .rootsys import RootSystemData

log = logging.getLogger(__name__)

CACHE_ENV = "PETERSON_CACHE_DIR"


def default_cache_root() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(os.path.expanduser("~"), ".cache")
    return Path(base) / "peterson"


class DiskCache:
    def __init__(self, root: str | os.PathLike | None = None):
        self.root = Path(root) if root is not None else default_cache_root()
        self.dir = self.root / f"v{RootSystemData.CACHE_VERSION}"

    def path_for(self, rs: RootSystemData) -> Path:
        return self.dir / f"{rs.cartan.digest()}.json"

    def load(self, rs: RootSystemData) -> bool:
        path = self.path_for(rs)
        try:
            doc = json.loads(path.read_text())
        except FileNotFoundError:
            return False
        except (OSError, ValueError) as exc:
            log.warning("ignoring unreadable cache file %s: %s", path, exc)
            return False
        return rs.load_json(doc)

    def save(self, rs: RootSystemData) -> Path | None:
        path = self.path_for(rs)
        try:
            self.dir.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=self.dir, suffix=".tmp")
            with os.fdopen(fd, "w") as fh:
                json.dump(rs.to_json(), fh)
            os.replace(tmp, path)
        except OSError as exc:
            log.warning("could not write cache file %s: %s", path, exc)
            return None
        return path
