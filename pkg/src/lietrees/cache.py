"""On-disk cache of presentations and their Smith reductions.

Entries are keyed by object name (which carries ``n`` and ``k``), the
cache format version and a digest of the presentation itself.  Each file
starts with ``ZCACHE <version> <sha256 of body>``; the body is the ZPRES
text of the presentation followed by its ZRED reduction.  Writes go to a
temporary file that is renamed into place, so readers never see a partial
entry.
"""

from __future__ import annotations

import hashlib
import logging
import os
import tempfile
from pathlib import Path

from .presented import Presentation, reduction_from_text, reduction_to_text
from .zlinalg import CokernelMap

FORMAT_VERSION = 1

log = logging.getLogger(__name__)


class Cache:
    def __init__(self, directory: str | os.PathLike, version: int = FORMAT_VERSION):
        self.version = version
        self.directory: Path | None = Path(directory)
        try:
            self.directory.mkdir(parents=True, exist_ok=True)
            probe = tempfile.NamedTemporaryFile(dir=self.directory, delete=True)
            probe.close()
        except OSError as e:
            log.warning("cache directory %s is not writable (%s); running without cache", directory, e)
            self.directory = None

    @property
    def enabled(self) -> bool:
        return self.directory is not None

    def path_for(self, P: Presentation) -> Path:
        return self.directory / f"{P.name}.v{self.version}.{P.digest[:16]}.zcache"

    def _read(self, path: Path) -> str | None:
        try:
            text = path.read_text()
        except OSError:
            return None
        head, _, body = text.partition("\n")
        parts = head.split()
        if len(parts) != 3 or parts[0] != "ZCACHE" or parts[1] != str(self.version):
            log.warning("discarding cache entry %s: bad header", path.name)
            return None
        if hashlib.sha256(body.encode()).hexdigest() != parts[2]:
            log.warning("discarding cache entry %s: digest mismatch", path.name)
            return None
        return body

    def _write(self, path: Path, body: str) -> None:
        digest = hashlib.sha256(body.encode()).hexdigest()
        fd, tmp = tempfile.mkstemp(dir=self.directory, prefix=".tmp-", suffix=".zcache")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(f"ZCACHE {self.version} {digest}\n{body}")
            os.replace(tmp, path)
        except OSError as e:
            log.warning("could not write cache entry %s: %s", path.name, e)
            try:
                os.unlink(tmp)
            except OSError:
                pass

    def load_reduction(self, P: Presentation) -> CokernelMap | None:
        if not self.enabled:
            return None
        path = self.path_for(P)
        body = self._read(path)
        if body is None:
            return None
        pres_text = P.to_zpres()
        if not body.startswith(pres_text):
            log.warning("discarding cache entry %s: presentation differs", path.name)
            return None
        try:
            cm = reduction_from_text(body[len(pres_text):])
        except (ValueError, IndexError) as e:
            log.warning("discarding cache entry %s: %s", path.name, e)
            return None
        if cm.proj.cols != len(P) or cm.sect.rows != len(P):
            return None
        return cm

    def save_reduction(self, P: Presentation, cm: CokernelMap) -> None:
        if self.enabled:
            self._write(self.path_for(P), P.to_zpres() + reduction_to_text(cm))
