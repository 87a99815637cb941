"""File-based implementation of ResultRepository.

Writes every output into one directory::

    {base_dir}/
      samples.csv
      summary.json
      ...
      manifest.json

CSV floats use ``%.17g`` so every double round-trips exactly and the
bytes do not depend on the locale.  JSON keys are sorted.
"""
import hashlib
import json
import os
import tempfile
from typing import Any

import pandas as pd
import structlog

from src.domain.models import OutputFile, RunManifest
from src.repository.result_repository import ResultRepository

logger = structlog.get_logger(__name__)

MANIFEST_NAME = "manifest.json"
FLOAT_FORMAT = "%.17g"


def sha256_of(path: str) -> str:
    """Hex SHA-256 digest of the file at *path*."""
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _json_text(document: dict[str, Any]) -> str:
    return json.dumps(document, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


class FileResultRepository(ResultRepository):
    """Persist run outputs as CSV and JSON files under ``base_dir``."""

    def __init__(self, base_dir: str = "results") -> None:
        self._base_dir = base_dir

    @property
    def base_dir(self) -> str:
        return self._base_dir

    def _path(self, name: str) -> str:
        os.makedirs(self._base_dir, exist_ok=True)
        return os.path.join(self._base_dir, name)

    def _record(self, name: str, path: str) -> OutputFile:
        output = OutputFile(name=name, sha256=sha256_of(path))
        logger.info("result_written", name=name, path=path, sha256=output.sha256)
        return output

    def write_table(self, name: str, frame: pd.DataFrame) -> OutputFile:
        """Write *frame* as ``{base_dir}/{name}`` without the index."""
        path = self._path(name)
        frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        return self._record(name, path)

    def write_json(self, name: str, document: dict[str, Any]) -> OutputFile:
        """Write *document* as indented JSON with sorted keys."""
        path = self._path(name)
        with open(path, "w", encoding="utf-8") as f:
            f.write(_json_text(document))
        return self._record(name, path)

    def write_manifest(self, manifest: RunManifest) -> OutputFile:
        """Write ``manifest.json`` through a temporary file and an atomic rename."""
        path = self._path(MANIFEST_NAME)
        fd, tmp_path = tempfile.mkstemp(dir=self._base_dir, prefix=".manifest-", suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as f:
                f.write(_json_text(manifest.to_dict()))
            os.replace(tmp_path, path)
        except BaseException:
            if os.path.exists(tmp_path):
                os.unlink(tmp_path)
            raise
        return self._record(MANIFEST_NAME, path)
