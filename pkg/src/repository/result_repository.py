"""Abstract interface for persisting run outputs.

The ``ResultRepository`` defines the contract for writing the tables,
JSON documents and manifest a run produces.  Concrete implementations
decide the storage mechanism; workflows depend only on this abstraction.
"""
from abc import ABC, abstractmethod
from typing import Any

import pandas as pd

from src.domain.models import OutputFile, RunManifest


class ResultRepository(ABC):
    """Abstract base class for run-output persistence."""

    @abstractmethod
    def write_table(self, name: str, frame: pd.DataFrame) -> OutputFile:
        """Persist *frame* as the table *name* and return its checksum entry.

        If an entry already exists for *name*, it is overwritten.
        """

    @abstractmethod
    def write_json(self, name: str, document: dict[str, Any]) -> OutputFile:
        """Persist *document* under *name* and return its checksum entry."""

    @abstractmethod
    def write_manifest(self, manifest: RunManifest) -> OutputFile:
        """Persist the run manifest; the write must be all-or-nothing."""
