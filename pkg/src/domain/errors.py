"""Error hierarchy for the RIS harvesting engine.

Everything derives from ``ValueError`` so callers that only care about
"bad input" can keep catching that.  The CLI maps :class:`ConfigError`
to exit code 2 and every other :class:`DomainError` to exit code 1.
"""
from typing import Optional


class DomainError(ValueError):
    """A precondition or domain invariant was violated."""


class InfeasibleError(DomainError):
    """The requested target can never be met (e.g. a DC target at or above P_max)."""


class BruteForceCapError(DomainError):
    """Exhaustive search was refused because the surface has too many cells."""

    def __init__(self, m_s: int, cap: int) -> None:
        super().__init__(
            f"brute force over M_s={m_s} cells needs {2 ** m_s - 2} allocations; "
            f"refused by brute_force_cap={cap}"
        )
        self.m_s = m_s
        self.cap = cap


class UndefinedCadenceError(DomainError):
    """Fewer than two reconfiguration events, so no inter-event interval exists."""


class ConfigError(ValueError):
    """A configuration document or override could not be applied.

    ``source`` and ``line`` locate the offending entry when known; ``str()``
    renders them as ``source:line: message``.
    """

    def __init__(self, message: str, source: Optional[str] = None, line: Optional[int] = None) -> None:
        self.message = message
        self.source = source
        self.line = line
        super().__init__(self._render())

    def _render(self) -> str:
        if self.source is None:
            return self.message
        if self.line is None:
            return f"{self.source}: {self.message}"
        return f"{self.source}:{self.line}: {self.message}"
