"""
Socksort error hierarchy
Every error carries the process exit code the CLI should use for it
"""

from typing import Optional


class SockSortError(Exception):
    """Base class for all socksort errors"""

    exit_code = 2

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class ParseError(SockSortError):
    """Text that does not match the sequence, pattern or multiset grammar"""

    def __init__(self, message: str, position: Optional[int] = None):
        if position is not None:
            message = f"{message} at position {position}"
        super().__init__(message)
        self.position = position


class PartitionError(SockSortError):
    """Malformed set partition (overlapping blocks, gaps or empty blocks)"""


class UnsupportedPatternError(SockSortError):
    """Stack machines need a pattern of length at least 2"""


class PreconditionError(SockSortError):
    """An operation was called outside its documented domain"""


class CapExceededError(SockSortError):
    """A sweep would exceed a configured safety cap"""

    def __init__(self, message: str, size: int, cap: int):
        super().__init__(f"{message}: {size} exceeds cap {cap}")
        self.size = size
        self.cap = cap


class ConfigError(SockSortError):
    """Invalid SOCKSORT_* setting"""


class SeriesError(SockSortError):
    """Internal algebra failure in power-series code; never expected"""

    exit_code = 1


class VerificationError(SockSortError):
    """A checked claim did not hold"""

    exit_code = 1

    def __init__(self, message: str, first_mismatch: Optional[tuple] = None):
        super().__init__(message)
        self.first_mismatch = first_mismatch
