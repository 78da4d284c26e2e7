"""Exception hierarchy shared by all ncpower modules."""
from __future__ import annotations


class NcPowerError(Exception):
    """Base class for all errors raised by this package."""


class InstanceError(NcPowerError):
    """Malformed instance file or invalid instance data.

    ``line`` carries the 1-based line number when the error came from parsing.
    """

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class DomainError(NcPowerError):
    """Input outside the domain of a generator or closed-form formula."""


class RoutingError(NcPowerError):
    """No route exists between a demand's endpoints."""


class SurvivabilityError(RoutingError):
    """No pair of edge-disjoint paths exists; ``cut_edge`` names a culprit."""

    def __init__(self, message: str, cut_edge: tuple[int, int] | None = None):
        super().__init__(message)
        self.cut_edge = cut_edge


class FeasibilityError(NcPowerError):
    """Two demands cannot be encoded together."""


class ContractError(NcPowerError):
    """Caller violated a precondition linking routings, demands, assignments."""


class OracleGuardError(NcPowerError):
    """Brute-force search would exceed its enumeration guard."""
