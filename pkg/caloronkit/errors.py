"""
Exception hierarchy for CaloronKit.

Every error carries the CLI exit code it maps to: input and schema problems
exit with 2, failed identities with 1.
"""

from typing import Any, Optional


class CaloronKitError(Exception):
    """Base class for all toolkit errors."""

    exit_code: int = 2
    kind: str = "error"

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_dict(self) -> dict[str, Any]:
        """Machine-readable payload for standard error."""
        return {"error": self.kind, "message": self.message, "details": self.details}


class GridError(CaloronKitError):
    """Invalid grid description or axis reference."""

    kind = "grid"


class ShapeMismatchError(CaloronKitError):
    """Arrays, grids or ranks that do not fit together."""

    kind = "shape_mismatch"


class DegreeError(CaloronKitError):
    """Form degree outside what an operation accepts."""

    kind = "degree"


class InvariantError(CaloronKitError):
    """Data violating a domain invariant (basedness, framing, unitarity, invertibility)."""

    kind = "invariant"


class PathError(CaloronKitError):
    """Malformed path of connections or pairs."""

    kind = "path"


class UnsupportedDomainError(CaloronKitError):
    """Operation only defined on torus grids."""

    kind = "unsupported_domain"


class NotClosedError(CaloronKitError):
    """Periods requested for a form that is not closed."""

    kind = "not_closed"


class SchemaError(CaloronKitError):
    """Input file does not match its JSON schema."""

    kind = "schema"


class ConfigError(CaloronKitError):
    """Inconsistent run configuration."""

    kind = "config"


class IdentityFailure(CaloronKitError):
    """A verified identity exceeded its tolerance."""

    exit_code = 1
    kind = "identity_failure"

    def __init__(self, message: str, defect: Optional[float] = None, **details: Any):
        super().__init__(message, defect=defect, **details)
