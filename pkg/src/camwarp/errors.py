"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: configuration problems exit 2, I/O
problems (plain ``OSError``) exit 3, and numeric-domain problems exit 4.
"""


class CamwarpError(Exception):
    """Base class for all camwarp errors."""


class ConfigError(CamwarpError):
    """Invalid configuration value, file, or flag combination."""


class DomainError(CamwarpError):
    """Input is outside the numeric domain of an operation."""


class MissingLutError(DomainError):
    """A distorted camera model was asked to unproject without a lookup table."""


class LutUnsupportedError(DomainError):
    """Lookup-table construction requested for a model with a closed-form inverse."""


class DimensionMismatchError(DomainError):
    """Array dimensions do not match the grid, camera, or partner array."""


class EmptyEvaluationError(DomainError):
    """No pixel survived the joint validity/depth-range mask during evaluation."""
