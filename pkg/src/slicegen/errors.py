"""Exception types shared across the package.

The CLI maps these onto distinct exit codes, so new error conditions should
reuse one of the existing classes where the category fits.
"""


class SliceGenError(Exception):
    """Base class for all package errors."""


class ShapeError(SliceGenError):
    """Operands have incompatible dimensions."""


class DomainError(SliceGenError):
    """A value lies outside an operation's domain (non-finite, log of a
    negative number, level outside [0, 1], ...)."""


class ContractError(SliceGenError):
    """API misuse: backward on a non-scalar, optimizer step without grads."""


class ConfigError(SliceGenError):
    """Malformed or unsupported configuration."""


class DataError(SliceGenError):
    """Missing or malformed input artifact (index files, images)."""


class DegenerateInputError(SliceGenError):
    """Input admits no meaningful answer (e.g. more clusters than values)."""


class CheckpointError(SliceGenError):
    """Bad magic, version, or inconsistent checkpoint contents."""


class InfinitePsnrError(SliceGenError):
    """PSNR requested for identical images (zero MSE)."""


class TrainingAbort(SliceGenError):
    """Training stopped because a loss term became non-finite."""
