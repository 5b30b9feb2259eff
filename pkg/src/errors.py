"""Exception hierarchy shared by every package."""


class MznError(Exception):
    """Base class for all errors raised by this project."""


class InvalidAmbientError(MznError, ValueError):
    """The number of marked points is outside the supported range."""


class InvalidArgumentError(MznError, ValueError):
    """An argument is malformed (labels, subsets, permutations, text encodings)."""


class AmbientMismatchError(MznError, ValueError):
    """Two objects living on different moduli spaces were combined."""


class SearchBudgetExceeded(MznError, RuntimeError):
    """A bounded search finished without a verified answer."""


class ResourceLimitError(MznError, RuntimeError):
    """A computation was refused because it exceeds the configured bounds."""


class CertificateError(MznError, RuntimeError):
    """An internal self-check failed. This always indicates a bug."""
