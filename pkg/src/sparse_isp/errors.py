"""Exception hierarchy shared by all modules."""


class SparseISPError(Exception):
    """Base class for every error raised by this package."""


class SourceError(SparseISPError, ValueError):
    pass


class ZeroComponentError(SourceError):
    pass


class MixedComponentError(SourceError):
    pass


class OutOfBoxError(SourceError):
    pass


class InvalidParameterError(SparseISPError, ValueError):
    pass


class NonpositiveWavenumberError(InvalidParameterError):
    pass


class QuadratureUnderresolvedError(InvalidParameterError):
    pass


class InvalidRateError(InvalidParameterError):
    pass


class LengthMismatchError(SparseISPError, ValueError):
    pass


class InvalidPencilError(InvalidParameterError):
    pass


class FilterTooLongError(InvalidParameterError):
    pass


class RankTooLargeError(InvalidParameterError):
    pass


class DivergedError(SparseISPError, RuntimeError):
    pass


class DimensionMismatchError(SparseISPError, ValueError):
    pass


class ImageTooSmallError(SparseISPError, ValueError):
    pass


class ConfigError(SparseISPError, ValueError):
    pass
