"""Exception types shared across the package."""


class BerryPhaseError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(BerryPhaseError):
    """Vectors, charts or matrices with incompatible dimensions."""


class EvaluationError(BerryPhaseError):
    """A state or Hamiltonian evaluation produced invalid (non-finite) values."""


class ClosureError(BerryPhaseError):
    """A path that must be closed is not, within its closure tolerance."""


class PathTooCoarseError(BerryPhaseError):
    """Consecutive loop samples are nearly orthogonal; raise the sample count."""


class UnsupportedFamilyError(BerryPhaseError):
    """Unknown family id, or the family lacks the requested closed form."""


class StepSizeError(BerryPhaseError):
    """Per-step norm drift too large; raise the step count of the schedule."""


class AdiabaticityLostError(BerryPhaseError):
    """The evolved state no longer overlaps the reference eigenstate."""


class ConfigError(BerryPhaseError):
    """Invalid experiment configuration or malformed input file."""
