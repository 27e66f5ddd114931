"""Exception types shared across the package."""


class ZeroStateError(ValueError):
    """State vector has no nonzero amplitude, so nothing can be normalized or sampled."""


class InvalidAmplitudeError(ValueError):
    """An amplitude is NaN or infinite."""


class DegenerateOutcomeError(ValueError):
    """The label map cannot be inverted for an outcome whose amplitude is zero."""


class ConfigError(ValueError):
    """Invalid scenario document, parameter value, or violated call precondition."""


class RangeError(ValueError):
    """A sample value lies outside the declared test range beyond the allowed slack."""


class SamplerStallError(RuntimeError):
    """The rejection loop exceeded its consecutive-rejection budget."""


class ReportIOError(OSError):
    """A report file could not be written; the message names the target path."""
