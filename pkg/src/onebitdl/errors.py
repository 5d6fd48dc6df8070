"""Exception types shared across the simulator."""


class ConfigError(ValueError):
    """A system configuration or scenario file failed validation."""


class StreamRangeError(IndexError):
    """A sample lookup fell outside a stream's padded extent."""


class SingularChannelError(ValueError):
    """The per-subcarrier channel Gram matrix could not be inverted."""

    def __init__(self, subcarrier: int):
        self.subcarrier = int(subcarrier)
        super().__init__(f"channel is rank-deficient on subcarrier {self.subcarrier}")


class AnalysisDomainError(ValueError):
    """Closed-form evaluation was requested outside its validity region."""


class DegenerateInputError(ValueError):
    """A statistical input is degenerate (zero-variance entry, invalid correlation, ...)."""
