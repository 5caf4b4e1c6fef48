"""Exception types shared across the package."""


class StepavgError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(StepavgError):
    """A function was evaluated outside its mathematical domain."""

    def __init__(self, fn, x):
        self.fn = fn
        self.x = x
        super().__init__(f"{fn} is undefined at x={x!r}")


class InvalidStepError(StepavgError):
    """A step size h <= 0 was passed to an estimator."""


class InvalidIntervalError(StepavgError):
    """An integration interval with a >= b was requested."""


class InvalidStrategyError(StepavgError):
    """A step-generation strategy was configured inconsistently."""


class NonFiniteEstimateError(StepavgError):
    """A single-step estimate inside an average came out non-finite."""

    def __init__(self, step, value):
        self.step = step
        self.value = value
        super().__init__(
            f"single-step estimate is non-finite ({value!r}) at step h={step!r}"
        )


class AggregationError(StepavgError):
    """Error tables with mismatched labels cannot be aggregated."""
