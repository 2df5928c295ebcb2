"""Exception types raised by the package."""


class ConfigurationError(ValueError):
    """Invalid physical or numerical parameters."""


class ContractViolation(ValueError):
    """An array or index does not match the model it is used with."""


class PropagationAccuracyError(RuntimeError):
    """The Chebyshev expansion hit ``max_order`` before reaching tolerance."""


class RelaxationError(RuntimeError):
    """Imaginary-time relaxation did not converge."""


class SteadyStateError(RuntimeError):
    """An operation requiring a steady state was given a transient run."""
