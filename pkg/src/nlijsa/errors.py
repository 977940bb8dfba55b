"""Exception types shared across the package.

The CLI maps these onto stable exit codes: configuration and argument
problems exit 2, numeric failures exit 3.
"""


class SimulationError(Exception):
    """Base class for all errors raised by this package."""


class InvalidArgumentError(SimulationError, ValueError):
    """An argument violates a documented precondition."""


class WavelengthRangeError(SimulationError, ValueError):
    """A wavelength falls outside the validity range of a coefficient set
    or outside a frequency grid."""


class DegenerateStateError(SimulationError, ValueError):
    """An amplitude is identically zero and cannot be normalized."""


class ContractError(SimulationError, ValueError):
    """An input does not satisfy a documented contract (e.g. a state that
    must be normalized is not)."""


class NumericError(SimulationError, RuntimeError):
    """A numerical routine failed to converge or produced non-finite data."""


class ConfigError(SimulationError, ValueError):
    """A configuration file is missing, malformed, or inconsistent.

    ``key`` names the offending entry when one can be identified.
    """

    def __init__(self, message: str, key: str | None = None):
        super().__init__(message)
        self.key = key
