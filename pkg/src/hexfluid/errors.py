"""Exception types raised across the package."""


class HexFluidError(Exception):
    """Base class for every error raised by hexfluid."""


class DomainError(HexFluidError, ValueError):
    """An input lies outside the domain where a formula is defined."""


class NumericalError(HexFluidError, ArithmeticError):
    """A quadrature or other numerical routine failed to reach its tolerance."""


class ConfigError(HexFluidError, ValueError):
    """A scenario file or preset could not be parsed or validated.

    ``field`` names the offending key when one can be identified.
    """

    def __init__(self, message: str, field: str | None = None):
        self.field = field
        if field is not None and field not in message:
            message = f"{field}: {message}"
        super().__init__(message)
