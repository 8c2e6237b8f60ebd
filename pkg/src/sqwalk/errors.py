"""Exception hierarchy shared by all sqwalk modules."""


class SQWError(Exception):
    """Base class for every error raised by sqwalk."""


class TopologyError(SQWError, ValueError):
    """Invalid graph construction or an invalid bond state."""


class SpecParseError(SQWError, ValueError):
    """A graph-spec document could not be parsed or validated."""

    def __init__(self, message, *, line=None, field=None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)
        self.line = line
        self.field = field


class CoinError(SQWError, ValueError):
    """A coin matrix is malformed, non-unitary or has invalid parameters."""


class SingularParameterError(CoinError):
    """Point-interaction parameters make the amplitude denominator vanish."""


class PoleError(SQWError, ArithmeticError):
    """A rational function was evaluated on (or numerically at) a pole."""

    def __init__(self, message, residual):
        super().__init__(f"{message} (|denominator| = {residual:.3e})")
        self.residual = residual


class NonExpandableError(SQWError, ArithmeticError):
    """A rational function has no Taylor expansion at z = 0."""


class DegenerateRequestError(SQWError, ValueError):
    """Entry and exit bond coincide where a transit is required."""


class SeriesOverflowError(SQWError, RuntimeError):
    """A symbolic series exceeded its order or term-count cap."""


class DescriptorError(SQWError, KeyError):
    """A path descriptor or symbol group refers to unknown coin symbols."""

    def __str__(self):
        return str(self.args[0]) if self.args else ""
