"""Exception hierarchy shared by all season_forecast modules."""


class ForecastError(Exception):
    """Base class for every error raised by this package."""


class ShapeError(ForecastError, ValueError):
    """Input or parameter dimensions do not match the network topology."""


class EmptyBatchError(ForecastError, ValueError):
    pass


class CongruenceError(ForecastError, ValueError):
    """Parameter, gradient and momentum stores are not shape-congruent."""


class DivergenceError(ForecastError, ArithmeticError):
    def __init__(self, epoch, value):
        self.epoch = epoch
        self.value = value
        super().__init__(f"training diverged at epoch {epoch} (mse={value!r})")


class DomainError(ForecastError, ValueError):
    """A value lies outside the domain an operation accepts."""


class ParseError(ForecastError, ValueError):
    """Malformed file content. Carries the path and 1-based line number when known."""

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}"
            if line is not None:
                where += f":{line}"
            where += ": "
        elif line is not None:
            where = f"line {line}: "
        super().__init__(where + message)


class ModelFormatError(ParseError):
    """Model file has an unknown version, wrong kind, or inconsistent parameter count."""
