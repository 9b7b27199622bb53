"""Exception types raised by the library."""


class PragmaticError(Exception):
    """Base class for all library errors."""


class DistributionError(PragmaticError, ValueError):
    """A probability vector violates a distribution invariant."""


class ZeroPriorError(DistributionError):
    """A prior has a zero (or negative) entry; KL against it would be infinite."""

    def __init__(self, index, value=0.0):
        self.index = int(index)
        self.value = float(value)
        super().__init__(f"prior entry at index {self.index} is {self.value!r}; priors must be strictly positive")


class DimensionMismatchError(PragmaticError, ValueError):
    pass


class DegenerateDistributionError(DistributionError):
    """Raised when a prefix code needs at least two symbols with positive mass."""


class SchemaError(PragmaticError, ValueError):
    """Malformed ensemble / joint-ensemble / distribution document."""


class StationaryMismatchError(PragmaticError, ValueError):
    """A Markov message source does not have the ensemble's message distribution as its stationary law."""

    def __init__(self, stationary, expected):
        self.stationary = [float(x) for x in stationary]
        self.expected = [float(x) for x in expected]
        super().__init__(
            f"stationary distribution {self.stationary} of the transition matrix does not match "
            f"the ensemble message probabilities {self.expected}"
        )


class ConvergenceError(PragmaticError, RuntimeError):
    pass


class ParseError(SchemaError):
    """Input is not valid JSON; carries the 1-based line and column."""

    def __init__(self, source, lineno, colno, msg):
        self.source = source
        self.lineno = lineno
        self.colno = colno
        super().__init__(f"{source}: line {lineno} column {colno}: {msg}")
