"""Domain errors. All derive from ValueError so callers can treat them as bad input."""


class MarketLabError(ValueError):
    """Base class for market_lab domain errors."""


class InfeasibleHistoryError(MarketLabError):
    """A price history that no population can produce under the market's rule."""

    def __init__(self, day: int, reason: str):
        self.day = day
        self.reason = reason
        super().__init__(f"infeasible history on day {day}: {reason}")


class ProbabilityZeroError(MarketLabError):
    """The conditioning event has probability zero."""


class EnumerationCapError(MarketLabError):
    """An exact enumeration would exceed its configured cap."""

    def __init__(self, kind: str, size: int, cap: int):
        self.kind = kind
        self.size = size
        self.cap = cap
        super().__init__(f"{kind} enumeration needs {size} steps, cap is {cap}")


class HistoryLimitInfeasibleError(MarketLabError):
    """The history has vanishing probability as the trader count grows."""


class VanishingConeError(MarketLabError):
    """Too few Monte Carlo samples land in the conditioning cone."""

    def __init__(self, fraction: float, floor: float):
        self.fraction = fraction
        self.floor = floor
        super().__init__(
            f"conditioning cone has vanishing measure: "
            f"observed fraction {fraction:.3g} below floor {floor:.3g}"
        )


class NetlistParseError(MarketLabError):
    """Malformed netlist text."""

    def __init__(self, line_number: int, message: str):
        self.line_number = line_number
        super().__init__(f"line {line_number}: {message}")


class VerificationError(MarketLabError):
    """A compiled market failed one of its verification checks."""
