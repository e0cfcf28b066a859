"""Exception hierarchy shared by all modules."""


class ThetaWitnessError(Exception):
    """Base class for every error raised by this package."""


class MalformedGraph(ThetaWitnessError, ValueError):
    pass


class InvalidParameter(ThetaWitnessError, ValueError):
    pass


class NumericError(ThetaWitnessError, ArithmeticError):
    pass


class NotPSD(NumericError):
    pass


class ThetaFailed(ThetaWitnessError, RuntimeError):
    """The theta SDP did not reach an optimal status."""


class HeuristicFailed(ThetaWitnessError, RuntimeError):
    """Every restart of the rank heuristic failed in its first SDP."""


class RankTooHigh(NumericError):
    pass


class NotThetaFeasible(NumericError):
    pass


class InconsistentRealization(NumericError):
    """Realization probabilities break the exclusivity axiom p_i + p_j <= 1."""
