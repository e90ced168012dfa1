"""Exception types raised across the package."""


class GeocensusError(Exception):
    """Base class for every error raised by geocensus."""


class NotHyperbolic(GeocensusError):
    """An element with |trace| <= 2 was used where a hyperbolic one is needed."""


class NoRealSolution(GeocensusError):
    pass


class DegenerateTrace(GeocensusError):
    pass


class NonTermination(GeocensusError):
    pass


class DomainError(GeocensusError):
    """The Dirichlet polygon could not be certified (area or side pairing check)."""


class TrivialWord(GeocensusError):
    pass


class CutoffTooSmall(GeocensusError):
    pass


class SeedPeripheral(GeocensusError):
    pass


class BudgetExceeded(GeocensusError):
    pass


class GridExceedsCutoff(GeocensusError):
    pass


class InsufficientData(GeocensusError):
    pass


class EmptyCensus(GeocensusError):
    pass


class BinningMismatch(GeocensusError):
    pass


class PeripheralOnTarget(GeocensusError):
    pass


class ConfigError(GeocensusError):
    pass
