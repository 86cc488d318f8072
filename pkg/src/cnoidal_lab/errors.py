"""Exception hierarchy shared by all modules."""


class CnoidalError(Exception):
    """Base class for all library errors."""


class ModulusError(CnoidalError, ValueError):
    """Modulus parameter outside its admissible range."""


class DivergentPeriod(CnoidalError):
    """Complete elliptic integral requested at m = 1, where it diverges."""


class NoBracket(CnoidalError):
    """A root bracket that must exist by construction was not found."""


class SchemeMismatch(CnoidalError):
    """Medium constants violate an equality the level scheme requires."""


class DegenerateModulus(CnoidalError):
    """Modulus at a limit where the requested family is not a pulse train."""


class InvalidRatio(CnoidalError):
    """Coupling ratio outside the range the family admits."""


class OrderingViolation(CnoidalError):
    """Propagation constants violate the positivity ordering of the scheme."""


class InfeasibleFraction(CnoidalError):
    """Requested coupling fraction lies outside the feasibility window."""


class DegenerateScheme(CnoidalError):
    """Medium degenerates to a scheme that admits no superposed train."""


class UnitOccupancy(CnoidalError):
    """Ground-state occupancy incompatible with probability conservation."""


class PulseLimit(CnoidalError):
    """Signal: parameters force m = 1, the localized-pulse limit."""


class CertificationError(CnoidalError):
    """A produced coefficient set failed its residual certificate."""


class UnstableRun(CnoidalError):
    """Propagation run exceeded the norm-drift bound; grid too coarse."""


class UndefinedContrast(CnoidalError):
    """Amplitude contrast requested against an identically zero channel."""


class UsageError(CnoidalError):
    """Command line arguments failed validation."""
