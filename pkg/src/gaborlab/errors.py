"""Exception hierarchy shared by all gaborlab modules."""


class GaborLabError(Exception):
    """Base class for every error raised by gaborlab."""


class ParseError(GaborLabError, ValueError):
    """Malformed rational literal, lattice file or family shorthand."""


class SingularGenerator(GaborLabError, ValueError):
    pass


class OddDimension(GaborLabError, ValueError):
    pass


class DimensionMismatch(GaborLabError, ValueError):
    pass


class NotSymplectic(GaborLabError, ValueError):
    pass


class UnsupportedDimension(GaborLabError, ValueError):
    pass


class UnknownFamily(GaborLabError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown family"


class NonPositive(GaborLabError, ValueError):
    pass


class GridTooCoarse(GaborLabError, ValueError):
    """Grid step too large to resolve the requested time-frequency shifts."""


class EmptyTruncation(GaborLabError, ValueError):
    """No lattice point falls inside the truncation ball."""


class NoConvergence(GaborLabError, RuntimeError):
    """An eigenvalue iteration hit its iteration cap."""
