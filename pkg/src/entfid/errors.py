"""Exception hierarchy shared by every module."""


class EntfidError(Exception):
    """Base class for library errors."""


class DimensionMismatch(EntfidError, ValueError):
    pass


class NonHermitian(EntfidError, ValueError):
    pass


class NotPositiveSemidefinite(EntfidError, ValueError):
    pass


class InvalidState(EntfidError, ValueError):
    """Input is not a valid two-qubit density matrix."""


class NotAState(InvalidState):
    """A Bloch form composed to a matrix with a negative eigenvalue."""


class ZeroProbability(EntfidError, ArithmeticError):
    """A non-trace-preserving operation succeeded with probability ~0."""


class Infeasible(EntfidError, ValueError):
    """A candidate filter violates the SDP constraints."""


class NotConverged(EntfidError, RuntimeError):
    """The SDP solver hit its iteration cap.

    The best iterate is attached as ``solution`` so callers can still
    inspect it.
    """

    def __init__(self, message, solution=None):
        super().__init__(message)
        self.solution = solution
