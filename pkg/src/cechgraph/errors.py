"""Exception types shared across the package."""


class CechError(Exception):
    """Base class for all errors raised by cechgraph."""


class SizeError(CechError):
    """An input size or face-count budget is out of the supported range."""


class DomainError(CechError, ValueError):
    """An argument lies outside the domain of an operation."""


class ConnectivityError(CechError):
    """A graph that must be connected is not."""


class FreeFaceError(DomainError):
    """A face proposed for an elementary collapse is not free.

    ``cofaces`` lists the maximal faces containing it (zero or at least two).
    """

    def __init__(self, face, cofaces):
        self.face = tuple(face)
        self.cofaces = [tuple(c) for c in cofaces]
        super().__init__(
            f"face {self.face} has {len(self.cofaces)} maximal cofaces: {self.cofaces}"
        )
