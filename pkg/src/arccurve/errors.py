"""Exception hierarchy shared by all modules."""


class ArcCurveError(Exception):
    """Base class; ``code`` is the CLI exit status."""

    code = 1


class UnsupportedSurface(ArcCurveError):
    code = 2


class SelfFoldedEdge(ArcCurveError):
    pass


class InvalidCoordinates(ArcCurveError):
    code = 2


class RegistryMiss(ArcCurveError):
    pass


class ResourceLimit(ArcCurveError):
    code = 3


class UnknownVertex(ArcCurveError):
    code = 2


class IncompleteBall(ArcCurveError):
    pass


class NoCandidate(ArcCurveError):
    pass


class InvalidPath(ArcCurveError):
    code = 2


class Unreachable(ArcCurveError):
    pass
