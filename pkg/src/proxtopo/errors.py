"""Exception types raised across the package."""


class ProxTopoError(Exception):
    """Base class for every error raised by proxtopo."""


class InputError(ProxTopoError):
    """Malformed input file or inconsistent object construction."""


class InvalidSubset(ProxTopoError):
    pass


class InvalidPoint(ProxTopoError):
    pass


class EmptySet(ProxTopoError):
    pass


class MissingProbe(ProxTopoError):
    pass


class CompositionMismatch(ProxTopoError):
    pass


class NotACover(ProxTopoError):
    pass


class NotClosed(ProxTopoError):
    def __init__(self, which, missing=()):
        self.which = which
        self.missing = tuple(sorted(missing))
        super().__init__(f"subset {which} is not closed; closure adds {list(self.missing)}")


class Disagreement(ProxTopoError):
    def __init__(self, point):
        self.point = point
        super().__init__(f"maps disagree at point {point} of the overlap")


class EndpointMismatch(ProxTopoError):
    pass


class RelViolation(ProxTopoError):
    def __init__(self, point, time):
        self.point = point
        self.time = time
        super().__init__(f"frame at t={time} moves fixed point {point}")


class FrameMismatch(ProxTopoError):
    pass


class NoRealization(ProxTopoError):
    pass


class InvalidCycle(ProxTopoError):
    pass


class Disconnected(ProxTopoError):
    pass


class NoCommonVertex(ProxTopoError):
    pass


class MultipleCommonVertices(ProxTopoError):
    def __init__(self, vertices):
        self.vertices = tuple(vertices)
        super().__init__(f"cycles share {len(self.vertices)} vertices: {list(self.vertices)}")


class ResolutionTooCoarse(ProxTopoError):
    pass


class RegionCountNotTwo(ProxTopoError):
    pass


class InvalidShape(ProxTopoError):
    pass


class UnknownVertex(ProxTopoError):
    pass
