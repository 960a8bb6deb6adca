"""Exception hierarchy shared by all convergecast modules."""


class ConvergecastError(Exception):
    """Base class for every error raised by this package."""


class InstanceError(ConvergecastError):
    pass


class DisconnectedGraph(InstanceError):
    pass


class SizeOutOfRange(InstanceError):
    def __init__(self, vertex, size, k):
        self.vertex = vertex
        self.size = size
        self.k = k
        super().__init__(f"vertex {vertex}: reading size {size} outside [1, {k}]")


class MalformedEdge(InstanceError):
    pass


class FormatError(ConvergecastError):
    """A text file (instance, trace, annotation) could not be parsed."""


class GeneratorError(ConvergecastError):
    pass


class EllTooLarge(GeneratorError):
    pass


class RoutingError(ConvergecastError):
    pass


class TreeMismatch(RoutingError):
    pass


class NotAGrid(RoutingError):
    pass


class NotAGadget(RoutingError):
    pass


class TraceError(ConvergecastError):
    """A hop trace violates the packet model. ``seq`` is the offending hop, if any."""

    def __init__(self, message, seq=None):
        self.seq = seq
        super().__init__(message)


class CapacityExceeded(TraceError):
    pass


class NonEdgeHop(TraceError):
    pass


class CausalityViolation(TraceError):
    pass


class ReadingLost(TraceError):
    def __init__(self, origin):
        self.origin = origin
        super().__init__(f"reading from vertex {origin} never reached the sink")


class ReadingDuplicated(TraceError):
    def __init__(self, origin, seq=None):
        self.origin = origin
        super().__init__(f"reading from vertex {origin} duplicated", seq)


class OracleError(ConvergecastError):
    pass


class InvalidPlan(OracleError):
    pass


class PackingTooLarge(OracleError):
    pass


class LimitsExceeded(OracleError):
    pass


class CyclicDependency(OracleError):
    pass
