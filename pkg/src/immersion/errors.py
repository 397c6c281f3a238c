"""Exception hierarchy shared by every module."""


class ImmersionError(Exception):
    """Base class for all package errors."""


# graph core
class NotAdjacentEdges(ImmersionError):
    pass


class SameEdge(ImmersionError):
    pass


class BadPartition(ImmersionError):
    pass


class BadVertex(ImmersionError):
    pass


class SameVertex(ImmersionError):
    pass


class BadEdge(ImmersionError):
    pass


class NotSimple(ImmersionError):
    pass


class GraphFormatError(ImmersionError):
    pass


# matching and trees
class HasPerfectMatching(ImmersionError):
    pass


class NoPerfectMatching(ImmersionError):
    pass


class Disconnected(ImmersionError):
    pass


# certificates
class DigestMismatch(ImmersionError):
    pass


class InvalidInput(ImmersionError):
    pass


class TraceMismatch(ImmersionError):
    pass


class CertificateFormatError(ImmersionError):
    pass


# finders
class PreconditionViolated(ImmersionError):
    pass


class RetriesExhausted(ImmersionError):
    pass


class NoFreeInternalVertex(ImmersionError):
    pass


class BoundViolated(PreconditionViolated):
    pass


class InternalContradiction(ImmersionError):
    """Raised when a step the underlying theorem guarantees fails: always a bug."""


class NotCompletelyJoined(PreconditionViolated):
    pass


class TooFewBVertices(PreconditionViolated):
    pass


# constructions
class NotRegular(PreconditionViolated):
    pass


class EvenOrderComponent(PreconditionViolated):
    pass


class TooFewComponents(PreconditionViolated):
    pass


class NotOddPrime(PreconditionViolated):
    pass


# oracle
class BudgetExceeded(ImmersionError):
    pass


class DegenerateInput(UserWarning):
    """Input too small for the intended construction; a trivial answer was used."""
