"""Exception hierarchy shared by all modules."""


class TightEmbedError(Exception):
    """Base class for every error raised by the package."""


class InputError(TightEmbedError):
    """Malformed or inconsistent input structure."""


class NotAPoset(InputError):
    pass


class NotALattice(InputError):
    pass


class NotCovers(InputError):
    pass


class NotModular(TightEmbedError):
    pass


class NotDistributive(TightEmbedError):
    pass


class LineTooLarge(TightEmbedError):
    pass


class InvalidPLS(InputError):
    pass


class LineSizeNot3(InvalidPLS):
    pass


class LinesShareTwoPoints(InvalidPLS):
    pass


class UnknownPoint(InvalidPLS):
    pass


class NotACoatom(InputError):
    pass


class BoundExceeded(TightEmbedError):
    """A search or enumeration would exceed its configured bound."""


class NotAQimp(TightEmbedError):
    pass


class NotAUmp(TightEmbedError):
    pass


class PathCollision(TightEmbedError):
    pass


class NotABijection(InputError):
    pass


class NotSimple(TightEmbedError):
    pass


class NotLinePreserving(TightEmbedError):
    pass


class GroundOverlap(InputError):
    pass


class EdgesNotIncident(TightEmbedError):
    pass


class ModeViolation(TightEmbedError):
    pass


class ModelCheckFailed(TightEmbedError):
    pass


class GraphDisconnected(TightEmbedError):
    pass


class NotTight(TightEmbedError):
    pass


class FactorNotTight(TightEmbedError):
    pass


class ParseError(InputError):
    pass


class TheoremViolation(RuntimeError):
    """An empirical check contradicted a result the construction relies on.

    Raised loudly instead of being patched over; the message carries the
    offending objects so the counterexample can be reproduced.
    """
