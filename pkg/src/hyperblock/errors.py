"""Exception hierarchy for hyperblock.

Errors fall in two families: input rejection (InadmissibleOrder, BadSizes,
WrongOrder, ...) and construction-bug signals (CountMismatch,
ClosureSizeMismatch, SchemeViolation, ...). Verification *outcomes* that the
construction is expected to report (e.g. a failing lemma part at q=5) are
report content, not exceptions.
"""


class HyperblockError(Exception):
    """Base class for all hyperblock errors."""


class InadmissibleOrder(HyperblockError):
    """q is not an odd prime power of the admitted shape."""


class BothZero(HyperblockError):
    """gcd of (0, 0) requested."""


class CapExceeded(HyperblockError):
    """Requested enumeration exceeds the configured size cap."""


class ModeMismatch(HyperblockError):
    """Group element and cusp live over different fields or modes."""


class ZeroVector(HyperblockError):
    """A cusp representative reduced to the zero vector."""


class ClosureSizeMismatch(HyperblockError):
    """Closure of the octahedral generators is not 12 elements."""


class DegenerateBlock(HyperblockError):
    """A block's six cusps are not distinct."""


class CountMismatch(HyperblockError):
    """A constructed object violates one of its counting identities."""


class NotApplicable(HyperblockError):
    """The requested verification is undefined at this order."""


class WrongOrder(HyperblockError):
    """Operation requested at an order it is not defined for."""


class SchemeViolation(HyperblockError):
    """An association-scheme axiom failed (witness pair attached)."""


class NotAPBIBD(HyperblockError):
    """A pair-replication count is not constant on a class."""


class NotConnected(HyperblockError):
    """The top adjacency eigenvalue is not simple within tolerance."""


class LinkNotTorus(HyperblockError):
    """A cusp link failed the torus invariants."""


class BadSizes(HyperblockError):
    """Band sizes do not form a positive composition of q."""


class NotASphere(HyperblockError):
    """A split link complex is not a closed connected chi=2 surface."""


class NotACircle(HyperblockError):
    """A cut polyline is not a single closed cycle."""


class NotClosedSurface(HyperblockError):
    """Genus requested for a complex that is not a closed oriented surface."""
