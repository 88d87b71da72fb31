"""Exception types shared across the toolkit."""


class GBSError(Exception):
    """Base class for all toolkit errors."""


class InputError(GBSError):
    """Bad user input (parse errors, malformed graphs or words)."""


class DisconnectedGraphError(GBSError):
    """Operation requires a connected graph."""


class NotReducedError(GBSError):
    """Operation is only defined for reduced graphs."""


class ShapeError(GBSError):
    """Graph does not have the segment/circle/lollipop shape the operation needs."""


class ElementaryGroupError(GBSError):
    """Operation excludes Z, Z^2 and the Klein bottle group."""


class MoveError(GBSError):
    """Graph move preconditions violated (wrong edge, missing unit label, ...)."""


class MalformedWordError(GBSError):
    """Word is not a valid based path word over the graph."""


class CertificateError(GBSError):
    """A certificate is structurally unusable (not a soundness failure)."""


class MissingWitnessError(CertificateError):
    """Surjectivity check requested but the certificate carries no witnesses."""


class FactorizationCapError(GBSError):
    """Integer exceeds the trial-division cap."""


class VertexCapError(GBSError):
    """Graph exceeds the exhaustive-search vertex cap."""


class DecisionError(GBSError):
    """Decider preconditions violated (zero labels, excluded groups, ...)."""
