"""Exception hierarchy shared by all spacerisk modules.

ValidationError subclasses map to CLI exit code 1; the engine reports
non-convergence and unmitigable hardening through result objects rather
than exceptions, so those conditions only surface here as exit codes.
"""


class SpaceriskError(Exception):
    """Base class for all spacerisk errors."""


class ValidationError(SpaceriskError):
    """Invalid model input (bad value, broken reference, malformed file)."""


# --- infrastructure model ---

class DuplicateNodeId(ValidationError):
    pass


class DanglingArc(ValidationError):
    pass


class FlowNotSubgraph(ValidationError):
    pass


# --- threat model ---

class PossessionOutOfRange(ValidationError):
    pass


class DuplicateTechnique(ValidationError):
    pass


class UnknownTechnique(ValidationError):
    pass


# --- hardening ---

class MissingControl(ValidationError):
    pass


# --- kill chains ---

class IncompleteAnnotation(ValidationError):
    pass


class EmptyCandidateSet(ValidationError):
    pass


class CombinatorialCap(SpaceriskError):
    """Raised when materializing a candidate product larger than the cap."""


# --- metrics ---

class MissingScore(ValidationError):
    pass


class EmptyChain(ValidationError):
    pass


# --- risk matrix ---

class OutOfRange(ValidationError):
    pass


class MissingCatalogEntry(ValidationError):
    pass


# --- scenario files ---

class ParseError(ValidationError):
    pass


class CrossRefError(ValidationError):
    pass
