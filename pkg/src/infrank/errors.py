"""Exception taxonomy shared by all modules."""


class InfrankError(Exception):
    """Base class for all library errors."""


class DimensionError(InfrankError):
    """Matrix dimensions incompatible with the requested operation."""


class NotCompletableError(InfrankError):
    """Column set is not unimodular, so it cannot be extended to a basis."""


class AlignmentError(InfrankError):
    """Window size incompatible with a representation's block structure."""


class CompositionUnsupportedError(InfrankError):
    """No symbolic closure rule covers this pair of representations.

    Callers that only need finite data should fall back to window
    evaluation, which is always available.
    """


class ShapeError(InfrankError):
    """Representation does not have the block shape an engine requires."""


class WordError(InfrankError):
    """Group word refers to a name missing from its environment."""


class ValidationError(InfrankError):
    """Semantic violation in parsed data (e.g. a non-unimodular matrix)."""


class ParseError(InfrankError):
    """Structural violation in a serialized document.

    Carries the JSON-ish path of the offending node so error messages can
    point at the exact position.
    """

    def __init__(self, path: str, message: str):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}")
