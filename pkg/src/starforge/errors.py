"""Exception types shared across the package.

Contract violations raise subclasses of StarforgeError so callers (and the
command line driver) can tell a bad input apart from a genuine mathematical
failure discovered while checking an identity.
"""


class StarforgeError(Exception):
    """Base class for all package errors."""


class UsageError(StarforgeError):
    """Malformed input: bad file, bad arguments, mismatched truncations."""


class NotAUnit(UsageError):
    """A series or bivariate element required to be invertible is not."""


class DegenerateInput(UsageError):
    """Input data is structurally unusable (repeated slopes, empty basis...)."""


class InvalidStar(StarforgeError):
    """A presentation failed one of the star axioms or a required identity."""


class InvalidDeformation(StarforgeError):
    """A presentation failed one of the deformation axioms."""


class DegenerateExtension(StarforgeError):
    """An extension step whose degeneracy scalar vanishes was rejected."""


class GenerationFailed(StarforgeError):
    """A random search exhausted its retry budget."""


class NotAProperIdeal(UsageError):
    """Generators span the whole ring where a proper ideal was required."""


class NotApplicable(UsageError):
    """The requested construction has no input to work on (e.g. a witness
    for two identical algebras)."""


class ContradictionError(StarforgeError):
    """An identity that must hold for valid input failed; carries a witness."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
