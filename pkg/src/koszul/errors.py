"""Exception types shared across the package.

Every mathematical failure carries a witness (a basis element, tuple or
candidate) sufficient to reproduce the failure with a single check call.
"""


class KoszulError(Exception):
    """Base class for all errors raised by this package."""


class FieldMismatch(KoszulError):
    """Two values from different exact fields were combined."""


class NotAComplex(KoszulError):
    """d*d != 0; carries a witness basis label."""

    def __init__(self, witness, value=None):
        self.witness = witness
        self.value = value
        super().__init__(f"d^2 != 0 on {witness!r}")


class NotSplit(KoszulError):
    """An identity morphism is zero, so no unit retract exists."""


class UnknownObject(KoszulError):
    """An object label is not part of the category/coalgebra."""


class IllFormedDifferential(KoszulError):
    """A generator differential mentions a non-composable or unknown path."""


class NotCurvedMap(KoszulError):
    """A curved-morphism condition failed; carries the condition and witness."""

    def __init__(self, condition, witness):
        self.condition = condition
        self.witness = witness
        super().__init__(f"curved map condition {condition} fails at {witness!r}")


class EnumerationTooLarge(KoszulError):
    """A brute-force enumeration would exceed the configured budget."""

    def __init__(self, count, budget):
        self.count = count
        self.budget = budget
        super().__init__(f"enumeration size {count} exceeds budget {budget}")


class TruncationTooSmall(KoszulError):
    """A word-length truncation is below the conilpotence degree needed."""

    def __init__(self, needed):
        self.needed = needed
        super().__init__(f"word bound too small; need at least {needed}")


class ComparisonFailure(KoszulError):
    """Two computation paths that must agree disagreed; carries a witness."""

    def __init__(self, witness, detail=""):
        self.witness = witness
        super().__init__(f"comparison failed at {witness!r} {detail}")


class IncompleteCandidate(KoszulError):
    """A nerve-simplex candidate is missing required component data."""


class NotSimplicial(KoszulError):
    """A map of simplicial sets fails to commute with face maps."""


class Mismatch(KoszulError):
    """Objects over different coalgebras/categories were combined."""


class ParseError(KoszulError):
    """A document violates the schema; carries a JSON-pointer style path."""

    def __init__(self, path, message):
        self.path = path
        super().__init__(f"{path}: {message}")
