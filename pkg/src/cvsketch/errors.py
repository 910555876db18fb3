"""Exception types shared across the library. Plain ValueError covers
ordinary argument validation; these subclasses exist where callers need to
distinguish the failure mode."""


class ItemOutOfRangeError(ValueError):
    """Stream update names an item outside the sketch's declared universe."""


class MismatchedHashError(ValueError):
    """Two sketches that must share a hash function do not."""


class InvalidMomentsError(ValueError):
    """Control-variate moment spec is unusable (negative variance, or zero
    variance with nonzero covariance)."""


class MissingVectorsError(ValueError):
    """Exact-mode inner-product moments need both frequency vectors."""


class BudgetExceededError(ValueError):
    """Requested enumeration is larger than the oracle's budget."""


class LengthMismatchError(ValueError):
    """Estimate list does not match the median-of-means plan size."""


class DatasetFormatError(ValueError):
    """Dataset file violates its format; message carries file position."""
