"""Exception types shared across the package."""


class InputError(ValueError):
    """Malformed input: wrong shapes, bad index sets, unparsable data."""


class PreconditionError(ValueError):
    """Well-formed input that violates an operation's precondition,
    such as a fan that is not smooth or not complete."""


class NotFittedError(AttributeError, ValueError):
    """An estimator was used before ``fit``."""
