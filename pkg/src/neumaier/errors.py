class ValidationError(ValueError):
    """Bad user input: malformed parameters, files, or graphs."""


class InternalInconsistency(AssertionError):
    """A computed object violated an invariant that should hold by construction."""
