"""Exception types shared across the workbench."""


class InvalidInput(ValueError):
    """A contract violation by the caller (wrong ring, bad shape, ...)."""


class UnsupportedInstance(Exception):
    """The instance is mathematically valid but outside the supported family."""


class ResourceLimit(Exception):
    """A construction exceeded its configured size budget.

    ``transcript`` carries whatever partial data was produced before the
    budget ran out.
    """

    def __init__(self, message, transcript=None):
        super().__init__(message)
        self.transcript = transcript
