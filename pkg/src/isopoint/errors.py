"""Exception hierarchy. The CLI maps the two top-level families to exit codes."""


class IsopointError(Exception):
    pass


class DataError(IsopointError):
    """Bad user-supplied data: malformed files, invalid matrices, failed validation."""


class ComputationLimitError(IsopointError):
    """A configured size cap or enumeration bound was exceeded."""


class SingularElementError(DataError, ValueError):
    def __init__(self, detail: str = ""):
        super().__init__("singular element" + (f": {detail}" if detail else ""))


class ClosureTooLarge(ComputationLimitError):
    pass


class EnumerationTooLarge(ComputationLimitError):
    pass


class NotClosedError(IsopointError, TypeError):
    pass


class OutOfScopeError(IsopointError, ValueError):
    pass
