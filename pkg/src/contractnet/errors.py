class ContractNetError(Exception):
    """Base class for all errors raised by contractnet."""


class InputError(ContractNetError, ValueError):
    """Malformed or inconsistent input (unknown ids, bad menus, bad files)."""


class PreconditionError(ContractNetError, ValueError):
    """An operation was called on data that violates its documented precondition."""


class ResourceError(ContractNetError, RuntimeError):
    """An exhaustive scan would exceed the configured cap."""


class TheoremViolation(ContractNetError, AssertionError):
    """A construction that is guaranteed to succeed did not.

    Never expected in practice; seeing one means a bug (or a counterexample).
    """
