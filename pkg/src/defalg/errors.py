"""Exception hierarchy shared by all modules.

InputError maps to CLI exit code 2 (malformed input), CheckFailure to
exit code 1; everything mathematical that merely *reports* violations
returns a report instead of raising.
"""


class DefalgError(Exception):
    """Base class for all library errors."""


class InputError(DefalgError):
    """Malformed or inconsistent input data (file schema, unknown symbol...)."""


class DomainError(DefalgError):
    """Operation applied outside its mathematical domain (wrong degree...)."""


class StructureError(DefalgError):
    """A structure required by a precondition fails its axioms."""


class InternalError(DefalgError):
    """An invariant the library guarantees was violated (e.g. a
    nilpotency-bounded sum failed to terminate)."""
