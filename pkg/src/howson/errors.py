"""Exception hierarchy shared by all howson modules.

Exit-code mapping for the CLI lives in howson.cli: domain/validation
errors exit 1, cap/budget errors exit 2, usage errors exit 3.
"""


class HowsonError(Exception):
    """Base class for all library errors."""


class InvalidSemilattice(HowsonError):
    def __init__(self, reason, detail=""):
        self.reason = reason
        super().__init__(f"invalid semilattice ({reason}): {detail}" if detail
                         else f"invalid semilattice ({reason})")


class KindMismatch(HowsonError):
    pass


class NotAutomorphism(HowsonError):
    pass


class NotHomomorphism(HowsonError):
    def __init__(self, message, witness=None):
        self.witness = witness  # pair of factorizations of one group element
        super().__init__(message)


class EmptyWord(HowsonError):
    pass


class NotApplicable(HowsonError):
    pass


class UnsupportedBackend(HowsonError):
    pass


class ClosureViolation(HowsonError):
    pass


class ParseError(HowsonError):
    pass


class InternalInvariantViolation(HowsonError):
    """An invariant the theory guarantees failed; always a bug, never user error."""


class CapExceeded(HowsonError):
    def __init__(self, what, limit):
        self.what = what
        self.limit = limit
        super().__init__(f"cap exceeded: {what} (limit {limit})")


class BudgetExceeded(HowsonError):
    """Raised by orbit/reduction when the token budget runs out.

    Deliberately inconclusive: it witnesses only that the budget was too
    small, not that the action fails to be locally finite.
    """

    def __init__(self, count):
        self.count = count
        super().__init__(f"budget exceeded after {count} tokens (inconclusive)")
