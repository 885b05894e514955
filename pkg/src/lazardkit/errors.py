"""Exception hierarchy.

Every error carries a ``category`` used by the command-line front end to pick
a stable exit code: ``input`` (3), ``resource`` (4), ``verdict`` (2) and
``internal`` (5).  Internal errors mean the implementation contradicted one of
the theorems it encodes; they never signal bad input.
"""


class LazardError(Exception):
    category = "input"


class InputError(LazardError):
    category = "input"


class NotPrime(InputError):
    pass


class DenominatorNotInvertible(InputError):
    pass


class SizeLimitExceeded(LazardError):
    category = "resource"


class TooLargeForExhaustive(LazardError):
    category = "resource"


class InvalidLieAlgebra(InputError):
    pass


class ParentMismatch(InputError):
    pass


class NotAnIdeal(InputError):
    pass


class ClassTooHigh(InputError):
    pass


class JacobiLiftFailure(InputError):
    pass


class RelationNotInPM(InputError):
    pass


class KernelNotCp(InputError):
    pass


class PresentationFailure(InputError):
    pass


class HypothesesNotMet(LazardError):
    category = "verdict"

    def __init__(self, failed):
        self.failed = list(failed)
        super().__init__("hypotheses not met: " + ", ".join(self.failed))


class InternalInvariantBreach(LazardError):
    category = "internal"


class HatLemmaViolation(InternalInvariantBreach):
    pass


class EmbeddingFailure(InternalInvariantBreach):
    pass


class ParseError(InputError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        loc = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + loc)


class SchemaError(InputError):
    def __init__(self, message, key=None, line=None, column=None):
        self.key = key
        self.line = line
        self.column = column
        text = message if key is None else f"{message} [key: {key}]"
        if line is not None:
            text += f" (line {line}, column {column})"
        super().__init__(text)
