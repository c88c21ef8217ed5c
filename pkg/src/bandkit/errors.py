"""Exception types shared across the package."""


class BandkitError(Exception):
    """Base class for all bandkit domain errors."""


class MalformedMap(BandkitError):
    """Dart-level arities are broken: bad involution, rotation, over-pair or anchor."""


class ParseError(BandkitError):
    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", col {col}" if col is not None else "") + ")"
        super().__init__(message + where)


class SemanticError(BandkitError):
    """Structurally parseable input that violates arity or role rules."""


class SameCircuit(BandkitError):
    pass


class DimensionMismatch(BandkitError):
    pass


class IllegalSite(BandkitError):
    """Move site does not match the kind's local pattern; diagram left unchanged."""

    def __init__(self, message, pattern=None):
        self.pattern = pattern
        super().__init__(message if pattern is None else f"{message}: {pattern}")


class RoleViolation(IllegalSite):
    """Move site mixes circuit roles forbidden by the kind."""


class ScriptError(BandkitError):
    def __init__(self, index, cause):
        self.index = index
        self.cause = cause
        super().__init__(f"script failed at step {index}: {cause}")


class KirbyMismatch(BandkitError):
    pass


class Unsupported(BandkitError):
    pass


class NotOverK0(BandkitError):
    pass


class NonCoherentChord(BandkitError):
    pass


class MalformedTangle(BandkitError):
    pass


class UnknownFixture(BandkitError):
    pass
