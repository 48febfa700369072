"""Exception and warning types shared across the workbench."""


class OpticForgeError(Exception):
    """Base class for all workbench errors."""


class BoundExceeded(OpticForgeError):
    """A construction would exceed the configured universe bounds."""


class TypeMismatch(OpticForgeError):
    """Sources, targets or category tags do not line up."""


class InvalidDeclaration(OpticForgeError):
    """A declaration is internally inconsistent (duplicate names, bad elements)."""


class NotRepresentable(OpticForgeError):
    """A mixed optic falls outside the pure-get monadic lens shape."""


class NotOpticShaped(OpticForgeError):
    """A diagram boundary is not of the form [R_x, L_u] -> [R_y, L_v]."""


class DiagramTypeError(OpticForgeError):
    """A diagram violates orientation, region or wire constraints."""

    def __init__(self, message, slice_index=None, offset=None):
        self.slice_index = slice_index
        self.offset = offset
        if slice_index is not None:
            message = f"slice {slice_index}, offset {offset}: {message}"
        super().__init__(message)


class ParseError(OpticForgeError):
    """Source text could not be parsed."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, col {column}: {message}"
        super().__init__(message)


class UnknownIdentifier(ParseError):
    """A name was used before (or without) being declared."""


class NoMatch(OpticForgeError):
    """A rewrite rule's left-hand pattern does not match at the position."""


class AbstractCellError(OpticForgeError):
    """An abstract 2-cell has no finite semantics and cannot be compiled."""


class TruncationWarning(UserWarning):
    """A construction silently omitted rows/middles outside the universe."""
