"""Shared exception types."""


class RootfoldError(Exception):
    pass


class UnknownTypeError(RootfoldError):
    """Unrecognized or unsupported Cartan type string."""


class EnumerationOverflow(RootfoldError):
    """A group closure exceeded its element bound."""


class InvalidActionError(RootfoldError):
    """A map fails to be a datum automorphism, a homomorphism, or to
    stabilize a base where required."""


class UnsupportedDatumError(RootfoldError):
    """Operation requires a semisimple datum (roots spanning the
    character space over the rationals)."""


class ParseError(RootfoldError):
    """Document syntax or invariant failure, with field context."""

    def __init__(self, message, context=None):
        self.context = context
        super().__init__(f"{context}: {message}" if context else message)
