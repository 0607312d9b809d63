"""Exception hierarchy shared by all modules."""


class CMNormsError(Exception):
    """Base class for every error raised by the package."""


class DomainError(CMNormsError, ValueError):
    """An argument lies outside the domain where an operation is defined."""


class PrecisionError(CMNormsError, ArithmeticError):
    """A numerical evaluation could not reach the requested accuracy."""


class ResourceError(CMNormsError, RuntimeError):
    """A configured resource cap (digits, terms, bits) was exceeded."""


class RootError(CMNormsError, ArithmeticError):
    """An exact root of a factored integer does not exist."""
