class FSetsError(Exception):
    """Base class for library errors."""


class InvalidArgument(FSetsError, ValueError):
    pass


class ModulusMismatch(FSetsError, ValueError):
    pass


class GroupMismatch(FSetsError, ValueError):
    pass


class InvalidRelation(FSetsError, ValueError):
    """A claimed integral relation h(F)=0 failed on sample points."""


class UnsupportedCoordinate(FSetsError, ValueError):
    """A torus coordinate has no valuation decomposition over F_p(t)."""


class UnsupportedShape(FSetsError, ValueError):
    pass


class ResourceLimit(FSetsError, RuntimeError):
    """An enumeration or materialization would exceed the configured budget."""


class ParseError(FSetsError, ValueError):
    pass


class ValidationError(FSetsError, ValueError):
    pass
