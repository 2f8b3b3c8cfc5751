"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes (validation 2, verification 3, cap 4),
and the HTTP service maps them onto status codes.
"""


class ZefcError(Exception):
    """Base class for all package errors."""


class InstanceFormatError(ZefcError):
    """A problem-instance or scheme document is malformed or inconsistent."""


class CapExceededError(ZefcError):
    """An enumeration or search exceeded its configured size cap."""


class VerificationError(ZefcError):
    """A cover or scheme failed a validity check required by the operation."""


class AmbiguityError(VerificationError):
    """Decoder construction found two function values for one message pair."""
