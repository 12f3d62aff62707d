"""Exception types shared across the package."""


class MalformedInputError(ValueError):
    """Input data violates a structural invariant (bad vertex, bad file, ...)."""


class MalformedCertificateError(MalformedInputError):
    """A coloring certificate is incomplete or uses colors outside the palette."""


class CapExceededError(RuntimeError):
    """An exhaustive search was requested above its configured size cap."""


class DegenerateSubsetError(ValueError):
    """Density sampling would use subsets with fewer than three vertices."""
