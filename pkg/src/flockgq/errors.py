"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """A requested object is outside the supported configuration space."""


class DomainError(ValueError):
    """An argument is structurally valid but violates a precondition."""


class FormEquivalenceError(TypeError):
    """Two quadratic forms are not equivalent up to similarity."""
