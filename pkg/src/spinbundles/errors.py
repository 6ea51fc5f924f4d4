"""Exception types shared across the package."""


class GeometryError(ValueError):
    """Base class for geometric/algebraic contract violations."""


class ChartDomainError(GeometryError):
    """A point lies outside the requested chart or chart overlap."""


class FiberMembershipError(GeometryError):
    """A vector does not lie in the required fiber line."""


class ParityError(GeometryError):
    """A scalar field or map has the wrong parity under the antipode."""


class BindingError(GeometryError):
    """A group action was applied to a section with an incompatible presentation."""


class ConfigError(ValueError):
    """Invalid suite configuration."""
