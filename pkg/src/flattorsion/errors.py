"""Exception types shared across the package."""


class InvalidInputError(ValueError):
    """Arguments violate an operation's precondition (shape, degree, dimension...)."""


class DegenerateInputError(ValueError):
    """Input is well-formed but geometrically degenerate (flat plane, rank loss)."""


class StencilError(ValueError):
    """A finite-difference stencil does not fit inside the coordinate domain."""


class NotFoundError(KeyError):
    """Requested catalog entry does not exist."""
