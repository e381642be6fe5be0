"""Exception types shared across the package."""


class MalformedInputError(ValueError):
    """Input that cannot be parsed or violates an operation's preconditions."""


class InvalidFloorError(ValueError):
    """Gluing data that cannot produce a hyperbolic floor."""
