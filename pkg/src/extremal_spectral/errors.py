"""Exception types raised across the package."""


class InvalidParameterError(ValueError):
    """An argument violates the documented precondition of an operation."""


class DegenerateSampleError(ValueError):
    """The data cannot support the requested computation (e.g. all radii zero)."""


class MissingLatentsError(ValueError):
    """A diagnostic needs latent factors that the sample does not carry."""


class IsolatedNodeError(ValueError):
    """A graph node has zero degree, so the normalized Laplacian is undefined."""

    def __init__(self, nodes):
        self.nodes = list(nodes)
        super().__init__(f"isolated nodes present: {self.nodes[:10]}{'...' if len(self.nodes) > 10 else ''}")


class NumericalFailure(ArithmeticError):
    """An iterative kernel did not reach its tolerance."""

    def __init__(self, message, residual):
        self.residual = residual
        super().__init__(f"{message} (residual={residual:.3e})")
