"""Exception types shared across the package."""


class ValidationError(ValueError):
    """A matrix failed one of the density-matrix invariants.

    ``invariant`` is one of ``"hermiticity"``, ``"trace"``, ``"positivity"``
    (or ``"shape"``), and ``magnitude`` the size of the violation.
    """

    def __init__(self, invariant, magnitude, detail=""):
        self.invariant = invariant
        self.magnitude = float(magnitude)
        msg = f"{invariant} violated by {self.magnitude:.3e}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class NumericalError(ArithmeticError):
    """Non-finite objective values or inconsistent numerical results."""

    def __init__(self, msg, theta=None, phi=None):
        self.theta = theta
        self.phi = phi
        super().__init__(msg)


class FilterError(NumericalError):
    """A non-unitary filter removed (almost) the entire state."""


class SamplingError(RuntimeError):
    """Rejection sampling exceeded its budget."""
