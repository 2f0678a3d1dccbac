"""Exception types shared across the collision engine."""


class ContactSimError(Exception):
    """Base class for all engine errors."""


class DegenerateCenter(ContactSimError):
    """Circle/ball center coincides with the reference point; the
    closest-point direction is undefined."""


class DegenerateDirection(ContactSimError):
    """The two minimum-distance points coincide; no normal direction can
    be derived from them."""


class NotConverged(ContactSimError):
    """The minimum-distance solver exhausted its iteration budget."""

    def __init__(self, iterations: int, displacement: float):
        self.iterations = iterations
        self.displacement = displacement
        super().__init__(
            f"solver did not converge after {iterations} iterations "
            f"(last displacement {displacement:.3e})"
        )


class UnsupportedPair(ContactSimError):
    """The shape pairing has no narrow-phase detector."""


class UnknownScenario(ContactSimError):
    """Scenario name not present in the registry."""
