"""Exception types shared across the package."""


class AaalqoError(Exception):
    """Base class for errors raised by this package."""


class PoleError(AaalqoError):
    """Transfer-function evaluation requested at or too close to a system pole."""

    def __init__(self, point, argument="s", rcond=None):
        self.point = point
        self.argument = argument
        self.rcond = rcond
        msg = f"resolvent is singular or near-singular at {argument} = {point}"
        if rcond is not None:
            msg += f" (estimated reciprocal condition {rcond:.3e})"
        super().__init__(msg)


class SpuriousPoleError(AaalqoError):
    """Barycentric denominator vanished at an evaluation point off the support set."""

    def __init__(self, point):
        self.point = point
        super().__init__(f"barycentric denominator vanished at {point}")


class DegenerateProblemError(AaalqoError):
    """Least-squares stage received an identically zero stacked matrix."""


class DivergenceError(AaalqoError):
    """Time stepping produced a non-finite state."""

    def __init__(self, time):
        self.time = time
        super().__init__(f"state became non-finite at t = {time}")


class FormatError(AaalqoError):
    """A file on disk does not match the expected schema."""
