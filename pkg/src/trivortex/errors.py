"""Exception hierarchy.

Two branches matter for the CLI exit codes: ``ValidationError`` (bad or
inadmissible input, exit code 2) and ``NumericalError`` (a computation that
started but could not finish, exit code 3).
"""


class VortexError(Exception):
    """Base class for all package-specific errors."""


class ValidationError(VortexError):
    """Input violates a documented precondition."""


class NumericalError(VortexError):
    """A numerical procedure failed at runtime."""


class ZeroStrength(ValidationError):
    """A circulation is zero; the equations of motion are undefined."""


class CollisionConfiguration(ValidationError):
    """Two vortices coincide (or nearly so); velocities and energy diverge."""


class NotAdmissible(ValidationError):
    """Strengths with gamma1*gamma2*gamma3/gamma_tot <= 0; the symbol family
    would need imaginary normalizations."""


class BadParameter(ValidationError):
    """Family parameter is zero, outside the admissible plane, or the default
    choice is singular for these strengths."""


class DegenerateSubspace(ValidationError):
    """No basis of the admissible parameter plane could be constructed."""


class DegenerateMass(ValidationError):
    """gamma1 + gamma2 = 0 (or gamma_tot = 0); the relative-coordinate chart
    is undefined."""


class ZeroVector(ValidationError):
    """A relative vector vanishes, so its polar angle is undefined."""


class NegativeCoefficient(ValidationError):
    """An action-coordinate weight A or B is not positive."""


class DomainError(ValidationError):
    """Coordinates outside the geometric domain (e.g. |I1| > I2)."""


class SingularPoint(ValidationError):
    """Evaluation point too close to a coordinate singularity."""


class PoleSingularity(ValidationError):
    """Chart angle undefined at a pole of the sphere."""


class CollisionPoint(ValidationError):
    """Reduced-space point with a vanishing squared side; energy diverges."""


class TripleCollision(ValidationError):
    """mu = 0 labels the cone vertex where all three vortices coincide."""


class MismatchedSetup(ValidationError):
    """Trajectories being compared were not produced from matching data."""


class StepFailure(NumericalError):
    """Adaptive step-size control underflowed."""
