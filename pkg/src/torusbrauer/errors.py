"""Exception hierarchy shared across the package."""


class TorusBrauerError(Exception):
    pass


class ValidationError(TorusBrauerError):
    """An input object violates a structural invariant."""


class SchemaError(TorusBrauerError):
    """A document does not match the expected input schema."""


class DisagreementError(TorusBrauerError):
    """The symbol basis and the brute-force oracle disagree."""


class CompositionNonzeroError(ValidationError):
    pass


class NotAnInvolutionError(ValidationError):
    pass


class NonSignCharacterOnLatticeError(ValidationError):
    pass


class NotASubgroupError(ValidationError):
    pass


class NotEquivariantError(ValidationError):
    pass


class NotInvariantError(ValidationError):
    pass


class NotQuadraticError(ValidationError):
    pass


class RankTooSmallError(ValidationError):
    pass


class ModulusTooSmallError(ValidationError):
    pass


class DegreeTooLargeError(ValidationError):
    pass


class HomotopySolveFailureError(TorusBrauerError):
    """Internal inconsistency while solving for twisting differentials."""
