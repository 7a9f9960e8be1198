"""Exception types raised across the package."""


class DivisionByZero(ZeroDivisionError):
    pass


class EvaluationPole(ArithmeticError):
    """A rational function was evaluated at one of its poles."""


class NotAFactor(ArithmeticError):
    """An exact division by a claimed factor left a remainder."""


class NotInTridiagonalSpan(ArithmeticError):
    """An operator image is not a combination of psi_{m-1}, psi_m, psi_{m+1}."""


class SingularSystem(ArithmeticError):
    pass


class InvariantViolation(ValueError):
    pass


class DivergentIntegral(ValueError):
    pass


class QuadratureFailure(RuntimeError):
    pass
