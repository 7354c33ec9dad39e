class CarlabError(Exception):
    pass


class ConfigurationError(CarlabError, ValueError):
    pass


class UnknownPresetError(ConfigurationError):
    pass


class UnsupportedConfigurationError(ConfigurationError):
    pass


class BoundaryConditionError(ConfigurationError):
    pass


class DomainError(CarlabError, ValueError):
    pass


class CoefficientEvaluationError(CarlabError, RuntimeError):
    def __init__(self, message: str, x=None, t: float | None = None):
        super().__init__(message)
        self.x = x
        self.t = t


class NumericalError(CarlabError, ArithmeticError):
    pass


class PicardConvergenceError(NumericalError):
    def __init__(self, message: str, step: int, last_residual: float):
        super().__init__(message)
        self.step = step
        self.last_residual = last_residual


class DivergenceError(NumericalError):
    def __init__(self, message: str, step: int):
        super().__init__(message)
        self.step = step


class InvariantViolationError(CarlabError, AssertionError):
    pass
