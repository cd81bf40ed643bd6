class NumericalError(ArithmeticError):
    """A stage produced NaN/Inf or an iterative solve failed to converge."""


class ConvergenceError(NumericalError):
    pass
