"""Exception hierarchy shared by every module of the package."""


class NFPError(Exception):
    """Base class for all errors raised by nfptych."""


class DimensionError(NFPError, ValueError):
    """Array lengths or shapes are inconsistent."""


class ConfigurationError(NFPError, ValueError):
    """Parameters violate a structural requirement (divisibility, parity, support)."""


class DegenerateInputError(NFPError, ValueError):
    """Input is degenerate for the requested operation (e.g. an all-zero signal)."""


class IllPosedOperatorError(NFPError, ArithmeticError):
    """A Fourier-domain block of the lifted operator is numerically singular."""

    def __init__(self, block_index, sigma_min, message=None):
        self.block_index = int(block_index)
        self.sigma_min = float(sigma_min)
        if message is None:
            message = (f"Fourier block {self.block_index} is singular "
                       f"(sigma_min={self.sigma_min:.3e})")
        super().__init__(message)


class ConvergenceError(NFPError, RuntimeError):
    """An iterative eigensolver did not reach its tolerance."""

    def __init__(self, message, residual=float("nan"), iterations=0):
        self.residual = float(residual)
        self.iterations = int(iterations)
        super().__init__(f"{message} (residual={self.residual:.3e} after "
                         f"{self.iterations} iterations)")


class SynchronizationError(NFPError, ValueError):
    """Angular synchronization is undefined, e.g. the weight graph is disconnected."""


class DivergenceError(NFPError, FloatingPointError):
    """Gradient iterations produced a non-finite loss."""

    def __init__(self, iteration, message=None):
        self.iteration = int(iteration)
        if message is None:
            message = f"non-finite loss at iteration {self.iteration}"
        super().__init__(message)
