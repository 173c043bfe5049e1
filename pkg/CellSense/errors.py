class CellSenseError(Exception):
    """Base class of every error raised by CellSense."""


class InvalidConfigError(CellSenseError, ValueError):
    def __init__(self, message: str, line_numbers: tuple[int, ...] = ()) -> None:
        """
        Raised when a scenario, estimator or experiment parameter is invalid.

        :param message: Human readable description of the problem.
        :param line_numbers: Spec-file lines involved, if the error came from a file.
        """
        self.line_numbers: tuple[int, ...] = tuple(line_numbers)
        if self.line_numbers:
            lines: str = ", ".join(str(number) for number in self.line_numbers)
            message = f"{message} (line {lines})"
        super().__init__(message)


class NumericInputError(CellSenseError, ValueError):
    """Raised when a matrix or vector contains NaN or infinite entries."""


class ShapeMismatchError(CellSenseError, ValueError):
    """Raised when moment vectors disagree on their order K or their aspect ratio c."""


class DomainError(CellSenseError, ValueError):
    """Raised when an argument lies outside the mathematical domain of an operation."""


class NotIdentifiableError(CellSenseError, ArithmeticError):
    def __init__(self, message: str, roots=None) -> None:
        """
        Raised when power sums do not correspond to a set of real nonnegative powers.

        :param message: Human readable description of the problem.
        :param roots: The raw (possibly complex) polynomial roots that were rejected.
        """
        self.roots = roots
        super().__init__(message)


class WorkerFailure(CellSenseError, RuntimeError):
    def __init__(self, message: str, completed: list = None) -> None:
        """
        Raised when a Monte-Carlo trial fails inside a worker.

        :param message: Description of the failure.
        :param completed: Results of the trials that finished before the failure, in trial order.
        """
        self.completed: list = list(completed or [])
        super().__init__(message)
