""" Exceptions raised while building, combining and reading evidence. """

from typing import Optional


class EvidenceError(ValueError):
    """Base class for every error raised by the evidence engine."""


class FrameError(EvidenceError):
    """A frame of discernment could not be constructed."""


class EmptyFrameError(FrameError):
    pass


class DuplicateLabelError(FrameError):
    pass


class FrameSizeError(FrameError):
    pass


class FrameMismatchError(EvidenceError):
    """Two pieces of evidence live on different frames."""


class InvalidMassError(EvidenceError):
    """Masses are negative, out of range or do not sum to one."""


class FocusMismatchError(EvidenceError):
    """The focal elements of the inputs do not have the shape an operation requires."""


class NonCombinableError(EvidenceError):
    def __init__(
        self,
        message: str,
        step: Optional[int] = None,
        case: Optional[str] = None,
        normalization: Optional[float] = None,
    ):
        """
        Args:
            * message (str): Human readable description of the conflict
            * step (Optional[int]): Index of the input that could not be folded in, when the
                error was raised inside a sequential combination
            * case (Optional[str]): The overlap case of a triplet pair ("equal", "one_shared",
                "disjoint")
            * normalization (Optional[float]): The offending K^-1 value
        """
        super().__init__(message)
        self.step = step
        self.case = case
        self.normalization = normalization

    def at_step(self, step: int) -> "NonCombinableError":
        """Returns a copy of the error that records the failing step."""
        return NonCombinableError(
            f"step {step}: {self.args[0]}",
            step=step,
            case=self.case,
            normalization=self.normalization,
        )


class ApproximationBreakdownError(EvidenceError):
    """The approximate l-fold formulas produced masses outside [0, 1]."""


class EvidenceFormatError(EvidenceError):
    def __init__(
        self, message: str, path: Optional[str] = None, line: Optional[int] = None
    ):
        location = path if path is not None else "<input>"
        if line is not None:
            location = f"{location}:{line}"
        super().__init__(f"{location}: {message}")
        self.path = path
        self.line = line


class MissingLabelError(EvidenceError):
    pass


class OracleCapError(ValueError):
    """The brute-force oracle was asked to run above its configured frame size cap."""
