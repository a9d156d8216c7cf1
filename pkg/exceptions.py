"""Exceptions raised across the workbench."""
from typing import Iterable, List


class WorkbenchError(Exception):
    """Base class for every error the workbench raises on purpose."""


class InstanceError(WorkbenchError):
    """A PIC instance violates its well-formedness rules."""


class InvalidWitnessError(WorkbenchError):
    """A selection does not fit the instance (arity or index out of range)."""


class ParseError(WorkbenchError):
    def __init__(self, line: int, message: str):
        self.line = line
        self.message = message
        super().__init__(f"line {line}: {message}")


class B2ValidationError(WorkbenchError):
    def __init__(self, violations: Iterable[str]):
        self.violations: List[str] = list(violations)
        super().__init__("formula is not (3,B2): " + "; ".join(self.violations))


class PartialValuationError(WorkbenchError):
    """A valuation does not cover exactly the variables it is applied to."""


class GuardExceededError(WorkbenchError):
    """An exhaustive procedure refused an input above its configured limit."""


class GeneratorParameterError(WorkbenchError):
    pass


class NotCoveringError(WorkbenchError):
    """A selection was required to cover [1,N] and does not."""


class NotNormalizedError(WorkbenchError):
    """Some point of the variable zone is covered more than once."""


class DecodeError(WorkbenchError):
    """A SAT model does not select exactly one interval per pack."""


class InternalInvariantError(WorkbenchError):
    """Something that the construction guarantees turned out false."""


class SolverDisagreementError(InternalInvariantError):
    def __init__(self, label: str, verdicts: dict):
        self.label = label
        self.verdicts = dict(verdicts)
        rendered = ", ".join(f"{name}={'positive' if v else 'negative'}" for name, v in verdicts.items())
        super().__init__(f"solvers disagree on {label}: {rendered}")
