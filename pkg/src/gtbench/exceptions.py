"""
Exception hierarchy for the workbench.
"""

from typing import Optional


class WorkbenchError(Exception):
    """Base class of every error raised by the workbench."""


class InputError(WorkbenchError, ValueError):
    """Malformed input: files, sets, formulas or parameters."""


class UniverseMismatchError(InputError):
    """Two world sets over different universes were combined."""


class FormulaSyntaxError(InputError):
    """Formula text does not follow the grammar."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class ModelFileError(InputError):
    """A model file has the wrong shape or names undeclared worlds."""


class NotOpenError(InputError):
    """An operation defined only for open sets received another set."""


class UnboundMetavariableError(InputError):
    """A schema was instantiated without binding all of its metavariables."""


class UnknownExampleError(InputError):
    """Unknown example id or invalid example parameters."""


class UnsupportedOperatorError(WorkbenchError):
    """A formula uses a modality the model kind does not interpret."""

    def __init__(self, operator: str, semantics: str):
        super().__init__(f"operator {operator} is not supported by {semantics} models")
        self.operator = operator
        self.semantics = semantics


class InvalidModelError(WorkbenchError):
    """A structure failed validation where a valid one is required."""

    def __init__(self, what: str, report: Optional[object] = None):
        details = ""
        if report is not None:
            details = ": " + "; ".join(
                f"{v.rule}: {v.witness}" for v in getattr(report, "violations", ())
            )
        super().__init__(f"invalid {what}{details}")
        self.report = report


class PreconditionError(WorkbenchError):
    """A transformation or construction precondition does not hold."""
