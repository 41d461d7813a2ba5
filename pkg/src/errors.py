from typing import Optional


class SymplecticError(Exception):
    """Base exception for integration, parareal and diagnostics errors."""
    code = "error"


class EvaluationError(SymplecticError):
    """Raised when a scalar field or phase-space map evaluates to a non-finite value."""
    code = "evaluation"


class StateError(SymplecticError, ValueError):
    """Raised when a phase-space state is malformed."""
    code = "state"


class ParameterError(SymplecticError, ValueError):
    """Raised when a physical parameter is out of range."""
    code = "parameter"


class ArgumentError(SymplecticError, ValueError):
    """Raised when a pure function receives unusable arguments."""
    code = "argument"


class SchemeError(SymplecticError):
    """Raised when a splitting scheme violates an invariant or a precondition."""
    code = "scheme"


class CatalogError(SymplecticError):
    """Raised when a scheme or system name is not in its catalog."""
    code = "catalog"


class ConfigurationError(SymplecticError):
    """Raised when an experiment or analysis configuration is invalid."""
    code = "config"

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NumericalOverflowError(SymplecticError):
    """Raised when a drift or kick produces a non-finite state.

    The error is annotated as it propagates outward: the splitting stage,
    the step index inside a trajectory and the parareal branch.
    """
    code = "overflow"

    def __init__(
        self,
        message: str,
        stage: Optional[int] = None,
        step_index: Optional[int] = None,
        branch: Optional[int] = None,
    ):
        self.base_message = message
        self.stage = stage
        self.step_index = step_index
        self.branch = branch
        super().__init__(self._render())

    def _render(self) -> str:
        where = []
        if self.branch is not None:
            where.append(f"branch {self.branch}")
        if self.step_index is not None:
            where.append(f"step {self.step_index}")
        if self.stage is not None:
            where.append(f"stage {self.stage}")
        if not where:
            return self.base_message
        return f"{self.base_message} ({', '.join(where)})"

    def annotate(self, **where) -> "NumericalOverflowError":
        """Fill in location fields that are still unset and refresh the message."""
        for key, value in where.items():
            if getattr(self, key) is None:
                setattr(self, key, value)
        self.args = (self._render(),)
        return self
