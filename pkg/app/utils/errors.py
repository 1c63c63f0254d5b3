"""
Toolkit exceptions.

Every error carries the process exit code the CLI reports for it:
2 parse/parameter, 3 degeneracy, 4 budget or cap exceeded.
"""

from typing import Optional, Sequence


class ToolkitError(Exception):
    """Base class for all expected failures"""

    exit_code: int = 1

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class ParameterError(ToolkitError):
    exit_code = 2


class SizeError(ParameterError):
    """Input sizes disagree (signature length, vertex counts, caps)"""


class GraphParseError(ParameterError):
    def __init__(self, detail: str, line: Optional[int] = None):
        if line is not None:
            detail = f"line {line}: {detail}"
        super().__init__(detail)
        self.line = line


class CatalogFormatError(ParameterError):
    pass


class DegeneracyError(ToolkitError):
    """Collinear triple or otherwise non-general-position input"""

    exit_code = 3

    def __init__(self, detail: str, indices: Sequence[int] = (), record: Optional[int] = None):
        super().__init__(detail)
        self.indices = tuple(indices)
        self.record = record


class BudgetExceededError(ToolkitError):
    exit_code = 4
