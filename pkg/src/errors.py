"""
Module: errors.py
Description: Exception hierarchy shared by the models, data loaders and the command-line entry point.
             Every exception carries the process exit code the CLI reports for it.
"""

from typing import List, Optional, Tuple


class BTSAError(Exception):
    """Base class for all toolkit errors."""

    exit_code = 1


class ValidationError(BTSAError, ValueError):
    """Invalid user-facing input (config files, CLI flags, measurement files)."""

    exit_code = 2


class ConfigurationError(ValidationError):
    """
    Invalid run configuration.

    Parameters:
        message (str): Human readable reason.
        field_path (str, optional): Dotted path of the offending key, e.g. "section.h_mm".
    """

    def __init__(self, message: str, field_path: Optional[str] = None) -> None:
        self.field_path = field_path
        super().__init__(f"{field_path}: {message}" if field_path else message)


class MeasurementFormatError(ValidationError):
    """
    A measurement CSV that does not match the file contract.

    Parameters:
        issues (List[Tuple[int, str, str]]): (line number, column, reason) for every problem found.
    """

    def __init__(self, issues: List[Tuple[int, str, str]]) -> None:
        self.issues = list(issues)
        lines = [f"line {line}, column {column}: {reason}" for line, column, reason in self.issues]
        super().__init__("invalid measurement file:\n  " + "\n  ".join(lines))


class ConditionMismatchError(ValidationError):
    """Estimates compared or grouped across experimental conditions that do not match."""


class DomainError(BTSAError, ValueError):
    """
    A mathematical precondition was violated.

    Parameters:
        message (str): Human readable reason.
        field (str, optional): Name of the offending argument.
    """

    exit_code = 3

    def __init__(self, message: str, field: Optional[str] = None) -> None:
        self.field = field
        super().__init__(f"{field}: {message}" if field else message)


class FileAccessError(BTSAError, OSError):
    """Reading an input file or writing an output file failed."""

    exit_code = 4

    def __init__(self, message: str, path: str) -> None:
        self.path = path
        super().__init__(f"{path}: {message}")


class VerificationError(BTSAError):
    """At least one oracle comparison exceeded its tolerance."""

    exit_code = 1
