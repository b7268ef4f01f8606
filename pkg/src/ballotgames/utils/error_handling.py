"""
Error handling for the ballot game harness.

This module provides error classification, user-facing messages and
suggestions, structured error logging, and a decorator that converts
unexpected failures inside harness operations into classified errors.
"""

import logging
from dataclasses import dataclass
from datetime import datetime
from enum import Enum
from functools import wraps
from typing import Any, Callable, Dict, List, Optional, TypeVar, Union

from pydantic import BaseModel

logger = logging.getLogger(__name__)

T = TypeVar('T')


class ErrorCategory(str, Enum):
    """Categories of errors that can occur in the harness."""
    CONFIGURATION = "configuration"
    PARAMETER = "parameter"
    DECODING = "decoding"
    EVIDENCE = "evidence"
    PRECONDITION = "precondition"
    GAME = "game"
    ADVERSARY = "adversary"
    SYSTEM = "system"


class ErrorSeverity(str, Enum):
    """Severity levels for errors."""
    LOW = "low"
    MEDIUM = "medium"
    HIGH = "high"
    CRITICAL = "critical"


@dataclass
class ErrorContext:
    """Context information for error handling."""
    operation: str
    component: str
    trial: Optional[int] = None
    additional_data: Optional[Dict[str, Any]] = None


class ErrorReport(BaseModel):
    """Error detail printed by the CLI."""
    code: str
    message: str
    details: Dict[str, Any] = {}
    suggestions: List[str] = []


class BallotGamesError(Exception):
    """Base exception for all harness errors."""

    def __init__(
        self,
        message: str,
        category: ErrorCategory,
        severity: ErrorSeverity = ErrorSeverity.MEDIUM,
        code: Optional[str] = None,
        suggestions: Optional[List[str]] = None,
        details: Optional[Dict[str, Any]] = None,
        context: Optional[ErrorContext] = None
    ):
        super().__init__(message)
        self.message = message
        self.category = category
        self.severity = severity
        self.code = code or f"{category.value.upper()}_ERROR"
        self.suggestions = suggestions or []
        self.details = details or {}
        self.context = context
        self.timestamp = datetime.now()


class ConfigurationError(BallotGamesError):
    """Invalid experiment configuration."""

    def __init__(self, message: str, field: Optional[str] = None, **kwargs: Any):
        super().__init__(
            message=message,
            category=ErrorCategory.CONFIGURATION,
            severity=ErrorSeverity.LOW,
            **kwargs
        )
        if field:
            self.details["field"] = field


class UnsupportedParameterError(BallotGamesError):
    """Security parameter outside the range a scheme supports."""

    def __init__(self, message: str, k: Optional[int] = None, **kwargs: Any):
        super().__init__(
            message=message,
            category=ErrorCategory.PARAMETER,
            severity=ErrorSeverity.LOW,
            **kwargs
        )
        if k is not None:
            self.details["k"] = k


class DecodingError(BallotGamesError):
    """Canonical byte string could not be parsed."""

    def __init__(self, message: str, line: Optional[int] = None, **kwargs: Any):
        super().__init__(
            message=message,
            category=ErrorCategory.DECODING,
            severity=ErrorSeverity.MEDIUM,
            **kwargs
        )
        if line is not None:
            self.details["line"] = line


class MalformedEvidenceError(BallotGamesError):
    """Evidence does not decode under the scheme."""

    def __init__(self, message: str, scheme: Optional[str] = None, **kwargs: Any):
        super().__init__(
            message=message,
            category=ErrorCategory.EVIDENCE,
            severity=ErrorSeverity.MEDIUM,
            **kwargs
        )
        if scheme:
            self.details["scheme"] = scheme


class PreconditionError(BallotGamesError):
    """Operation called outside its precondition."""

    def __init__(self, message: str, operation: Optional[str] = None, **kwargs: Any):
        super().__init__(
            message=message,
            category=ErrorCategory.PRECONDITION,
            severity=ErrorSeverity.MEDIUM,
            **kwargs
        )
        if operation:
            self.details["operation"] = operation


class InvalidVoteError(BallotGamesError):
    """Oracle input outside the candidate set. Disqualifies, never faults."""

    def __init__(self, message: str, votes: Optional[tuple] = None, **kwargs: Any):
        super().__init__(
            message=message,
            category=ErrorCategory.GAME,
            severity=ErrorSeverity.LOW,
            **kwargs
        )
        if votes is not None:
            self.details["votes"] = list(votes)


class OracleClosedError(BallotGamesError):
    """Challenge oracle used outside the board-building stage."""

    def __init__(self, message: str, **kwargs: Any):
        super().__init__(
            message=message,
            category=ErrorCategory.GAME,
            severity=ErrorSeverity.MEDIUM,
            **kwargs
        )


class AdversaryFaultError(BallotGamesError):
    """Adversary raised or produced malformed output."""

    def __init__(
        self,
        message: str,
        adversary: Optional[str] = None,
        stage: Optional[str] = None,
        trial: Optional[int] = None,
        **kwargs: Any
    ):
        super().__init__(
            message=message,
            category=ErrorCategory.ADVERSARY,
            severity=ErrorSeverity.HIGH,
            **kwargs
        )
        if adversary:
            self.details["adversary"] = adversary
        if stage:
            self.details["stage"] = stage
        if trial is not None:
            self.details["trial"] = trial


class TrialFaultError(AdversaryFaultError):
    """A trial faulted; the run is aborted."""

    def __init__(self, message: str, trial: int, **kwargs: Any):
        super().__init__(message=message, trial=trial, code="TRIAL_FAULT", **kwargs)


class TallyError(BallotGamesError):
    """Internal tally invariant violated."""

    def __init__(self, message: str, **kwargs: Any):
        super().__init__(
            message=message,
            category=ErrorCategory.SYSTEM,
            severity=ErrorSeverity.CRITICAL,
            **kwargs
        )


class SystemError(BallotGamesError):
    """Error for unexpected harness-level failures."""

    def __init__(self, message: str, **kwargs: Any):
        super().__init__(
            message=message,
            category=ErrorCategory.SYSTEM,
            severity=ErrorSeverity.HIGH,
            **kwargs
        )


def get_user_friendly_message(error: BallotGamesError) -> str:
    """Generate a readable message based on error type."""

    base_messages = {
        ErrorCategory.CONFIGURATION: "The experiment configuration is invalid.",
        ErrorCategory.PARAMETER: "The security parameter is not supported.",
        ErrorCategory.DECODING: "A ballot or board could not be decoded.",
        ErrorCategory.EVIDENCE: "The tally evidence could not be decoded.",
        ErrorCategory.PRECONDITION: "An operation was called on invalid input.",
        ErrorCategory.GAME: "The game rules were violated.",
        ErrorCategory.ADVERSARY: "An adversary failed during a trial.",
        ErrorCategory.SYSTEM: "Something went wrong inside the harness.",
    }

    base_message = base_messages.get(error.category, "An unexpected error occurred.")

    if error.category == ErrorCategory.CONFIGURATION and "field" in error.details:
        base_message += f" Please check the '{error.details['field']}' setting."
    elif error.category == ErrorCategory.DECODING and "line" in error.details:
        base_message += f" The problem is on line {error.details['line']}."
    elif error.category == ErrorCategory.ADVERSARY and "trial" in error.details:
        base_message += f" The run stopped at trial {error.details['trial']}."

    return base_message


def get_error_suggestions(error: BallotGamesError) -> List[str]:
    """Generate helpful suggestions based on error type."""

    if error.suggestions:
        return error.suggestions

    suggestions_map = {
        ErrorCategory.CONFIGURATION: [
            "Run 'ballotgames run --help' to list valid values",
            "Check which adversaries are valid for the selected game",
        ],
        ErrorCategory.PARAMETER: [
            "Use a security parameter between 16 and 2048",
        ],
        ErrorCategory.DECODING: [
            "Check that the file was written by 'ballotgames run --save-board'",
            "Make sure every line is a complete hex string",
        ],
        ErrorCategory.EVIDENCE: [
            "Recover evidence with the same scheme that produced it",
        ],
        ErrorCategory.ADVERSARY: [
            "Fix the adversary implementation; faults are not counted as losses",
            "Re-run with --log-level DEBUG to see the failing stage",
        ],
        ErrorCategory.SYSTEM: [
            "Re-run with --log-level DEBUG and report the output",
        ],
    }

    return suggestions_map.get(error.category, ["Please check the inputs and try again"])


def create_error_report(error: Union[BallotGamesError, Exception]) -> ErrorReport:
    """Create a standardized error report."""

    if isinstance(error, BallotGamesError):
        return ErrorReport(
            code=error.code,
            message=f"{get_user_friendly_message(error)} {error.message}",
            details=error.details,
            suggestions=get_error_suggestions(error)
        )

    return ErrorReport(
        code="UNEXPECTED_ERROR",
        message=f"An unexpected error occurred: {error}",
        suggestions=["Re-run with --log-level DEBUG and report the output"]
    )


def log_error(
    error: Union[BallotGamesError, Exception],
    context: Optional[ErrorContext] = None,
    extra_data: Optional[Dict[str, Any]] = None
) -> None:
    """
    Log error with appropriate level and context.

    Args:
        error: The error to log
        context: Error context information
        extra_data: Additional data to include in log
    """

    log_data: Dict[str, Any] = {
        "error_type": type(error).__name__,
        "error_message": str(error),
    }

    if isinstance(error, BallotGamesError):
        log_data.update({
            "category": error.category.value,
            "severity": error.severity.value,
            "code": error.code,
            "details": error.details
        })

    if context:
        log_data.update({
            "operation": context.operation,
            "component": context.component,
            "trial": context.trial
        })
        if context.additional_data:
            log_data.update(context.additional_data)

    if extra_data:
        log_data.update(extra_data)

    if isinstance(error, BallotGamesError):
        if error.severity == ErrorSeverity.CRITICAL:
            logger.critical("Critical error occurred", extra=log_data)
        elif error.severity == ErrorSeverity.HIGH:
            logger.error("High severity error occurred", extra=log_data)
        elif error.severity == ErrorSeverity.MEDIUM:
            logger.warning("Medium severity error occurred", extra=log_data)
        else:
            logger.info("Low severity error occurred", extra=log_data)
    else:
        logger.error("Unexpected error occurred", extra=log_data)


def error_handler(
    category: ErrorCategory,
    operation: str,
    component: str
) -> Callable[[Callable[..., T]], Callable[..., T]]:
    """
    Decorator for harness operations.

    Classified errors are logged and re-raised unchanged. Anything else is
    wrapped in a SystemError carrying the operation context.

    Args:
        category: Error category for this operation
        operation: Name of the operation being performed
        component: Component where the operation is happening
    """

    def decorator(func: Callable[..., T]) -> Callable[..., T]:
        @wraps(func)
        def wrapper(*args: Any, **kwargs: Any) -> T:
            context = ErrorContext(
                operation=operation,
                component=component,
                additional_data={"category": category.value}
            )

            try:
                return func(*args, **kwargs)

            except BallotGamesError as e:
                log_error(e, context)
                raise

            except Exception as e:
                system_error = SystemError(
                    message=f"Unexpected error in {operation}: {str(e)}",
                    context=context
                )
                log_error(system_error, context)
                raise system_error from e

        return wrapper

    return decorator
