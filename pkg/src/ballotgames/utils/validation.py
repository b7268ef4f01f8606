"""Functional validation utilities for candidate sets, parameters and experiment settings."""

import re
from typing import List, Sequence, Tuple


MIN_SECURITY_PARAMETER = 16
MAX_SECURITY_PARAMETER = 2048

_IDENTIFIER_PATTERN = re.compile(r'^\S(?:.*\S)?$')


def sanitize_identifier(text: str) -> str:
    """Normalize whitespace in a candidate identifier."""
    if not text:
        return ""
    return re.sub(r'\s+', ' ', text).strip()


def validate_candidate_identifiers(candidates: Sequence[str]) -> Tuple[bool, List[str]]:
    """
    Validate an ordered list of candidate identifiers.

    Returns:
        Tuple of (is_valid, list_of_errors)
    """
    errors = []

    if len(candidates) < 2:
        errors.append("A candidate set needs at least 2 candidates")

    seen = set()
    for position, name in enumerate(candidates):
        if not name or not _IDENTIFIER_PATTERN.match(name):
            errors.append(f"Candidate {position} has an empty or padded identifier")
        if name in seen:
            errors.append(f"Duplicate candidate identifier: {name!r}")
        seen.add(name)

    return len(errors) == 0, errors


def validate_security_parameter(
    k: int,
    floor: int = MIN_SECURITY_PARAMETER,
    ceiling: int = MAX_SECURITY_PARAMETER
) -> Tuple[bool, List[str]]:
    """
    Validate a security parameter against a scheme's supported range.

    Returns:
        Tuple of (is_valid, list_of_errors)
    """
    errors = []

    if isinstance(k, bool) or not isinstance(k, int):
        errors.append("Security parameter must be an integer")
        return False, errors

    if k < floor:
        errors.append(f"Security parameter must be at least {floor}, got {k}")

    if k > ceiling:
        errors.append(f"Security parameter must be at most {ceiling}, got {k}")

    return len(errors) == 0, errors


def validate_vote_index(v: int, arity: int) -> bool:
    """Check that a vote resolves within a candidate set of the given size."""
    return isinstance(v, int) and not isinstance(v, bool) and 0 <= v < arity


def validate_bit(value: object) -> bool:
    """Check that an adversary guess is a bit."""
    return isinstance(value, int) and not isinstance(value, bool) and value in (0, 1)
