"""Unit tests for validation utilities."""

import pytest
from pydantic import ValidationError

from ballotgames.models.core import CandidateSet
from ballotgames.utils.validation import (
    sanitize_identifier,
    validate_bit,
    validate_candidate_identifiers,
    validate_security_parameter,
    validate_vote_index,
)


def test_sanitize_identifier():
    """Test identifier normalization."""
    assert sanitize_identifier("") == ""
    assert sanitize_identifier("Labour") == "Labour"
    assert sanitize_identifier("  Green   Party ") == "Green Party"


def test_validate_candidate_identifiers():
    """Test candidate list validation."""
    is_valid, errors = validate_candidate_identifiers(["Labour", "Conservative"])
    assert is_valid is True
    assert errors == []

    is_valid, errors = validate_candidate_identifiers(["Labour"])
    assert is_valid is False
    assert "at least 2" in errors[0]

    is_valid, errors = validate_candidate_identifiers(["Labour", "Labour"])
    assert is_valid is False
    assert "Duplicate" in errors[0]

    is_valid, errors = validate_candidate_identifiers(["Labour", ""])
    assert is_valid is False


def test_validate_security_parameter():
    """Test the k range check."""
    assert validate_security_parameter(16) == (True, [])
    assert validate_security_parameter(2048) == (True, [])

    is_valid, errors = validate_security_parameter(15)
    assert is_valid is False
    assert "at least 16" in errors[0]

    is_valid, errors = validate_security_parameter(4096)
    assert is_valid is False

    is_valid, errors = validate_security_parameter("32")
    assert is_valid is False


def test_validate_vote_index():
    assert validate_vote_index(0, 2)
    assert validate_vote_index(1, 2)
    assert not validate_vote_index(2, 2)
    assert not validate_vote_index(-1, 2)
    assert not validate_vote_index(True, 2)


def test_validate_bit():
    assert validate_bit(0) and validate_bit(1)
    assert not validate_bit(2)
    assert not validate_bit(False)
    assert not validate_bit("1")


class TestCandidateSet:
    """Test the candidate set model."""

    def test_indices_follow_list_order(self):
        candidates = CandidateSet(candidates=("Labour", "Conservative", "Green"))

        assert candidates.size == 3
        assert candidates.candidates[1] == "Conservative"
        assert list(candidates.indices()) == [0, 1, 2]

    def test_contains(self):
        candidates = CandidateSet.numbered(3)

        assert candidates.contains(2)
        assert not candidates.contains(3)
        assert not candidates.contains("0")

    def test_rejects_duplicates(self):
        with pytest.raises(ValidationError):
            CandidateSet(candidates=("a", "a"))

    def test_rejects_single_candidate(self):
        with pytest.raises(ValidationError):
            CandidateSet(candidates=("a",))

    def test_is_frozen(self):
        candidates = CandidateSet.numbered(2)
        with pytest.raises(ValidationError):
            candidates.candidates = ("x", "y")
