"""Core data models for election schemes."""

from dataclasses import dataclass, field
from typing import Dict, Generic, Iterable, Iterator, Tuple, TypeVar

from pydantic import BaseModel, ConfigDict, field_validator

from ..utils.validation import (
    MAX_SECURITY_PARAMETER,
    MIN_SECURITY_PARAMETER,
    sanitize_identifier,
    validate_candidate_identifiers,
    validate_vote_index,
)

PK = TypeVar("PK")
SK = TypeVar("SK")

# A vote is the index of a candidate in the CandidateSet in force.
Vote = int

DEFAULT_DEMO_SECURITY_PARAMETER = 64
DEFAULT_CI_SECURITY_PARAMETER = 32

__all__ = [
    "Ballot",
    "BulletinBoard",
    "CandidateSet",
    "DEFAULT_CI_SECURITY_PARAMETER",
    "DEFAULT_DEMO_SECURITY_PARAMETER",
    "Evidence",
    "KeyPair",
    "MAX_SECURITY_PARAMETER",
    "MIN_SECURITY_PARAMETER",
    "Outcome",
    "Vote",
]


class CandidateSet(BaseModel):
    """Ordered candidates; list position is the candidate index."""
    model_config = ConfigDict(frozen=True)

    candidates: Tuple[str, ...]

    @field_validator('candidates')
    @classmethod
    def validate_candidates(cls, v):
        """Validate and normalize candidate identifiers."""
        sanitized = tuple(sanitize_identifier(name) for name in v)
        is_valid, errors = validate_candidate_identifiers(sanitized)
        if not is_valid:
            raise ValueError(f"Invalid candidate set: {'; '.join(errors)}")
        return sanitized

    @classmethod
    def numbered(cls, size: int) -> "CandidateSet":
        """Candidate set with generated identifiers candidate-0 .. candidate-(m-1)."""
        return cls(candidates=tuple(f"candidate-{i}" for i in range(size)))

    @property
    def size(self) -> int:
        return len(self.candidates)

    def contains(self, v: object) -> bool:
        return validate_vote_index(v, self.size)  # type: ignore[arg-type]

    def indices(self) -> range:
        return range(self.size)


@dataclass(frozen=True)
class Ballot:
    """Scheme-tagged canonical payload. Equality is byte equality."""
    scheme_tag: str
    payload: bytes

    def __post_init__(self) -> None:
        if not isinstance(self.payload, bytes):
            raise TypeError("Ballot payload must be bytes")


@dataclass(frozen=True, eq=False)
class BulletinBoard:
    """Finite set of ballots; iteration follows first insertion."""
    ballots: Tuple[Ballot, ...] = ()

    def __post_init__(self) -> None:
        unique = tuple(dict.fromkeys(self.ballots))
        object.__setattr__(self, "ballots", unique)

    @classmethod
    def of(cls, ballots: Iterable[Ballot]) -> "BulletinBoard":
        return cls(tuple(ballots))

    def with_ballots(self, *ballots: Ballot) -> "BulletinBoard":
        return BulletinBoard(self.ballots + ballots)

    def __contains__(self, ballot: object) -> bool:
        return ballot in self.ballots

    def __iter__(self) -> Iterator[Ballot]:
        return iter(self.ballots)

    def __len__(self) -> int:
        return len(self.ballots)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BulletinBoard):
            return NotImplemented
        return frozenset(self.ballots) == frozenset(other.ballots)

    def __hash__(self) -> int:
        return hash(frozenset(self.ballots))


@dataclass(frozen=True)
class Evidence:
    """Opaque partial-tally output; only the producing scheme can read it."""
    scheme_tag: str
    payload: bytes


@dataclass(frozen=True)
class Outcome:
    """Election outcome: candidate index to tally."""
    counts: Dict[Vote, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for candidate, count in self.counts.items():
            if candidate < 0 or count < 0:
                raise ValueError(f"Invalid outcome entry {candidate}: {count}")

    @classmethod
    def from_vector(cls, vector: Iterable[int]) -> "Outcome":
        return cls(counts={i: count for i, count in enumerate(vector)})

    def count(self, v: Vote) -> int:
        return self.counts.get(v, 0)

    def as_vector(self, size: int) -> Tuple[int, ...]:
        return tuple(self.count(v) for v in range(size))

    @property
    def total(self) -> int:
        return sum(self.counts.values())


@dataclass(frozen=True)
class KeyPair(Generic[PK, SK]):
    """Public and secret key material produced by Setup."""
    public_key: PK
    secret_key: SK

