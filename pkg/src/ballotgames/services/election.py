"""
Election scheme contract, canonical ballot codec and the dummy scheme.

A scheme is the four algorithms Setup, Vote, Partial-Tally and Recover,
bound to the candidate set it serves. Vote returns None for a vote outside
the candidate set; that is an ordinary result, not a fault.
"""

import logging
import random
from abc import ABC, abstractmethod
from typing import Any, Iterable, List, Optional

from ..models.core import (
    Ballot,
    BulletinBoard,
    CandidateSet,
    Evidence,
    KeyPair,
    Outcome,
    Vote,
)
from ..utils.error_handling import (
    DecodingError,
    MalformedEvidenceError,
    PreconditionError,
    UnsupportedParameterError,
)
from ..utils.validation import MIN_SECURITY_PARAMETER, validate_security_parameter
from .encoding import FieldReader, decode_ints, encode_field, encode_fields, encode_ints

logger = logging.getLogger(__name__)

DUMMY_SERIAL_BITS = 64


def encode_ballot(ballot: Ballot) -> bytes:
    """Scheme tag as a length-prefixed UTF-8 field, then the payload."""
    return encode_field(ballot.scheme_tag) + ballot.payload


def decode_ballot(data: bytes) -> Ballot:
    """Inverse of encode_ballot.

    Raises:
        DecodingError: the tag field is missing, truncated or not UTF-8
    """
    reader = FieldReader(data)
    scheme_tag = reader.read_str()
    if not scheme_tag:
        raise DecodingError("Ballot has an empty scheme tag")
    return Ballot(scheme_tag=scheme_tag, payload=reader.remaining())


def check_security_parameter(k: int, scheme: str, floor: int = MIN_SECURITY_PARAMETER) -> None:
    is_valid, errors = validate_security_parameter(k, floor=floor)
    if not is_valid:
        raise UnsupportedParameterError(
            f"Scheme '{scheme}' does not support k={k}: {'; '.join(errors)}",
            k=k
        )


def tally_plaintext(votes: Iterable[Vote], size: int) -> Outcome:
    """Direct count of plaintext votes; the reference every scheme must match."""
    counts = [0] * size
    for v in votes:
        counts[v] += 1
    return Outcome.from_vector(counts)


class ElectionScheme(ABC):
    """Setup, Vote, Partial-Tally and Recover over a fixed candidate set."""

    scheme_tag: str = ""
    name: str = ""
    supports_mauling: bool = False

    def __init__(self, candidates: CandidateSet):
        self.candidates = candidates

    @property
    def arity(self) -> int:
        return self.candidates.size

    @abstractmethod
    def setup(self, k: int, rng: random.Random) -> KeyPair:
        """Generate the key pair for security parameter k."""

    @abstractmethod
    def vote(self, pk: Any, v: Vote, k: int, rng: random.Random) -> Optional[Ballot]:
        """Build a ballot for v, or None if v is not a candidate index."""

    @abstractmethod
    def partial_tally(self, sk: Any, bb: BulletinBoard, k: int) -> Evidence:
        """Tally the valid ballots on bb; invalid ones contribute nothing."""

    @abstractmethod
    def recover(self, bb: BulletinBoard, e: Evidence, pk: Any) -> Outcome:
        """Read the election outcome off the evidence."""

    @abstractmethod
    def open_ballot(self, sk: Any, ballot: Ballot) -> Optional[Vote]:
        """Read the vote inside a single ballot, None if it holds no valid vote."""

    @abstractmethod
    def is_well_formed(self, ballot: Ballot) -> bool:
        """Whether the ballot decodes structurally under this scheme."""

    def maul(self, pk: Any, ballot: Ballot, choice: Any = None) -> Ballot:
        """Derive a distinct valid ballot for the same vote."""
        raise PreconditionError(
            f"Scheme '{self.name}' has no mauling transformation",
            operation="maul"
        )

    def _evidence_vector(self, e: Evidence) -> List[int]:
        if e.scheme_tag != self.scheme_tag:
            raise MalformedEvidenceError(
                f"Evidence was produced by '{e.scheme_tag}', not '{self.scheme_tag}'",
                scheme=self.name
            )
        try:
            return decode_ints(e.payload, self.arity)
        except DecodingError as exc:
            raise MalformedEvidenceError(
                f"Evidence does not decode as {self.arity} counts: {exc.message}",
                scheme=self.name
            ) from exc

    def _outcome_from_vector(self, bb: BulletinBoard, vector: List[int]) -> Outcome:
        outcome = Outcome.from_vector(vector)
        if outcome.total > len(bb):
            raise MalformedEvidenceError(
                f"Evidence counts {outcome.total} votes on a board of {len(bb)} ballots",
                scheme=self.name
            )
        return outcome

    def __repr__(self) -> str:
        return f"{type(self).__name__}(candidates={self.arity})"


class DummyScheme(ElectionScheme):
    """
    Baseline scheme with no encryption.

    The payload is the candidate index in the clear followed by a random
    serial, so two ballots for the same candidate are distinct board entries.
    Evidence is the plaintext count vector.
    """

    scheme_tag = "dummy"
    name = "dummy"

    def setup(self, k: int, rng: random.Random) -> KeyPair:
        check_security_parameter(k, self.name)
        return KeyPair(public_key=b"", secret_key=b"")

    def vote(self, pk: Any, v: Vote, k: int, rng: random.Random) -> Optional[Ballot]:
        if not self.candidates.contains(v):
            return None
        serial = rng.getrandbits(DUMMY_SERIAL_BITS)
        return Ballot(scheme_tag=self.scheme_tag, payload=encode_fields(v, serial))

    def _read_vote(self, ballot: Ballot) -> Optional[Vote]:
        if ballot.scheme_tag != self.scheme_tag:
            return None
        try:
            v, _ = decode_ints(ballot.payload, 2)
        except DecodingError:
            return None
        return v if self.candidates.contains(v) else None

    def is_well_formed(self, ballot: Ballot) -> bool:
        return self._read_vote(ballot) is not None

    def open_ballot(self, sk: Any, ballot: Ballot) -> Optional[Vote]:
        return self._read_vote(ballot)

    def partial_tally(self, sk: Any, bb: BulletinBoard, k: int) -> Evidence:
        counts = [0] * self.arity
        discarded = 0
        for ballot in bb:
            v = self._read_vote(ballot)
            if v is None:
                discarded += 1
                continue
            counts[v] += 1

        if discarded:
            logger.debug(
                f"Discarded {discarded} invalid ballots",
                extra={"scheme": self.name, "discarded": discarded, "board_size": len(bb)}
            )
        return Evidence(scheme_tag=self.scheme_tag, payload=encode_ints(counts))

    def recover(self, bb: BulletinBoard, e: Evidence, pk: Any) -> Outcome:
        return self._outcome_from_vector(bb, self._evidence_vector(e))
