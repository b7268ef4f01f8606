"""
Concrete adversaries.

The null adversaries are the coin-flip baseline. The malleability adversary
mauls the challenge ballot and reads the hidden bit off the outcome. The
reduction turns any non-malleability adversary into a ballot-secrecy one
with a single oracle query. Replay and unbalanced adversaries always guess
right and are always disqualified, which is what the game conditions are for.
"""

import logging
import random
from typing import Any, List, Optional, Sequence, Tuple

from ..models.core import Ballot, BulletinBoard, Evidence, Outcome, Vote
from ..models.crypto import DisjunctChoice
from ..utils.error_handling import PreconditionError
from .election import ElectionScheme
from .games import BallotSecrecyAdversary, ChallengeOracle, NonMalleabilityAdversary

logger = logging.getLogger(__name__)

DEFAULT_KNOWN_BALLOTS = 2
CHALLENGE_VOTES: Tuple[Vote, Vote] = (0, 1)

KnownBallot = Tuple[Ballot, Vote]


def known_votes(v0: Vote, v1: Vote, count: int) -> List[Vote]:
    """v0, v1, v0, ... of the requested length."""
    return [v0 if i % 2 == 0 else v1 for i in range(count)]


def cast_known_ballots(
    scheme: ElectionScheme,
    pk: Any,
    k: int,
    votes: Sequence[Vote],
    rng: random.Random,
) -> List[KnownBallot]:
    """Honest ballots whose votes the adversary knows."""
    known = []
    for v in votes:
        ballot = scheme.vote(pk, v, k, rng)
        if ballot is None:
            raise PreconditionError(f"Cannot cast a known ballot for {v}", operation="cast_known_ballots")
        known.append((ballot, v))
    return known


def residual_guess(
    outcome: Outcome,
    known: Sequence[KnownBallot],
    v0: Vote,
    v1: Vote,
    rng: random.Random,
) -> int:
    """
    Subtract the known votes from the outcome and read the bit off what is left.

    A residual on v0 alone means 0, on v1 alone means 1. Anything else carries
    no information and gets a uniform guess.
    """
    residual = {v: outcome.count(v) for v in (v0, v1)}
    for _, v in known:
        if v in residual:
            residual[v] -= 1

    if residual[v0] > 0 and residual[v1] <= 0:
        return 0
    if residual[v1] > 0 and residual[v0] <= 0:
        return 1
    return rng.randrange(2)


class NullAdversary:
    """Ignores every input and always outputs ``fixed_guess``."""

    name = "null"

    def __init__(self, fixed_guess: int = 1):
        if fixed_guess not in (0, 1):
            raise ValueError("fixed_guess must be 0 or 1")
        self.fixed_guess = fixed_guess


class NullBallotSecrecyAdversary(NullAdversary, BallotSecrecyAdversary):
    def stage_board(self, pk: Any, k: int, oracle: ChallengeOracle) -> BulletinBoard:
        return BulletinBoard()

    def stage_guess(self, bb: BulletinBoard, evidence: Evidence) -> int:
        return self.fixed_guess


class NullNonMalleabilityAdversary(NullAdversary, NonMalleabilityAdversary):
    def stage_votes(self, pk: Any, k: int) -> Tuple[Vote, Vote]:
        return CHALLENGE_VOTES

    def stage_board(self, challenge: Ballot) -> BulletinBoard:
        return BulletinBoard()

    def stage_guess(self, outcome: Outcome) -> int:
        return self.fixed_guess


class MalleabilityAdversary(NonMalleabilityAdversary):
    """
    Mauls the challenge ballot and places the copy on the board next to
    ballots it cast itself, then subtracts its own votes from the outcome.

    Args:
        scheme: Scheme under attack; must support mauling
        rng: Adversary randomness
        known_ballots: Number of honestly cast ballots with known votes
        choice: Which proof response to maul
    """

    name = "malleability"

    def __init__(
        self,
        scheme: ElectionScheme,
        rng: random.Random,
        known_ballots: int = DEFAULT_KNOWN_BALLOTS,
        choice: Optional[DisjunctChoice] = None,
    ):
        if known_ballots < 0:
            raise ValueError("known_ballots must be non-negative")
        self.scheme = scheme
        self.rng = rng
        self.known_ballots = known_ballots
        self.choice = choice or DisjunctChoice()
        self.v0, self.v1 = CHALLENGE_VOTES
        self.pk: Any = None
        self.k = 0
        self.known: List[KnownBallot] = []
        self.mauled: Optional[Ballot] = None

    def stage_votes(self, pk: Any, k: int) -> Tuple[Vote, Vote]:
        self.pk, self.k = pk, k
        return self.v0, self.v1

    def stage_board(self, challenge: Ballot) -> BulletinBoard:
        self.mauled = self.scheme.maul(self.pk, challenge, self.choice)
        self.known = cast_known_ballots(
            self.scheme, self.pk, self.k,
            known_votes(self.v0, self.v1, self.known_ballots), self.rng
        )
        return BulletinBoard.of([self.mauled] + [ballot for ballot, _ in self.known])

    def stage_guess(self, outcome: Outcome) -> int:
        return residual_guess(outcome, self.known, self.v0, self.v1, self.rng)


class ReplayAdversary(NonMalleabilityAdversary):
    """Puts the challenge ballot itself on the board; always disqualified."""

    name = "replay"

    def __init__(
        self,
        scheme: ElectionScheme,
        rng: random.Random,
        known_ballots: int = DEFAULT_KNOWN_BALLOTS,
    ):
        self.scheme = scheme
        self.rng = rng
        self.known_ballots = known_ballots
        self.v0, self.v1 = CHALLENGE_VOTES
        self.pk: Any = None
        self.k = 0
        self.known: List[KnownBallot] = []

    def stage_votes(self, pk: Any, k: int) -> Tuple[Vote, Vote]:
        self.pk, self.k = pk, k
        return self.v0, self.v1

    def stage_board(self, challenge: Ballot) -> BulletinBoard:
        cast = cast_known_ballots(
            self.scheme, self.pk, self.k,
            known_votes(self.v0, self.v1, self.known_ballots), self.rng
        )
        # A known ballot byte-equal to the challenge collapses into it on the board.
        self.known = [(ballot, v) for ballot, v in cast if ballot != challenge]
        return BulletinBoard.of([challenge] + [ballot for ballot, _ in cast])

    def stage_guess(self, outcome: Outcome) -> int:
        return residual_guess(outcome, self.known, self.v0, self.v1, self.rng)


class UnbalancedAdversary(BallotSecrecyAdversary):
    """
    Casts one known ballot for each challenge vote, adds the single challenge
    ballot and reads the coin off the tally surplus. The board is unbalanced.
    """

    name = "unbalanced"

    def __init__(self, scheme: ElectionScheme, rng: random.Random):
        self.scheme = scheme
        self.rng = rng
        self.v0, self.v1 = CHALLENGE_VOTES
        self.pk: Any = None
        self.known: List[KnownBallot] = []

    def stage_board(self, pk: Any, k: int, oracle: ChallengeOracle) -> BulletinBoard:
        self.pk = pk
        cast = cast_known_ballots(self.scheme, pk, k, (self.v0, self.v1), self.rng)
        challenge = oracle(self.v0, self.v1)
        self.known = [(ballot, v) for ballot, v in cast if ballot != challenge]
        return BulletinBoard.of(ballot for ballot, _ in cast).with_ballots(challenge)

    def stage_guess(self, bb: BulletinBoard, evidence: Evidence) -> int:
        outcome = self.scheme.recover(bb, evidence, self.pk)
        return residual_guess(outcome, self.known, self.v0, self.v1, self.rng)


class ReductionAdversary(BallotSecrecyAdversary):
    """
    Ballot-secrecy adversary built from a non-malleability adversary.

    It plays the challenger for ``inner``: the inner adversary's two votes
    become the single oracle query, the oracle's ballot becomes the inner
    challenge, and the inner guess is made on the outcome recovered from
    the evidence. The board never holds an oracle ballot unless the inner
    adversary copies it.
    """

    def __init__(self, inner: NonMalleabilityAdversary, scheme: ElectionScheme):
        self.inner = inner
        self.scheme = scheme
        self.name = f"reduction({inner.name})"
        self.pk: Any = None
        self.k = 0
        self.votes: Optional[Tuple[Vote, Vote]] = None
        self.queries = 0

    def stage_board(self, pk: Any, k: int, oracle: ChallengeOracle) -> BulletinBoard:
        self.pk, self.k = pk, k
        # Kept for bookkeeping; the ballot-secrecy game never reads them.
        self.votes = self.inner.stage_votes(pk, k)
        v0, v1 = self.votes
        challenge = oracle(v0, v1)
        self.queries += 1
        return self.inner.stage_board(challenge)

    def stage_guess(self, bb: BulletinBoard, evidence: Evidence) -> int:
        outcome = self.scheme.recover(bb, evidence, self.pk)
        return self.inner.stage_guess(outcome)


def build_reduction(inner: NonMalleabilityAdversary, scheme: ElectionScheme) -> ReductionAdversary:
    """Wrap a non-malleability adversary as a ballot-secrecy adversary."""
    return ReductionAdversary(inner, scheme)
