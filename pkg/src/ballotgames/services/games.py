"""
Ballot Secrecy and Non-Malleability games.

Each game owns its randomness stream, its hidden coin and its oracle state.
Disqualified games are losses; adversary faults abort the game as harness
errors and are never counted either way.
"""

import logging
import random
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, Iterable, List, Optional, Tuple, Union

from scipy.stats import binomtest

from ..models.core import Ballot, BulletinBoard, CandidateSet, Evidence, Outcome, Vote
from ..utils.error_handling import (
    AdversaryFaultError,
    BallotGamesError,
    ErrorCategory,
    InvalidVoteError,
    OracleClosedError,
    TrialFaultError,
    UnsupportedParameterError,
    error_handler,
)
from ..utils.monitoring import PerformanceTimer, TrialMonitor, performance_monitor
from ..utils.randomness import trial_streams
from ..utils.validation import validate_bit
from .election import ElectionScheme

logger = logging.getLogger(__name__)

CONFIDENCE_LEVEL = 0.95


class GameKind(str, Enum):
    """Security games the harness can play."""
    BALLOT_SECRECY = "ballot-secrecy"
    NON_MALLEABILITY = "non-malleability"


class DisqualificationReason(str, Enum):
    """Return-line conjuncts other than the guess."""
    INVALID_VOTE = "vote-outside-candidates"
    UNBALANCED = "unbalanced-board"
    CHALLENGE_ON_BOARD = "challenge-on-board"


@dataclass(frozen=True)
class ChallengeRecord:
    """One oracle answer: the ballot and the two votes it was asked for."""
    ballot: Ballot
    v0: Vote
    v1: Vote


@dataclass
class OracleState:
    """Hidden coin and the challenge records of one ballot-secrecy game."""
    pk: Any
    k: int
    beta: int
    challenges: List[ChallengeRecord] = field(default_factory=list)
    invalid_queries: int = 0

    def record(self, entry: ChallengeRecord) -> None:
        if entry not in self.challenges:
            self.challenges.append(entry)


def oracle_query(
    state: OracleState,
    v0: Vote,
    v1: Vote,
    scheme: ElectionScheme,
    rng: random.Random,
) -> Ballot:
    """
    Answer a challenge query with a ballot for the coin-selected vote and record it.

    Raises:
        InvalidVoteError: either vote is outside the candidate set
    """
    if not (scheme.candidates.contains(v0) and scheme.candidates.contains(v1)):
        state.invalid_queries += 1
        raise InvalidVoteError(
            f"Oracle queried with ({v0!r}, {v1!r}) outside {scheme.arity} candidates",
            votes=(v0, v1)
        )

    ballot = scheme.vote(state.pk, v1 if state.beta else v0, state.k, rng)
    if ballot is None:
        raise InvalidVoteError(f"Scheme rejected vote for ({v0}, {v1})", votes=(v0, v1))
    state.record(ChallengeRecord(ballot=ballot, v0=v0, v1=v1))
    return ballot


class ChallengeOracle:
    """Oracle handle given to a ballot-secrecy adversary while it builds its board."""

    def __init__(self, state: OracleState, scheme: ElectionScheme, rng: random.Random):
        self._state = state
        self._scheme = scheme
        self._rng = rng
        self._open = True
        self.queries = 0

    @property
    def candidates(self) -> CandidateSet:
        return self._scheme.candidates

    def close(self) -> None:
        self._open = False

    def __call__(self, v0: Vote, v1: Vote) -> Ballot:
        if not self._open:
            raise OracleClosedError("The challenge oracle only answers while the board is built")
        self.queries += 1
        return oracle_query(self._state, v0, v1, self._scheme, self._rng)


def balanced(bb: BulletinBoard, candidates: CandidateSet, challenges: Iterable[ChallengeRecord]) -> bool:
    """
    True iff, for every candidate v, the board holds as many challenge
    ballots asked with v on the left as with v on the right.
    """
    on_board = [entry for entry in challenges if entry.ballot in bb]
    for v in candidates.indices():
        left = {entry.ballot for entry in on_board if entry.v0 == v}
        right = {entry.ballot for entry in on_board if entry.v1 == v}
        if len(left) != len(right):
            return False
    return True


@dataclass(frozen=True)
class GameResult:
    """Outcome of one game."""
    won: bool
    disqualified: Optional[DisqualificationReason]
    beta: int
    guess: Optional[int]
    oracle_queries: int = 0
    board: BulletinBoard = field(default_factory=BulletinBoard)

    @property
    def is_disqualified(self) -> bool:
        return self.disqualified is not None


class BallotSecrecyAdversary(ABC):
    """Stateful two-stage adversary against ballot secrecy."""

    name = "ballot-secrecy-adversary"

    @abstractmethod
    def stage_board(self, pk: Any, k: int, oracle: ChallengeOracle) -> BulletinBoard:
        """Build the bulletin board, with oracle access."""

    @abstractmethod
    def stage_guess(self, bb: BulletinBoard, evidence: Evidence) -> int:
        """Guess the hidden bit from the board and the tally evidence."""


class NonMalleabilityAdversary(ABC):
    """Stateful three-stage adversary against non-malleability."""

    name = "non-malleability-adversary"

    @abstractmethod
    def stage_votes(self, pk: Any, k: int) -> Tuple[Vote, Vote]:
        """Pick the two challenge votes."""

    @abstractmethod
    def stage_board(self, challenge: Ballot) -> BulletinBoard:
        """Build the bulletin board after seeing the challenge ballot."""

    @abstractmethod
    def stage_guess(self, outcome: Outcome) -> int:
        """Guess the hidden bit from the election outcome."""


Adversary = Union[BallotSecrecyAdversary, NonMalleabilityAdversary]
AdversaryFactory = Callable[[ElectionScheme, random.Random], Adversary]


def _call_stage(adversary: Adversary, stage: str, func: Callable[..., Any], *args: Any) -> Any:
    """Run an adversary stage, turning anything it raises into a fault."""
    try:
        return func(*args)
    except (InvalidVoteError, AdversaryFaultError):
        raise
    except Exception as e:
        raise AdversaryFaultError(
            f"Adversary '{adversary.name}' failed in stage '{stage}': {e}",
            adversary=adversary.name,
            stage=stage
        ) from e


def _expect_board(adversary: Adversary, board: Any) -> BulletinBoard:
    if not isinstance(board, BulletinBoard):
        raise AdversaryFaultError(
            f"Adversary '{adversary.name}' returned {type(board).__name__} instead of a board",
            adversary=adversary.name,
            stage="board"
        )
    return board


def _expect_bit(adversary: Adversary, guess: Any) -> int:
    if not validate_bit(guess):
        raise AdversaryFaultError(
            f"Adversary '{adversary.name}' guessed {guess!r}, which is not a bit",
            adversary=adversary.name,
            stage="guess"
        )
    return int(guess)


def play_ballot_secrecy(
    scheme: ElectionScheme,
    adversary: BallotSecrecyAdversary,
    k: int,
    rng: random.Random,
) -> GameResult:
    """
    Play one Ballot Secrecy game.

    Setup, coin flip, board with oracle access, Partial-Tally, guess. The
    adversary wins iff its guess is the coin, the board is balanced and
    every oracle query named two candidates.

    Raises:
        AdversaryFaultError: the adversary raised or returned malformed output
    """
    keys = scheme.setup(k, rng)
    beta = rng.randrange(2)
    state = OracleState(pk=keys.public_key, k=k, beta=beta)
    oracle = ChallengeOracle(state, scheme, rng)

    try:
        board = _expect_board(
            adversary, _call_stage(adversary, "board", adversary.stage_board, keys.public_key, k, oracle)
        )
    except InvalidVoteError:
        return GameResult(
            won=False,
            disqualified=DisqualificationReason.INVALID_VOTE,
            beta=beta,
            guess=None,
            oracle_queries=oracle.queries,
        )
    finally:
        oracle.close()

    evidence = scheme.partial_tally(keys.secret_key, board, k)
    guess = _expect_bit(
        adversary, _call_stage(adversary, "guess", adversary.stage_guess, board, evidence)
    )

    disqualified = None
    if state.invalid_queries:
        disqualified = DisqualificationReason.INVALID_VOTE
    elif not balanced(board, scheme.candidates, state.challenges):
        disqualified = DisqualificationReason.UNBALANCED

    return GameResult(
        won=disqualified is None and guess == beta,
        disqualified=disqualified,
        beta=beta,
        guess=guess,
        oracle_queries=oracle.queries,
        board=board,
    )


def play_non_malleability(
    scheme: ElectionScheme,
    adversary: NonMalleabilityAdversary,
    k: int,
    rng: random.Random,
) -> GameResult:
    """
    Play one Non-Malleability game.

    Setup, coin flip, challenge votes, challenge ballot, board, Partial-Tally,
    Recover, guess. The adversary sees only the outcome when guessing. It
    wins iff its guess is the coin, the challenge ballot is not on the board
    and both challenge votes are candidates.

    Raises:
        AdversaryFaultError: the adversary raised or returned malformed output
    """
    keys = scheme.setup(k, rng)
    beta = rng.randrange(2)

    votes = _call_stage(adversary, "votes", adversary.stage_votes, keys.public_key, k)
    if not (isinstance(votes, tuple) and len(votes) == 2):
        raise AdversaryFaultError(
            f"Adversary '{adversary.name}' returned {votes!r} instead of two votes",
            adversary=adversary.name,
            stage="votes"
        )
    v0, v1 = votes
    if not (scheme.candidates.contains(v0) and scheme.candidates.contains(v1)):
        return GameResult(
            won=False,
            disqualified=DisqualificationReason.INVALID_VOTE,
            beta=beta,
            guess=None,
            oracle_queries=0,
        )

    challenge = scheme.vote(keys.public_key, v1 if beta else v0, k, rng)
    if challenge is None:
        raise InvalidVoteError(f"Scheme rejected challenge vote ({v0}, {v1})", votes=(v0, v1))

    board = _expect_board(adversary, _call_stage(adversary, "board", adversary.stage_board, challenge))
    evidence = scheme.partial_tally(keys.secret_key, board, k)
    outcome = scheme.recover(board, evidence, keys.public_key)
    guess = _expect_bit(adversary, _call_stage(adversary, "guess", adversary.stage_guess, outcome))

    disqualified = DisqualificationReason.CHALLENGE_ON_BOARD if challenge in board else None
    return GameResult(
        won=disqualified is None and guess == beta,
        disqualified=disqualified,
        beta=beta,
        guess=guess,
        oracle_queries=1,
        board=board,
    )


def play_game(
    game: GameKind,
    scheme: ElectionScheme,
    adversary: Adversary,
    k: int,
    rng: random.Random,
) -> GameResult:
    """Dispatch to the game named by ``game``."""
    if game == GameKind.BALLOT_SECRECY:
        if not isinstance(adversary, BallotSecrecyAdversary):
            raise AdversaryFaultError(
                f"Adversary '{adversary.name}' cannot play ballot secrecy",
                adversary=adversary.name
            )
        return play_ballot_secrecy(scheme, adversary, k, rng)

    if not isinstance(adversary, NonMalleabilityAdversary):
        raise AdversaryFaultError(
            f"Adversary '{adversary.name}' cannot play non-malleability",
            adversary=adversary.name
        )
    return play_non_malleability(scheme, adversary, k, rng)


def wilson_interval(wins: int, trials: int) -> Tuple[float, float]:
    """Wilson 95% interval for a binomial success rate."""
    interval = binomtest(wins, trials).proportion_ci(
        confidence_level=CONFIDENCE_LEVEL, method="wilson"
    )
    return max(0.0, float(interval.low)), min(1.0, float(interval.high))


@dataclass(frozen=True)
class TrialStats:
    """Empirical success rate over a run of independent games."""
    trials: int
    wins: int
    ci95_low: float
    ci95_high: float
    disqualified: int = 0
    disqualifications: Dict[str, int] = field(default_factory=dict)
    outcomes: Tuple[bool, ...] = ()

    def __post_init__(self) -> None:
        if self.trials < 1 or not 0 <= self.wins <= self.trials:
            raise ValueError(f"Invalid trial counts: {self.wins}/{self.trials}")

    @property
    def rate(self) -> float:
        return self.wins / self.trials

    @classmethod
    def from_results(cls, results: List[GameResult]) -> "TrialStats":
        wins = sum(1 for result in results if result.won)
        reasons: Dict[str, int] = {}
        for result in results:
            if result.disqualified is not None:
                reasons[result.disqualified.value] = reasons.get(result.disqualified.value, 0) + 1

        low, high = wilson_interval(wins, len(results))
        rate = wins / len(results)
        return cls(
            trials=len(results),
            wins=wins,
            ci95_low=min(low, rate),
            ci95_high=max(high, rate),
            disqualified=sum(reasons.values()),
            disqualifications=reasons,
            outcomes=tuple(result.won for result in results),
        )


@dataclass
class TrialRun:
    """Stats of a run together with the individual game results."""
    stats: TrialStats
    results: List[GameResult]
    summary: Dict[str, Any]


@performance_monitor("run_trials", "games")
@error_handler(ErrorCategory.GAME, "run_trials", "games")
def run_trials_detailed(
    game: GameKind,
    scheme: ElectionScheme,
    factory: AdversaryFactory,
    k: int,
    n: int,
    seed: int,
    label: str = "",
) -> TrialRun:
    """
    Play ``n`` independent games and keep every result.

    Trial i draws its game stream and adversary stream from (seed, i), and a
    fresh adversary is built for it.

    Raises:
        TrialFaultError: a trial faulted; no partial statistics are returned
    """
    if n < 1:
        raise ValueError("At least one trial is required")

    monitor = TrialMonitor(label=label or f"{game.value}/{scheme.name}")
    results: List[GameResult] = []

    for index in range(n):
        game_rng, adversary_rng = trial_streams(seed, index)
        timer = PerformanceTimer("play_game", "games")
        try:
            with timer:
                adversary = factory(scheme, adversary_rng)
                result = play_game(game, scheme, adversary, k, game_rng)
        except UnsupportedParameterError:
            raise
        except BallotGamesError as e:
            monitor.record_fault()
            raise TrialFaultError(f"Trial {index} faulted: {e.message}", trial=index) from e
        except Exception as e:
            monitor.record_fault()
            raise TrialFaultError(f"Trial {index} faulted: {e}", trial=index) from e

        monitor.record_game(
            result.won,
            result.disqualified.value if result.disqualified else None,
            timer.duration,
        )
        results.append(result)

    summary = monitor.get_summary()
    logger.info(
        f"Finished {n} trials: {summary['wins']} wins",
        extra={"seed": seed, "k": k, **summary}
    )
    return TrialRun(stats=TrialStats.from_results(results), results=results, summary=summary)


def run_trials(
    game: GameKind,
    scheme: ElectionScheme,
    factory: AdversaryFactory,
    k: int,
    n: int,
    seed: int,
) -> TrialStats:
    """Estimate the adversary's success rate over ``n`` games."""
    return run_trials_detailed(game, scheme, factory, k, n, seed).stats
