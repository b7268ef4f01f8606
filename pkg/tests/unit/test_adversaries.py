"""Unit tests for the concrete adversaries."""

import random

import pytest

from ballotgames.models.core import Ballot, BulletinBoard, Outcome
from ballotgames.models.crypto import DisjunctChoice
from ballotgames.services.adversaries import (
    MalleabilityAdversary,
    NullBallotSecrecyAdversary,
    NullNonMalleabilityAdversary,
    ReplayAdversary,
    build_reduction,
    cast_known_ballots,
    known_votes,
    residual_guess,
)
from ballotgames.services.games import (
    DisqualificationReason,
    play_ballot_secrecy,
    play_non_malleability,
)
from ballotgames.utils.error_handling import PreconditionError

KNOWN = [(Ballot("t", b"0"), 0), (Ballot("t", b"1"), 1)]


class TestResidualGuess:
    """Test reading the hidden bit off an outcome."""

    def test_surplus_on_first_vote(self, rng):
        assert residual_guess(Outcome.from_vector([2, 1]), KNOWN, 0, 1, rng) == 0

    def test_surplus_on_second_vote(self, rng):
        assert residual_guess(Outcome.from_vector([1, 2]), KNOWN, 0, 1, rng) == 1

    def test_no_known_ballots(self, rng):
        assert residual_guess(Outcome.from_vector([0, 1, 0]), [], 0, 1, rng) == 1

    def test_no_surplus_is_a_coin_flip(self):
        guesses = {
            residual_guess(Outcome.from_vector([1, 1]), KNOWN, 0, 1, random.Random(seed))
            for seed in range(30)
        }

        assert guesses == {0, 1}


def test_known_votes_alternate():
    assert known_votes(0, 1, 0) == []
    assert known_votes(0, 1, 3) == [0, 1, 0]
    assert known_votes(2, 2, 2) == [2, 2]


def test_cast_known_ballots_rejects_non_candidates(dummy_scheme, rng):
    with pytest.raises(PreconditionError):
        cast_known_ballots(dummy_scheme, b"", 16, [0, 9], rng)


def test_null_adversary_rejects_non_bit():
    with pytest.raises(ValueError):
        NullBallotSecrecyAdversary(fixed_guess=2)


class TestMalleabilityAdversary:
    """Test the mauling non-malleability adversary."""

    @pytest.mark.parametrize("known", [0, 1, 4])
    def test_board_size(self, helios_scheme, helios_keys, rng, known):
        adversary = MalleabilityAdversary(helios_scheme, random.Random(3), known_ballots=known)
        adversary.stage_votes(helios_keys.public_key, 32)
        challenge = helios_scheme.vote(helios_keys.public_key, 0, 32, rng)

        board = adversary.stage_board(challenge)

        assert len(board) == known + 1
        assert challenge not in board
        assert adversary.mauled in board

    def test_guesses_the_mauled_vote(self, helios_scheme, helios_keys, rng):
        pk, sk = helios_keys.public_key, helios_keys.secret_key
        for beta in (0, 1):
            adversary = MalleabilityAdversary(helios_scheme, random.Random(beta))
            v0, v1 = adversary.stage_votes(pk, 32)
            challenge = helios_scheme.vote(pk, v1 if beta else v0, 32, rng)
            board = adversary.stage_board(challenge)
            outcome = helios_scheme.recover(board, helios_scheme.partial_tally(sk, board, 32), pk)

            assert adversary.stage_guess(outcome) == beta

    def test_overall_proof_choice(self, helios_scheme):
        adversary = MalleabilityAdversary(helios_scheme, random.Random(1), choice=DisjunctChoice(overall=True))

        result = play_non_malleability(helios_scheme, adversary, 32, random.Random(1))

        assert result.won

    def test_hardened_scheme_discards_the_copy(self, hardened_scheme):
        adversary = MalleabilityAdversary(hardened_scheme, random.Random(2), known_ballots=2)

        result = play_non_malleability(hardened_scheme, adversary, 32, random.Random(2))

        assert not result.is_disqualified
        assert not hardened_scheme.verify_ballot(adversary.pk, adversary.mauled)

    def test_rejects_negative_known_ballots(self, helios_scheme, rng):
        with pytest.raises(ValueError):
            MalleabilityAdversary(helios_scheme, rng, known_ballots=-1)


class TestReplayAdversary:
    def test_board_holds_the_challenge(self, dummy_scheme, rng):
        adversary = ReplayAdversary(dummy_scheme, random.Random(0), known_ballots=2)
        adversary.stage_votes(b"", 16)
        challenge = dummy_scheme.vote(b"", 1, 16, rng)

        board = adversary.stage_board(challenge)

        assert challenge in board
        assert len(board) == 3
        assert len(adversary.known) == 2


class TestReduction:
    """Test the non-malleability to ballot-secrecy reduction."""

    def test_name(self, helios_scheme, rng):
        reduction = build_reduction(MalleabilityAdversary(helios_scheme, rng), helios_scheme)

        assert reduction.name == "reduction(malleability)"

    def test_single_query_and_no_oracle_ballot_on_board(self, helios_scheme):
        inner = MalleabilityAdversary(helios_scheme, random.Random(4))
        reduction = build_reduction(inner, helios_scheme)

        result = play_ballot_secrecy(helios_scheme, reduction, 32, random.Random(4))

        assert result.oracle_queries == 1
        assert reduction.queries == 1
        assert reduction.votes == (0, 1)
        assert result.disqualified is None
        assert result.won
        assert len(result.board) == 3

    def test_copied_challenge_unbalances_the_board(self, dummy_scheme):
        """A non-malleability adversary that replays the challenge is caught by the balance check."""
        reduction = build_reduction(ReplayAdversary(dummy_scheme, random.Random(5)), dummy_scheme)

        result = play_ballot_secrecy(dummy_scheme, reduction, 16, random.Random(5))

        assert result.disqualified is DisqualificationReason.UNBALANCED

    def test_null_inner_adversary(self, dummy_scheme):
        reduction = build_reduction(NullNonMalleabilityAdversary(0), dummy_scheme)

        result = play_ballot_secrecy(dummy_scheme, reduction, 16, random.Random(6))

        assert result.guess == 0
        assert result.board == BulletinBoard()
        assert result.disqualified is None
