"""Unit tests for the scheme contract, ballot codec and dummy scheme."""

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ballotgames.models.core import Ballot, BulletinBoard, CandidateSet, Evidence, Outcome
from ballotgames.services.election import (
    DummyScheme,
    decode_ballot,
    encode_ballot,
    tally_plaintext,
)
from ballotgames.services.encoding import FieldReader, encode_field, encode_fields, encode_ints
from ballotgames.services.helios import HeliosScheme
from ballotgames.utils.error_handling import (
    DecodingError,
    MalformedEvidenceError,
    PreconditionError,
    UnsupportedParameterError,
)

ballots = st.builds(
    Ballot,
    scheme_tag=st.text(min_size=1, max_size=12),
    payload=st.binary(max_size=64),
)


class TestBallotCodec:
    """Test canonical ballot encoding."""

    def test_layout(self):
        ballot = Ballot(scheme_tag="dummy", payload=b"\x01\x02")

        assert encode_ballot(ballot) == b"\x00\x00\x00\x05dummy\x01\x02"

    @given(ballots)
    def test_decode_inverts_encode(self, ballot):
        assert decode_ballot(encode_ballot(ballot)) == ballot

    @given(ballots, ballots)
    def test_encoding_is_injective(self, first, second):
        if first != second:
            assert encode_ballot(first) != encode_ballot(second)

    def test_rejects_truncated_tag(self):
        with pytest.raises(DecodingError):
            decode_ballot(b"\x00\x00\x00\x09dum")

    def test_rejects_empty_tag(self):
        with pytest.raises(DecodingError):
            decode_ballot(b"\x00\x00\x00\x00payload")

    def test_payload_must_be_bytes(self):
        with pytest.raises(TypeError):
            Ballot(scheme_tag="dummy", payload="text")


class TestBulletinBoard:
    """Test set semantics under byte equality."""

    def test_duplicates_collapse(self):
        ballot = Ballot("dummy", b"\x00")
        board = BulletinBoard.of([ballot, Ballot("dummy", b"\x00")])

        assert len(board) == 1
        assert board.with_ballots(ballot) == board

    def test_membership_uses_bytes(self):
        board = BulletinBoard.of([Ballot("dummy", b"\x01")])

        assert Ballot("dummy", b"\x01") in board
        assert Ballot("dummy", b"\x02") not in board

    def test_equality_ignores_order(self):
        first, second = Ballot("a", b"1"), Ballot("a", b"2")

        assert BulletinBoard.of([first, second]) == BulletinBoard.of([second, first])


@pytest.mark.parametrize("scheme_class", [DummyScheme, HeliosScheme])
def test_setup_is_deterministic_in_the_seed(scheme_class):
    scheme = scheme_class(CandidateSet.numbered(2))

    assert scheme.setup(32, random.Random(9)) == scheme.setup(32, random.Random(9))


class TestDummyScheme:
    """Test the scheme without encryption."""

    def test_setup_has_empty_keys(self, dummy_scheme, rng):
        keys = dummy_scheme.setup(16, rng)

        assert keys.public_key == b""
        assert keys.secret_key == b""

    def test_setup_rejects_small_k(self, dummy_scheme, rng):
        with pytest.raises(UnsupportedParameterError):
            dummy_scheme.setup(8, rng)

    def test_vote_payload_is_the_index(self, dummy_scheme, rng):
        ballot = dummy_scheme.vote(b"", 2, 16, rng)

        assert ballot.scheme_tag == "dummy"
        assert FieldReader(ballot.payload).read_int() == 2
        assert dummy_scheme.open_ballot(b"", ballot) == 2

    @pytest.mark.parametrize("v", [3, -1, 10])
    def test_vote_out_of_range_is_bottom(self, dummy_scheme, rng, v):
        assert dummy_scheme.vote(b"", v, 16, rng) is None

    def test_empty_board_tallies_zero(self, dummy_scheme):
        evidence = dummy_scheme.partial_tally(b"", BulletinBoard(), 16)
        outcome = dummy_scheme.recover(BulletinBoard(), evidence, b"")

        assert outcome.as_vector(3) == (0, 0, 0)

    def test_ballots_for_the_same_vote_differ(self, dummy_scheme, rng):
        first = dummy_scheme.vote(b"", 1, 16, rng)
        second = dummy_scheme.vote(b"", 1, 16, rng)

        assert first != second
        assert len(BulletinBoard.of([first, second])) == 2

    def test_counts_match_example(self, rng):
        """Plaintext ballots {0, 1, 1} over 2 candidates give (1, 2)."""
        scheme = DummyScheme(CandidateSet.numbered(2))
        board = BulletinBoard.of([scheme.vote(b"", v, 16, rng) for v in (0, 1, 1)])

        evidence = scheme.partial_tally(b"", board, 16)

        assert evidence.payload == encode_ints([1, 2])
        assert scheme.recover(board, evidence, b"").as_vector(2) == (1, 2)

    def test_invalid_ballots_are_discarded(self, dummy_scheme):
        board = BulletinBoard.of([
            Ballot("dummy", encode_fields(1, 5)),
            Ballot("dummy", encode_fields(7, 5)),
            Ballot("dummy", encode_field(1)),
            Ballot("dummy", b"garbage"),
            Ballot("helios", encode_fields(0, 5)),
        ])
        outcome = dummy_scheme.recover(board, dummy_scheme.partial_tally(b"", board, 16), b"")

        assert outcome.as_vector(3) == (0, 1, 0)
        assert not dummy_scheme.is_well_formed(Ballot("dummy", b"garbage"))

    def test_recover_rejects_foreign_evidence(self, dummy_scheme):
        with pytest.raises(MalformedEvidenceError):
            dummy_scheme.recover(BulletinBoard(), Evidence("helios", encode_ints([0, 0, 0])), b"")

    def test_recover_rejects_malformed_evidence(self, dummy_scheme):
        with pytest.raises(MalformedEvidenceError):
            dummy_scheme.recover(BulletinBoard(), Evidence("dummy", b"\x00\x01"), b"")

    def test_recover_rejects_counts_above_board_size(self, dummy_scheme):
        with pytest.raises(MalformedEvidenceError):
            dummy_scheme.recover(BulletinBoard(), Evidence("dummy", encode_ints([1, 0, 0])), b"")

    def test_recover_reads_counts(self):
        """Evidence for counts (2, 1) gives {0: 2, 1: 1}."""
        scheme = DummyScheme(CandidateSet(candidates=("Labour", "Conservative")))
        board = BulletinBoard.of([Ballot("x", bytes([i])) for i in range(3)])

        outcome = scheme.recover(board, Evidence("dummy", encode_ints([2, 1])), b"")

        assert outcome == Outcome(counts={0: 2, 1: 1})

    def test_dummy_cannot_be_mauled(self, dummy_scheme, rng):
        ballot = dummy_scheme.vote(b"", 0, 16, rng)
        with pytest.raises(PreconditionError):
            dummy_scheme.maul(b"", ballot)


def test_correctness_against_plaintext_count():
    """Random elections over up to 5 candidates and 10 voters."""
    rng = random.Random(31)
    for _ in range(100):
        size = rng.randint(2, 5)
        scheme = DummyScheme(CandidateSet.numbered(size))
        keys = scheme.setup(16, rng)
        votes = [rng.randrange(size) for _ in range(rng.randint(0, 10))]
        board = BulletinBoard.of([scheme.vote(keys.public_key, v, 16, rng) for v in votes])

        outcome = scheme.recover(board, scheme.partial_tally(keys.secret_key, board, 16), keys.public_key)

        assert outcome.as_vector(size) == tally_plaintext(votes, size).as_vector(size)


def test_tally_plaintext():
    assert tally_plaintext([0, 1, 1], 3).as_vector(3) == (1, 2, 0)
