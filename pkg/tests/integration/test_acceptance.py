"""End-to-end experiments: baselines, the mauling attack, the reduction and the hardened verifier."""

import random

import pytest

from ballotgames.models.core import BulletinBoard, CandidateSet
from ballotgames.services.election import DummyScheme, tally_plaintext
from ballotgames.services.games import GameKind, run_trials, run_trials_detailed
from ballotgames.services.helios import HeliosScheme
from ballotgames.services.registry import AdversaryOptions, get_adversary

K = 32
ATTACK_TRIALS = 200


def factory_for(adversary: str, game: GameKind, known_ballots: int = 2):
    return get_adversary(adversary).bind(game, AdversaryOptions(known_ballots=known_ballots))


@pytest.fixture(scope="module")
def two_candidate_helios() -> HeliosScheme:
    return HeliosScheme(CandidateSet.numbered(2))


@pytest.fixture(scope="module")
def two_candidate_hardened() -> HeliosScheme:
    return HeliosScheme(CandidateSet.numbered(2), strict=True)


@pytest.mark.slow
@pytest.mark.parametrize("game", list(GameKind))
def test_null_adversary_guesses_at_chance(game):
    scheme = DummyScheme(CandidateSet.numbered(2))

    stats = run_trials(game, scheme, factory_for("null", game), 16, 1000, seed=0)

    assert 0.45 <= stats.rate <= 0.55
    assert stats.disqualified == 0
    assert stats.ci95_low < 0.5 < stats.ci95_high


@pytest.mark.slow
def test_mauling_breaks_non_malleability(two_candidate_helios):
    game = GameKind.NON_MALLEABILITY

    stats = run_trials(game, two_candidate_helios, factory_for("malleability", game), K, ATTACK_TRIALS, seed=1)

    assert stats.rate == 1.0
    assert stats.disqualified == 0


@pytest.mark.slow
def test_reduction_breaks_ballot_secrecy(two_candidate_helios):
    game = GameKind.BALLOT_SECRECY

    run = run_trials_detailed(game, two_candidate_helios, factory_for("reduction", game), K, ATTACK_TRIALS, seed=2)

    assert run.stats.rate == 1.0
    assert run.stats.disqualified == 0
    assert all(result.oracle_queries == 1 for result in run.results)


@pytest.mark.slow
@pytest.mark.parametrize("strict", [False, True])
def test_reduction_matches_non_malleability_trial_by_trial(strict):
    """Shared per-trial seeds give identical win/loss sequences in both games."""
    scheme = HeliosScheme(CandidateSet.numbered(2), strict=strict)

    nm = run_trials(
        GameKind.NON_MALLEABILITY, scheme,
        factory_for("malleability", GameKind.NON_MALLEABILITY), K, ATTACK_TRIALS, seed=3
    )
    bs = run_trials(
        GameKind.BALLOT_SECRECY, scheme,
        factory_for("reduction", GameKind.BALLOT_SECRECY), K, ATTACK_TRIALS, seed=3
    )

    assert bs.outcomes == nm.outcomes
    assert bs.rate == nm.rate


@pytest.mark.slow
def test_hardened_verifier_stops_the_attack(two_candidate_hardened):
    game = GameKind.NON_MALLEABILITY
    base = factory_for("malleability", game)
    built = []

    def recording_factory(scheme, rng):
        adversary = base(scheme, rng)
        built.append(adversary)
        return adversary

    stats = run_trials(game, two_candidate_hardened, recording_factory, K, 1000, seed=4)

    assert stats.rate <= 0.55
    assert len(built) == 1000
    assert not any(two_candidate_hardened.verify_ballot(a.pk, a.mauled) for a in built)


@pytest.mark.slow
def test_homomorphic_tally_matches_plaintext_count():
    rng = random.Random(5)
    for _ in range(100):
        size = rng.randint(2, 5)
        scheme = HeliosScheme(CandidateSet.numbered(size))
        keys = scheme.setup(K, rng)
        votes = [rng.randrange(size) for _ in range(rng.randint(0, 10))]
        board = BulletinBoard.of(scheme.vote(keys.public_key, v, K, rng) for v in votes)

        evidence = scheme.partial_tally(keys.secret_key, board, K)
        outcome = scheme.recover(board, evidence, keys.public_key)

        assert outcome.as_vector(size) == tally_plaintext(votes, size).as_vector(size)


def test_mauling_preserves_lenient_validity():
    scheme = HeliosScheme(CandidateSet.numbered(3))
    hardened = HeliosScheme(CandidateSet.numbered(3), strict=True)
    rng = random.Random(6)
    keys = scheme.setup(K, rng)

    for _ in range(200):
        ballot = scheme.vote(keys.public_key, rng.randrange(3), K, rng)
        mauled = scheme.maul(keys.public_key, ballot)

        assert scheme.verify_ballot(keys.public_key, mauled)
        assert not hardened.verify_ballot(keys.public_key, mauled)
        assert mauled.payload != ballot.payload
        assert scheme.open_ballot(keys.secret_key, mauled) == scheme.open_ballot(keys.secret_key, ballot)
