"""
Helios-style homomorphic election scheme.

A ballot encrypts the unit vector of the chosen candidate, one exponential
El-Gamal ciphertext per candidate, with a 0-or-1 proof per ciphertext and an
overall proof that the ciphertext product encrypts exactly 1. The malleable
variant verifies proofs leniently; the hardened variant also range-checks
every proof response.
"""

import logging
import random
from typing import List, Optional, Union

from ..models.core import Ballot, BulletinBoard, CandidateSet, Evidence, KeyPair, Outcome, Vote
from ..models.crypto import (
    DisjunctChoice,
    DisjunctiveProof,
    ElGamalKeyPair,
    ElGamalPublicKey,
    GroupParams,
    HeliosBallot,
    HeliosEvidence,
    ProofBranch,
)
from ..utils.error_handling import DecodingError, PreconditionError, TallyError
from .election import ElectionScheme, check_security_parameter
from .encoding import FieldReader, encode_field, encode_ints
from .group_crypto import (
    decrypt_exponent,
    encode_ciphertext,
    encode_proof,
    encrypt,
    gen_group,
    keygen,
    proof_context,
    prove_bit,
    prove_disjunctive,
    random_coin,
    read_ciphertext,
    read_proof,
    sum_ciphertexts,
    validate_group,
    verify_disjunctive,
    verify_disjunctive_strict,
)

logger = logging.getLogger(__name__)

HELIOS_TAG = "helios"
DEFAULT_ELECTION_ID = "ballotgames-election"

# The overall proof admits a single value: one selection per ballot.
SELECTIONS_PER_BALLOT = (1,)


def individual_context(pk: ElGamalPublicKey, election_id: str, index: int) -> bytes:
    return proof_context(pk, election_id, f"individual/{index}")


def overall_context(pk: ElGamalPublicKey, election_id: str) -> bytes:
    return proof_context(pk, election_id, "overall")


def encode_helios_ballot(ballot: HeliosBallot) -> bytes:
    """Candidate count, ciphertexts, individual proofs, overall proof."""
    parts = [encode_field(ballot.size)]
    parts.extend(encode_ciphertext(c) for c in ballot.ciphertexts)
    parts.extend(encode_proof(proof) for proof in ballot.individual_proofs)
    parts.append(encode_proof(ballot.overall_proof))
    return b"".join(parts)


def decode_helios_ballot(payload: bytes) -> HeliosBallot:
    """
    Parse a Helios ballot payload.

    Raises:
        DecodingError: the payload is not a canonical Helios ballot
    """
    reader = FieldReader(payload)
    size = reader.read_int()
    if size == 0:
        raise DecodingError("Helios ballot with no ciphertexts")
    ciphertexts = tuple(read_ciphertext(reader) for _ in range(size))
    proofs = tuple(read_proof(reader) for _ in range(size))
    overall = read_proof(reader)
    reader.expect_end()
    return HeliosBallot(ciphertexts=ciphertexts, individual_proofs=proofs, overall_proof=overall)


def as_helios_ballot(ballot: Union[Ballot, HeliosBallot]) -> Optional[HeliosBallot]:
    """Structural view of a ballot, None if it is not a Helios ballot."""
    if isinstance(ballot, HeliosBallot):
        return ballot
    if ballot.scheme_tag != HELIOS_TAG:
        return None
    try:
        return decode_helios_ballot(ballot.payload)
    except DecodingError:
        return None


def to_ballot(ballot: HeliosBallot) -> Ballot:
    return Ballot(scheme_tag=HELIOS_TAG, payload=encode_helios_ballot(ballot))


def verify_helios_ballot(
    pk: ElGamalPublicKey,
    ballot: Union[Ballot, HeliosBallot],
    strict: bool = False,
    election_id: str = DEFAULT_ELECTION_ID,
    arity: Optional[int] = None,
) -> bool:
    """True iff the ballot decodes and every individual proof and the overall proof verify."""
    decoded = as_helios_ballot(ballot)
    if decoded is None:
        return False
    if arity is not None and decoded.size != arity:
        return False
    if len(decoded.individual_proofs) != decoded.size:
        return False

    verify = verify_disjunctive_strict if strict else verify_disjunctive
    for index, (c, proof) in enumerate(zip(decoded.ciphertexts, decoded.individual_proofs)):
        if not verify(pk, c, proof, individual_context(pk, election_id, index)):
            return False

    product = sum_ciphertexts(decoded.ciphertexts, pk.params.p)
    return verify(
        pk, product, decoded.overall_proof, overall_context(pk, election_id),
        values=SELECTIONS_PER_BALLOT
    )


def _bump_response(proof: DisjunctiveProof, branch: int, q: int) -> DisjunctiveProof:
    if not 0 <= branch < len(proof.branches):
        raise PreconditionError(
            f"Proof has {len(proof.branches)} branches, cannot maul branch {branch}",
            operation="maul_ballot"
        )
    target = proof.branches[branch]
    mauled = ProofBranch(
        commitment_a=target.commitment_a,
        commitment_b=target.commitment_b,
        challenge=target.challenge,
        response=target.response + q,
    )
    return proof.with_branch(branch, mauled)


def maul_ballot(
    pk: ElGamalPublicKey,
    ballot: HeliosBallot,
    choice: Optional[DisjunctChoice] = None,
    election_id: str = DEFAULT_ELECTION_ID,
) -> HeliosBallot:
    """
    Add q to one proof response.

    The result still verifies leniently, encrypts the same vote and is
    byte-distinct from the input. Ciphertexts are never touched.

    Raises:
        PreconditionError: the input does not verify leniently or the
            choice names a proof or branch the ballot does not have
    """
    choice = choice or DisjunctChoice()
    if not verify_helios_ballot(pk, ballot, strict=False, election_id=election_id):
        raise PreconditionError("Only a valid ballot can be mauled", operation="maul_ballot")

    q = pk.params.q
    if choice.overall:
        overall = _bump_response(ballot.overall_proof, choice.branch, q)
        return HeliosBallot(ballot.ciphertexts, ballot.individual_proofs, overall)

    if not 0 <= choice.proof < ballot.size:
        raise PreconditionError(
            f"Ballot has {ballot.size} individual proofs, cannot maul proof {choice.proof}",
            operation="maul_ballot"
        )
    proofs = list(ballot.individual_proofs)
    proofs[choice.proof] = _bump_response(proofs[choice.proof], choice.branch, q)
    return HeliosBallot(ballot.ciphertexts, tuple(proofs), ballot.overall_proof)


class HeliosScheme(ElectionScheme):
    """
    Homomorphic scheme in the style of Helios.

    Args:
        candidates: Candidate set the ballots encode
        strict: Range-check proof responses (hardened variant)
        election_id: Identifier bound into every proof
        group: Fixed group parameters; when given, setup skips group generation
    """

    scheme_tag = HELIOS_TAG
    supports_mauling = True

    def __init__(
        self,
        candidates: CandidateSet,
        strict: bool = False,
        election_id: str = DEFAULT_ELECTION_ID,
        group: Optional[GroupParams] = None,
    ):
        super().__init__(candidates)
        if group is not None and not validate_group(group):
            raise PreconditionError("Fixed group parameters are not a safe-prime group",
                                    operation="helios_setup")
        self.strict = strict
        self.name = "helios-hardened" if strict else "helios"
        self.election_id = election_id
        self.group = group

    def setup(self, k: int, rng: random.Random) -> KeyPair:
        check_security_parameter(k, self.name)
        params = self.group if self.group is not None else gen_group(k, rng)
        keys = keygen(params, rng)
        return KeyPair(public_key=keys.public_key, secret_key=keys)

    def vote(self, pk: ElGamalPublicKey, v: Vote, k: int, rng: random.Random) -> Optional[Ballot]:
        if not self.candidates.contains(v):
            return None

        params = pk.params
        ciphertexts = []
        proofs = []
        coins = []
        for index in self.candidates.indices():
            bit = 1 if index == v else 0
            r = random_coin(params, rng)
            c = encrypt(pk, bit, r)
            proofs.append(prove_bit(pk, bit, r, c, individual_context(pk, self.election_id, index), rng))
            ciphertexts.append(c)
            coins.append(r)

        product = sum_ciphertexts(ciphertexts, params.p)
        overall = prove_disjunctive(
            pk, product, sum(coins) % params.q, SELECTIONS_PER_BALLOT, 0,
            overall_context(pk, self.election_id), rng
        )
        return to_ballot(HeliosBallot(tuple(ciphertexts), tuple(proofs), overall))

    def verify_ballot(self, pk: ElGamalPublicKey, ballot: Union[Ballot, HeliosBallot]) -> bool:
        return verify_helios_ballot(
            pk, ballot, strict=self.strict, election_id=self.election_id, arity=self.arity
        )

    def is_well_formed(self, ballot: Ballot) -> bool:
        decoded = as_helios_ballot(ballot)
        return decoded is not None and decoded.size == self.arity

    def open_ballot(self, sk: ElGamalKeyPair, ballot: Ballot) -> Optional[Vote]:
        decoded = as_helios_ballot(ballot)
        if decoded is None or decoded.size != self.arity:
            return None
        bits = [decrypt_exponent(sk, c, 1) for c in decoded.ciphertexts]
        if None in bits or bits.count(1) != 1:
            return None
        return bits.index(1)

    def partial_tally(self, sk: ElGamalKeyPair, bb: BulletinBoard, k: int) -> Evidence:
        pk = sk.public_key
        valid: List[HeliosBallot] = []
        for ballot in bb:
            decoded = as_helios_ballot(ballot)
            if decoded is not None and self.verify_ballot(pk, decoded):
                valid.append(decoded)

        aggregate = []
        for index in self.candidates.indices():
            column = sum_ciphertexts((b.ciphertexts[index] for b in valid), pk.params.p)
            total = decrypt_exponent(sk, column, len(valid))
            if total is None:
                raise TallyError(
                    f"Aggregate for candidate {index} exceeds the {len(valid)} valid ballots"
                )
            aggregate.append(total)

        logger.debug(
            f"Tallied {len(valid)} of {len(bb)} ballots",
            extra={"scheme": self.name, "valid": len(valid), "board_size": len(bb)}
        )
        evidence = HeliosEvidence(aggregate=tuple(aggregate))
        return Evidence(scheme_tag=self.scheme_tag, payload=encode_ints(evidence.aggregate))

    def recover(self, bb: BulletinBoard, e: Evidence, pk: ElGamalPublicKey) -> Outcome:
        return self._outcome_from_vector(bb, self._evidence_vector(e))

    def maul(
        self,
        pk: ElGamalPublicKey,
        ballot: Ballot,
        choice: Optional[DisjunctChoice] = None,
    ) -> Ballot:
        decoded = as_helios_ballot(ballot)
        if decoded is None:
            raise PreconditionError("Ballot is not a Helios ballot", operation="maul_ballot")
        return to_ballot(maul_ballot(pk, decoded, choice, election_id=self.election_id))
