"""
Exponential El-Gamal over a safe-prime group and disjunctive
Chaum-Pedersen proofs made non-interactive with Fiat-Shamir.

All group arithmetic goes through gmpy2; values are handed back as plain
Python ints so the domain types stay hashable and comparable.
"""

import hashlib
import logging
import random
from typing import Iterable, List, Optional, Sequence

import gmpy2

from ..models.crypto import (
    Ciphertext,
    DisjunctiveProof,
    ElGamalKeyPair,
    ElGamalPublicKey,
    GroupParams,
    ProofBranch,
    RandomCoin,
)
from ..utils.error_handling import UnsupportedParameterError
from ..utils.validation import validate_security_parameter
from .encoding import FieldReader, Field, encode_fields

logger = logging.getLogger(__name__)

PRIMALITY_ROUNDS = 40
BIT_VALUES = (0, 1)

# Hash input layout: context, a, b, then A_i, B_i for every branch in order.
FIAT_SHAMIR_DOMAIN = "ballotgames/disjunctive-cp/v1"


def _pow(base: int, exponent: int, modulus: int) -> int:
    return int(gmpy2.powmod(base, exponent, modulus))


def _inv(value: int, modulus: int) -> int:
    return int(gmpy2.invert(value, modulus))


def _is_int(value: object) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def is_prime(n: int) -> bool:
    return bool(gmpy2.is_prime(n, PRIMALITY_ROUNDS))


def validate_group(params: GroupParams) -> bool:
    """Check p = 2q + 1 with p, q prime and g a non-trivial order-q element."""
    p, q, g = params.p, params.q, params.g
    if not all(_is_int(value) for value in (p, q, g)):
        return False
    if p != 2 * q + 1 or not (is_prime(q) and is_prime(p)):
        return False
    return 1 < g < p and _pow(g, q, p) == 1


def in_subgroup(params: GroupParams, element: int) -> bool:
    """Membership in the order-q subgroup of Z_p*."""
    return _is_int(element) and 0 < element < params.p and _pow(element, params.q, params.p) == 1


def gen_group(k: int, rng: random.Random) -> GroupParams:
    """
    Generate a k-bit safe prime p = 2q + 1 and a generator of the
    order-q subgroup.

    The generator is the square of a random element, redrawn until it is
    not 1; every non-trivial quadratic residue generates the subgroup.

    Raises:
        UnsupportedParameterError: k is outside the supported range
    """
    is_valid, errors = validate_security_parameter(k)
    if not is_valid:
        raise UnsupportedParameterError("; ".join(errors), k=k)

    attempts = 0
    while True:
        attempts += 1
        q = rng.getrandbits(k - 1) | (1 << (k - 2)) | 1
        if not is_prime(q):
            continue
        p = 2 * q + 1
        if is_prime(p):
            break

    while True:
        g = _pow(rng.randrange(2, p - 1), 2, p)
        if g != 1:
            break

    params = GroupParams(p=p, q=q, g=g)
    logger.debug(
        f"Generated {params.bits}-bit safe prime after {attempts} candidates",
        extra={"k": k, "bits": params.bits, "attempts": attempts}
    )
    return params


def random_coin(params: GroupParams, rng: random.Random) -> RandomCoin:
    """Uniform exponent in [1, q)."""
    return rng.randrange(1, params.q)


def keygen(params: GroupParams, rng: random.Random) -> ElGamalKeyPair:
    x = random_coin(params, rng)
    return ElGamalKeyPair(params=params, x=x, h=_pow(params.g, x, params.p))


def encrypt(pk: ElGamalPublicKey, v: int, r: RandomCoin) -> Ciphertext:
    """E(v; r) = (g^r, h^r * g^v) mod p."""
    if v < 0:
        raise ValueError("Exponential El-Gamal only encrypts non-negative exponents")
    p, g = pk.params.p, pk.params.g
    return Ciphertext(a=_pow(g, r, p), b=_pow(pk.h, r, p) * _pow(g, v, p) % p)


def add_ciphertexts(c1: Ciphertext, c2: Ciphertext, p: int) -> Ciphertext:
    """Componentwise product; decrypts to the sum of the exponents."""
    return Ciphertext(a=c1.a * c2.a % p, b=c1.b * c2.b % p)


def sum_ciphertexts(ciphertexts: Iterable[Ciphertext], p: int) -> Ciphertext:
    total = Ciphertext(a=1, b=1)
    for ciphertext in ciphertexts:
        total = add_ciphertexts(total, ciphertext, p)
    return total


def decrypt_exponent(sk: ElGamalKeyPair, c: Ciphertext, max_value: int) -> Optional[int]:
    """
    Recover v <= max_value from g^v = b * a^(-x) by exhaustive search.

    Returns None when no exponent in range matches.
    """
    if max_value < 0:
        raise ValueError("max_value must be non-negative")
    p, g = sk.params.p, sk.params.g
    target = c.b * _inv(_pow(c.a, sk.x, p), p) % p

    candidate = 1
    for v in range(max_value + 1):
        if candidate == target:
            return v
        candidate = candidate * g % p
    return None


def proof_context(pk: ElGamalPublicKey, election_id: str, label: str) -> bytes:
    """Bind a proof to the public key, the election and its position in a ballot."""
    params = pk.params
    return encode_fields(FIAT_SHAMIR_DOMAIN, params.p, params.q, params.g, pk.h, election_id, label)


def fiat_shamir(params: GroupParams, context: bytes, *transcript: Field) -> int:
    """SHA-256 over the canonical encoding of (context, transcript...), mod q."""
    digest = hashlib.sha256(encode_fields(context, *transcript)).digest()
    return int.from_bytes(digest, "big") % params.q


def _transcript(c: Ciphertext, commitments: Sequence[tuple]) -> List[int]:
    fields = [c.a, c.b]
    for commitment_a, commitment_b in commitments:
        fields.extend((commitment_a, commitment_b))
    return fields


def _shifted(pk: ElGamalPublicKey, c: Ciphertext, value: int) -> int:
    """b / g^value mod p."""
    p = pk.params.p
    return c.b * _inv(_pow(pk.params.g, value, p), p) % p


def prove_disjunctive(
    pk: ElGamalPublicKey,
    c: Ciphertext,
    r: RandomCoin,
    values: Sequence[int],
    real_index: int,
    context: bytes,
    rng: random.Random,
    simulated_response: Optional[int] = None,
) -> DisjunctiveProof:
    """
    Prove that ``c`` encrypts one of ``values``.

    The branch at ``real_index`` is proved with the coin ``r``; every other
    branch is simulated from a random challenge and response. Passing
    ``simulated_response`` fixes the response of the simulated branches.
    """
    params = pk.params
    p, q, g = params.p, params.q, params.g

    commitments: List[tuple] = []
    challenges: List[int] = []
    responses: List[int] = []
    w = random_coin(params, rng)

    for index, value in enumerate(values):
        if index == real_index:
            commitments.append((_pow(g, w, p), _pow(pk.h, w, p)))
            challenges.append(0)
            responses.append(0)
            continue
        challenge = rng.randrange(q)
        response = rng.randrange(q) if simulated_response is None else simulated_response
        commitment_a = _pow(g, response, p) * _inv(_pow(c.a, challenge, p), p) % p
        commitment_b = (
            _pow(pk.h, response, p)
            * _inv(_pow(_shifted(pk, c, value), challenge, p), p) % p
        )
        commitments.append((commitment_a, commitment_b))
        challenges.append(challenge)
        responses.append(response)

    bound = fiat_shamir(params, context, *_transcript(c, commitments))
    real_challenge = (bound - sum(challenges)) % q
    challenges[real_index] = real_challenge
    responses[real_index] = (w + real_challenge * r) % q

    branches = tuple(
        ProofBranch(commitment_a=a, commitment_b=b, challenge=ch, response=t)
        for (a, b), ch, t in zip(commitments, challenges, responses)
    )
    return DisjunctiveProof(branches=branches, challenge=bound)


def prove_bit(
    pk: ElGamalPublicKey,
    v: int,
    r: RandomCoin,
    c: Ciphertext,
    context: bytes,
    rng: random.Random,
) -> DisjunctiveProof:
    """Prove that ``c`` = E(v; r) encrypts 0 or 1."""
    if v not in BIT_VALUES:
        raise ValueError(f"prove_bit needs a bit, got {v}")
    return prove_disjunctive(pk, c, r, BIT_VALUES, v, context, rng)


def _verify(
    pk: ElGamalPublicKey,
    c: Ciphertext,
    proof: DisjunctiveProof,
    context: bytes,
    values: Sequence[int],
    strict: bool,
) -> bool:
    params = pk.params
    p, q, g = params.p, params.q, params.g

    if len(proof.branches) != len(values):
        return False
    if not (in_subgroup(params, c.a) and in_subgroup(params, c.b)):
        return False

    for branch in proof.branches:
        fields = (branch.commitment_a, branch.commitment_b, branch.challenge, branch.response)
        if not all(_is_int(field) for field in fields):
            return False
        if not (0 < branch.commitment_a < p and 0 < branch.commitment_b < p):
            return False
        if not 0 <= branch.challenge < q:
            return False
        # Responses only enter through exponentiation, so t and t + q agree.
        if branch.response < 0 or (strict and branch.response >= q):
            return False

    commitments = [(branch.commitment_a, branch.commitment_b) for branch in proof.branches]
    bound = fiat_shamir(params, context, *_transcript(c, commitments))
    if proof.challenge != bound:
        return False
    if sum(branch.challenge for branch in proof.branches) % q != bound:
        return False

    for value, branch in zip(values, proof.branches):
        t, ch = branch.response, branch.challenge
        if _pow(g, t, p) != branch.commitment_a * _pow(c.a, ch, p) % p:
            return False
        if _pow(pk.h, t, p) != branch.commitment_b * _pow(_shifted(pk, c, value), ch, p) % p:
            return False
    return True


def verify_disjunctive(
    pk: ElGamalPublicKey,
    c: Ciphertext,
    proof: DisjunctiveProof,
    context: bytes,
    values: Sequence[int] = BIT_VALUES,
) -> bool:
    """Lenient verification: responses are any non-negative integers."""
    return _verify(pk, c, proof, context, values, strict=False)


def verify_disjunctive_strict(
    pk: ElGamalPublicKey,
    c: Ciphertext,
    proof: DisjunctiveProof,
    context: bytes,
    values: Sequence[int] = BIT_VALUES,
) -> bool:
    """Lenient verification plus 0 <= t < q on every response."""
    return _verify(pk, c, proof, context, values, strict=True)


def encode_ciphertext(c: Ciphertext) -> bytes:
    return encode_fields(c.a, c.b)


def read_ciphertext(reader: FieldReader) -> Ciphertext:
    a, b = reader.read_ints(2)
    return Ciphertext(a=a, b=b)


def encode_proof(proof: DisjunctiveProof) -> bytes:
    """Branch count, then (A, B, c, t) per branch, then the bound challenge."""
    fields: List[Field] = [len(proof.branches)]
    for branch in proof.branches:
        fields.extend((branch.commitment_a, branch.commitment_b, branch.challenge, branch.response))
    fields.append(proof.challenge)
    return encode_fields(*fields)


def read_proof(reader: FieldReader) -> DisjunctiveProof:
    count = reader.read_int()
    branches = []
    for _ in range(count):
        commitment_a, commitment_b, challenge, response = reader.read_ints(4)
        branches.append(ProofBranch(commitment_a, commitment_b, challenge, response))
    return DisjunctiveProof(branches=tuple(branches), challenge=reader.read_int())
