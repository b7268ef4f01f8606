"""Value types for exponential El-Gamal over a safe-prime group."""

from dataclasses import dataclass
from typing import Tuple

# Uniform in [1, q).
RandomCoin = int


@dataclass(frozen=True)
class GroupParams:
    """Safe prime p = 2q + 1 and a generator g of the order-q subgroup."""
    p: int
    q: int
    g: int

    @property
    def bits(self) -> int:
        return self.p.bit_length()


@dataclass(frozen=True)
class ElGamalPublicKey:
    """Public element h = g^x mod p."""
    params: GroupParams
    h: int


@dataclass(frozen=True)
class ElGamalKeyPair:
    """Secret exponent x in [1, q) with its public element."""
    params: GroupParams
    x: int
    h: int

    @property
    def public_key(self) -> ElGamalPublicKey:
        return ElGamalPublicKey(params=self.params, h=self.h)


@dataclass(frozen=True)
class Ciphertext:
    """(a, b) = (g^r, h^r * g^v) mod p."""
    a: int
    b: int


@dataclass(frozen=True)
class ProofBranch:
    """One disjunct of a disjunctive Chaum-Pedersen proof."""
    commitment_a: int
    commitment_b: int
    challenge: int
    response: int


@dataclass(frozen=True)
class DisjunctiveProof:
    """Proof that a ciphertext encrypts one of a fixed list of values.

    Branch i speaks for the i-th allowed value. ``challenge`` is the
    Fiat-Shamir hash the branch challenges must sum to modulo q.
    """
    branches: Tuple[ProofBranch, ...]
    challenge: int

    def with_branch(self, index: int, branch: ProofBranch) -> "DisjunctiveProof":
        branches = list(self.branches)
        branches[index] = branch
        return DisjunctiveProof(branches=tuple(branches), challenge=self.challenge)


@dataclass(frozen=True)
class HeliosBallot:
    """Unit-vector encryption of one selection with its proofs.

    ``individual_proofs[j]`` attests that ``ciphertexts[j]`` encrypts 0 or 1;
    ``overall_proof`` attests that the product of all ciphertexts encrypts 1.
    """
    ciphertexts: Tuple[Ciphertext, ...]
    individual_proofs: Tuple[DisjunctiveProof, ...]
    overall_proof: DisjunctiveProof

    @property
    def size(self) -> int:
        return len(self.ciphertexts)


@dataclass(frozen=True)
class HeliosEvidence:
    """Decrypted per-candidate sums of the valid ballots on a board."""
    aggregate: Tuple[int, ...]


@dataclass(frozen=True)
class DisjunctChoice:
    """Which proof response a mauling rewrites.

    With ``overall`` set, ``proof`` is ignored and ``branch`` indexes the
    overall proof, which has a single branch.
    """
    proof: int = 0
    branch: int = 0
    overall: bool = False
