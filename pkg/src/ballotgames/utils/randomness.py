"""Seedable randomness streams.

Every probabilistic operation takes a ``random.Random`` instance. Streams are
derived from a root seed and a label path so that trials, and the roles inside
a trial, never share stream positions.
"""

import hashlib
import random
from typing import Tuple, Union

Label = Union[str, int]

GAME_ROLE = "game"
ADVERSARY_ROLE = "adversary"


def derive_seed(seed: int, *labels: Label) -> int:
    """Derive a 64-bit seed from a root seed and a label path."""
    digest = hashlib.sha256()
    digest.update(seed.to_bytes(16, "big", signed=True))
    for label in labels:
        encoded = str(label).encode("utf-8")
        digest.update(len(encoded).to_bytes(4, "big"))
        digest.update(encoded)
    return int.from_bytes(digest.digest()[:8], "big")


def derive_stream(seed: int, *labels: Label) -> random.Random:
    """Create an independent stream for the given label path."""
    return random.Random(derive_seed(seed, *labels))


def trial_streams(seed: int, index: int) -> Tuple[random.Random, random.Random]:
    """Return the (game, adversary) streams of one trial.

    The game stream drives setup, the hidden coin and every challenge vote.
    The adversary stream drives adversary randomness only.
    """
    return (
        derive_stream(seed, "trial", index, GAME_ROLE),
        derive_stream(seed, "trial", index, ADVERSARY_ROLE),
    )
