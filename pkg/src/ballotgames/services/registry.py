"""Name-based lookup of schemes and adversaries for the CLI and for callers."""

import logging
import random
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Mapping, Optional

from ..models.core import CandidateSet
from ..models.crypto import DisjunctChoice
from ..utils.error_handling import ConfigurationError
from .adversaries import (
    DEFAULT_KNOWN_BALLOTS,
    MalleabilityAdversary,
    NullBallotSecrecyAdversary,
    NullNonMalleabilityAdversary,
    ReplayAdversary,
    UnbalancedAdversary,
    build_reduction,
)
from .election import DummyScheme, ElectionScheme
from .games import Adversary, AdversaryFactory, GameKind
from .helios import DEFAULT_ELECTION_ID, HeliosScheme

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AdversaryOptions:
    """Knobs shared by the built-in adversaries."""
    known_ballots: int = DEFAULT_KNOWN_BALLOTS
    fixed_guess: int = 1
    choice: DisjunctChoice = field(default_factory=DisjunctChoice)


ConfiguredFactory = Callable[[ElectionScheme, random.Random, AdversaryOptions], Adversary]


@dataclass(frozen=True)
class AdversaryEntry:
    """A registered adversary: one factory per game it can play."""
    name: str
    factories: Mapping[GameKind, ConfiguredFactory]
    requires_malleable: bool = False
    description: str = ""

    @property
    def games(self) -> List[GameKind]:
        return list(self.factories)

    def check_compatible(self, game: GameKind, scheme: ElectionScheme) -> None:
        """
        Raises:
            ConfigurationError: the adversary cannot play this game or scheme
        """
        if game not in self.factories:
            raise ConfigurationError(
                f"Adversary '{self.name}' does not play {game.value}",
                field="adversary",
                suggestions=[f"'{self.name}' plays: {', '.join(g.value for g in self.games)}"]
            )
        if self.requires_malleable and not scheme.supports_mauling:
            raise ConfigurationError(
                f"Adversary '{self.name}' needs a scheme with malleable ballots, got '{scheme.name}'",
                field="scheme",
                suggestions=["Use --scheme helios or --scheme helios-hardened"]
            )

    def bind(self, game: GameKind, options: Optional[AdversaryOptions] = None) -> AdversaryFactory:
        """Factory building a fresh adversary per trial."""
        factory = self.factories[game]
        options = options or AdversaryOptions()

        def build(scheme: ElectionScheme, rng: random.Random) -> Adversary:
            return factory(scheme, rng, options)

        return build


def _build_dummy(candidates: CandidateSet, election_id: str) -> ElectionScheme:
    return DummyScheme(candidates)


def _build_helios(candidates: CandidateSet, election_id: str) -> ElectionScheme:
    return HeliosScheme(candidates, strict=False, election_id=election_id)


def _build_helios_hardened(candidates: CandidateSet, election_id: str) -> ElectionScheme:
    return HeliosScheme(candidates, strict=True, election_id=election_id)


_SCHEMES: Dict[str, Callable[[CandidateSet, str], ElectionScheme]] = {
    "dummy": _build_dummy,
    "helios": _build_helios,
    "helios-hardened": _build_helios_hardened,
}

_ADVERSARIES: Dict[str, AdversaryEntry] = {}


def scheme_names() -> List[str]:
    return list(_SCHEMES)


def adversary_names() -> List[str]:
    return list(_ADVERSARIES)


def build_scheme(
    name: str,
    candidates: CandidateSet,
    election_id: str = DEFAULT_ELECTION_ID,
) -> ElectionScheme:
    """
    Raises:
        ConfigurationError: unknown scheme name
    """
    builder = _SCHEMES.get(name)
    if builder is None:
        raise ConfigurationError(
            f"Unknown scheme '{name}'",
            field="scheme",
            suggestions=[f"Known schemes: {', '.join(scheme_names())}"]
        )
    return builder(candidates, election_id)


def register_adversary(
    name: str,
    factories: Mapping[GameKind, ConfiguredFactory],
    requires_malleable: bool = False,
    description: str = "",
    replace: bool = False,
) -> AdversaryEntry:
    """
    Make an adversary selectable by name.

    Raises:
        ConfigurationError: the name is taken and ``replace`` is not set,
            or no game factory was given
    """
    if not factories:
        raise ConfigurationError(f"Adversary '{name}' needs at least one game factory", field="adversary")
    if name in _ADVERSARIES and not replace:
        raise ConfigurationError(
            f"Adversary '{name}' is already registered",
            field="adversary",
            suggestions=["Pass replace=True to override it"]
        )

    entry = AdversaryEntry(
        name=name,
        factories=dict(factories),
        requires_malleable=requires_malleable,
        description=description,
    )
    _ADVERSARIES[name] = entry
    logger.debug(f"Registered adversary {name}", extra={"adversary": name, "games": [g.value for g in entry.games]})
    return entry


def unregister_adversary(name: str) -> None:
    _ADVERSARIES.pop(name, None)


def get_adversary(name: str) -> AdversaryEntry:
    """
    Raises:
        ConfigurationError: unknown adversary name
    """
    entry = _ADVERSARIES.get(name)
    if entry is None:
        raise ConfigurationError(
            f"Unknown adversary '{name}'",
            field="adversary",
            suggestions=[f"Known adversaries: {', '.join(adversary_names())}"]
        )
    return entry


def _malleability(scheme: ElectionScheme, rng: random.Random, options: AdversaryOptions) -> MalleabilityAdversary:
    return MalleabilityAdversary(scheme, rng, known_ballots=options.known_ballots, choice=options.choice)


register_adversary(
    "null",
    {
        GameKind.BALLOT_SECRECY: lambda scheme, rng, options: NullBallotSecrecyAdversary(options.fixed_guess),
        GameKind.NON_MALLEABILITY: lambda scheme, rng, options: NullNonMalleabilityAdversary(options.fixed_guess),
    },
    description="Empty board, fixed guess",
)
register_adversary(
    "malleability",
    {GameKind.NON_MALLEABILITY: _malleability},
    requires_malleable=True,
    description="Mauls the challenge ballot and subtracts its own votes from the outcome",
)
register_adversary(
    "reduction",
    {GameKind.BALLOT_SECRECY: lambda scheme, rng, options: build_reduction(_malleability(scheme, rng, options), scheme)},
    requires_malleable=True,
    description="Malleability adversary run against ballot secrecy through one oracle query",
)
register_adversary(
    "replay",
    {GameKind.NON_MALLEABILITY: lambda scheme, rng, options: ReplayAdversary(scheme, rng, options.known_ballots)},
    description="Copies the challenge ballot onto the board",
)
register_adversary(
    "unbalanced",
    {GameKind.BALLOT_SECRECY: lambda scheme, rng, options: UnbalancedAdversary(scheme, rng)},
    description="Places a single challenge ballot on the board",
)
