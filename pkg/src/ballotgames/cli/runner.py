"""Command-line harness: run game experiments and inspect saved boards."""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, NoReturn, Optional, Sequence, Tuple

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from ..models.core import DEFAULT_DEMO_SECURITY_PARAMETER, CandidateSet
from ..services.adversaries import DEFAULT_KNOWN_BALLOTS
from ..services.board_io import export_board, import_board
from ..services.games import GameKind, TrialRun, run_trials_detailed
from ..services.helios import DEFAULT_ELECTION_ID
from ..services.registry import (
    AdversaryOptions,
    adversary_names,
    build_scheme,
    get_adversary,
    scheme_names,
)
from ..utils.error_handling import (
    BallotGamesError,
    ConfigurationError,
    DecodingError,
    UnsupportedParameterError,
    create_error_report,
)
from ..utils.validation import (
    sanitize_identifier,
    validate_candidate_identifiers,
    validate_security_parameter,
)

logger = logging.getLogger(__name__)

DEFAULT_TRIALS = 200
MAX_SEED = 2 ** 64 - 1

EXIT_OK = 0
EXIT_CONFIG_ERROR = 1
EXIT_TRIAL_FAULT = 2


class ExperimentConfig(BaseModel):
    """One experiment: which game, scheme and adversary, and how many trials."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    game: GameKind = GameKind.BALLOT_SECRECY
    scheme: str = "dummy"
    adversary: str = "null"
    trials: int = Field(default=DEFAULT_TRIALS, ge=1)
    k: int = DEFAULT_DEMO_SECURITY_PARAMETER
    candidates: int = Field(default=2, ge=2)
    names: Optional[List[str]] = None
    seed: int = Field(default=0, ge=0, le=MAX_SEED)
    known_ballots: int = Field(default=DEFAULT_KNOWN_BALLOTS, ge=0)
    election_id: str = DEFAULT_ELECTION_ID
    out: Optional[Path] = None
    save_board: Optional[Path] = None

    @field_validator('scheme')
    @classmethod
    def validate_scheme(cls, v):
        if v not in scheme_names():
            raise ValueError(f"unknown scheme '{v}', expected one of {', '.join(scheme_names())}")
        return v

    @field_validator('adversary')
    @classmethod
    def validate_adversary(cls, v):
        if v not in adversary_names():
            raise ValueError(f"unknown adversary '{v}', expected one of {', '.join(adversary_names())}")
        return v

    @field_validator('k')
    @classmethod
    def validate_k(cls, v):
        is_valid, errors = validate_security_parameter(v)
        if not is_valid:
            raise ValueError("; ".join(errors))
        return v

    @field_validator('names')
    @classmethod
    def validate_names(cls, v):
        if v is None:
            return v
        sanitized = [sanitize_identifier(name) for name in v]
        is_valid, errors = validate_candidate_identifiers(sanitized)
        if not is_valid:
            raise ValueError("; ".join(errors))
        return sanitized

    @model_validator(mode="after")
    def validate_combination(self) -> "ExperimentConfig":
        if self.names is not None and len(self.names) != self.candidates:
            raise ValueError(
                f"{len(self.names)} candidate names given for {self.candidates} candidates"
            )

        entry = get_adversary(self.adversary)
        if self.game not in entry.games:
            raise ValueError(
                f"adversary '{self.adversary}' does not play {self.game.value}; "
                f"it plays {', '.join(g.value for g in entry.games)}"
            )
        if entry.requires_malleable and not build_scheme(self.scheme, self.candidate_set()).supports_mauling:
            raise ValueError(f"adversary '{self.adversary}' needs a scheme with malleable ballots")
        return self

    def candidate_set(self) -> CandidateSet:
        if self.names is not None:
            return CandidateSet(candidates=tuple(self.names))
        return CandidateSet.numbered(self.candidates)


class TrialReport(BaseModel):
    """Machine-readable result of a run. Contains nothing time-dependent."""
    game: str
    scheme: str
    adversary: str
    k: int
    candidates: int
    trials: int
    wins: int
    disqualified: int
    rate: float
    ci95_low: float
    ci95_high: float
    seed: int

    def to_json(self) -> str:
        return json.dumps(self.model_dump(mode="json"), sort_keys=True, indent=2) + "\n"


def config_error_from_validation(error: ValidationError) -> ConfigurationError:
    messages = []
    fields = []
    for detail in error.errors():
        location = ".".join(str(part) for part in detail["loc"]) or "config"
        fields.append(location)
        messages.append(f"{location}: {detail['msg']}")
    return ConfigurationError(
        "Invalid experiment configuration: " + "; ".join(messages),
        field=fields[0] if fields else None,
        suggestions=[
            f"Games: {', '.join(g.value for g in GameKind)}",
            f"Schemes: {', '.join(scheme_names())}",
            f"Adversaries: {', '.join(adversary_names())}",
            "The reduction adversary only plays ballot-secrecy",
        ]
    )


def load_config_file(path: Path) -> Dict[str, Any]:
    """
    Read experiment settings from a YAML file.

    Raises:
        ConfigurationError: the file is missing, unreadable or not a YAML mapping
    """
    try:
        with open(path, 'r') as f:
            data = yaml.safe_load(f)
    except FileNotFoundError as e:
        raise ConfigurationError(f"Config file {path} not found", field="config") from e
    except yaml.YAMLError as e:
        raise ConfigurationError(f"Config file {path} is not valid YAML: {e}", field="config") from e
    except OSError as e:
        raise ConfigurationError(f"Cannot read config file {path}: {e.strerror or e}", field="config") from e

    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigurationError(f"Config file {path} must hold a mapping", field="config")
    return {str(key).replace("-", "_"): value for key, value in data.items()}


def build_config(settings: Dict[str, Any]) -> ExperimentConfig:
    """
    Raises:
        ConfigurationError: the settings do not form a valid experiment
    """
    try:
        return ExperimentConfig(**settings)
    except ValidationError as e:
        raise config_error_from_validation(e) from e


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    """File settings first, then every flag that was given."""
    settings: Dict[str, Any] = load_config_file(args.config) if args.config else {}

    flags = {
        "game": args.game,
        "scheme": args.scheme,
        "adversary": args.adversary,
        "trials": args.trials,
        "k": args.k,
        "candidates": args.candidates,
        "seed": args.seed,
        "known_ballots": args.known_ballots,
        "election_id": args.election_id,
        "out": args.out,
        "save_board": args.save_board,
    }
    if args.names is not None:
        flags["names"] = [name.strip() for name in args.names.split(",")]
    settings.update({key: value for key, value in flags.items() if value is not None})

    if "names" in settings and "candidates" not in settings and isinstance(settings["names"], list):
        settings["candidates"] = len(settings["names"])
    return build_config(settings)


def run_experiment(config: ExperimentConfig) -> Tuple[TrialReport, TrialRun]:
    """
    Run the configured experiment.

    Raises:
        TrialFaultError: a trial faulted and the run was aborted
    """
    scheme = build_scheme(config.scheme, config.candidate_set(), config.election_id)
    entry = get_adversary(config.adversary)
    entry.check_compatible(config.game, scheme)
    factory = entry.bind(config.game, AdversaryOptions(known_ballots=config.known_ballots))

    logger.info(
        f"Running {config.trials} trials of {config.game.value}",
        extra={"scheme": config.scheme, "adversary": config.adversary, "k": config.k, "seed": config.seed}
    )
    run = run_trials_detailed(
        config.game, scheme, factory, config.k, config.trials, config.seed,
        label=f"{config.game.value}/{config.scheme}/{config.adversary}"
    )

    stats = run.stats
    report = TrialReport(
        game=config.game.value,
        scheme=config.scheme,
        adversary=config.adversary,
        k=config.k,
        candidates=config.candidates,
        trials=stats.trials,
        wins=stats.wins,
        disqualified=stats.disqualified,
        rate=stats.rate,
        ci95_low=stats.ci95_low,
        ci95_high=stats.ci95_high,
        seed=config.seed,
    )
    return report, run


def run_command(args: argparse.Namespace) -> int:
    config = config_from_args(args)
    report, run = run_experiment(config)

    if config.save_board is not None:
        export_board(run.results[0].board, config.save_board)

    if config.out is not None:
        try:
            config.out.parent.mkdir(parents=True, exist_ok=True)
            config.out.write_text(report.to_json(), encoding="utf-8")
        except OSError as e:
            raise ConfigurationError(f"Cannot write report to {config.out}: {e.strerror or e}", field="out") from e
    else:
        sys.stdout.write(report.to_json())
    return EXIT_OK


def inspect_board_command(args: argparse.Namespace) -> int:
    if args.candidates < 2:
        raise ConfigurationError("A board needs at least 2 candidates to inspect", field="candidates")
    scheme = build_scheme(args.scheme, CandidateSet.numbered(args.candidates))
    board = import_board(args.file)
    summary = {
        "ballots": len(board),
        "scheme": scheme.name,
        "well_formed": sum(1 for ballot in board if scheme.is_well_formed(ballot)),
    }
    sys.stdout.write(json.dumps(summary, sort_keys=True, indent=2) + "\n")
    return EXIT_OK


class HarnessArgumentParser(argparse.ArgumentParser):
    """Argument errors are configuration errors (exit code 1)."""

    def error(self, message: str) -> NoReturn:
        raise ConfigurationError(f"Invalid arguments: {message}", field="arguments")


def create_cli_parser() -> argparse.ArgumentParser:
    """Create the command-line argument parser."""
    parser = HarnessArgumentParser(
        prog="ballotgames",
        description="Play ballot secrecy and non-malleability games against election schemes"
    )
    parser.add_argument("--log-level", default="WARNING",
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
                        help="Logging level (logs go to stderr)")

    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    run_parser = subparsers.add_parser("run", help="Run a game experiment")
    run_parser.add_argument("--config", type=Path, help="YAML file with experiment settings")
    run_parser.add_argument("--game", choices=[g.value for g in GameKind], help="Security game")
    run_parser.add_argument("--scheme", choices=scheme_names(), help="Election scheme")
    run_parser.add_argument("--adversary", choices=adversary_names(), help="Adversary")
    run_parser.add_argument("--trials", type=int, help=f"Number of games (default {DEFAULT_TRIALS})")
    run_parser.add_argument("--k", type=int,
                            help=f"Security parameter in bits (default {DEFAULT_DEMO_SECURITY_PARAMETER})")
    run_parser.add_argument("--candidates", type=int, help="Number of candidates (default 2)")
    run_parser.add_argument("--names", help="Comma-separated candidate identifiers")
    run_parser.add_argument("--seed", type=int, help="Root seed (default 0)")
    run_parser.add_argument("--known-ballots", type=int, dest="known_ballots",
                            help=f"Ballots the adversary casts itself (default {DEFAULT_KNOWN_BALLOTS})")
    run_parser.add_argument("--election-id", dest="election_id", help="Identifier bound into proofs")
    run_parser.add_argument("--out", type=Path, help="Write the JSON report here instead of stdout")
    run_parser.add_argument("--save-board", type=Path, dest="save_board",
                            help="Save the first trial's bulletin board")

    inspect_parser = subparsers.add_parser("inspect-board", help="Summarize a saved bulletin board")
    inspect_parser.add_argument("file", type=Path, help="Board file")
    inspect_parser.add_argument("--scheme", choices=scheme_names(), default="helios",
                                help="Scheme to decode ballots under")
    inspect_parser.add_argument("--candidates", type=int, default=2, help="Number of candidates")

    return parser


def _report_error(error: Exception) -> None:
    sys.stderr.write(create_error_report(error).model_dump_json(indent=2) + "\n")


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main CLI entry point. Returns the process exit code."""
    try:
        parser = create_cli_parser()
        args = parser.parse_args(argv)
    except ConfigurationError as e:
        _report_error(e)
        return EXIT_CONFIG_ERROR

    logging.basicConfig(
        level=getattr(logging, args.log_level),
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s"
    )

    if not args.command:
        parser.print_help()
        return EXIT_CONFIG_ERROR

    try:
        if args.command == "run":
            return run_command(args)
        return inspect_board_command(args)

    except (ConfigurationError, UnsupportedParameterError, DecodingError) as e:
        _report_error(e)
        return EXIT_CONFIG_ERROR

    except BallotGamesError as e:
        _report_error(e)
        return EXIT_TRIAL_FAULT


if __name__ == "__main__":
    sys.exit(main())
