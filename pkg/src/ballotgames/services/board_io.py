"""Bulletin boards as text files: one hex-encoded canonical ballot per line."""

import logging
from pathlib import Path
from typing import Iterable, List, Union

from ..models.core import BulletinBoard
from ..utils.error_handling import ConfigurationError, DecodingError
from .election import decode_ballot, encode_ballot

logger = logging.getLogger(__name__)

BOARD_HEADER = "# ballotgames bulletin board"
COMMENT_PREFIX = "#"


def board_to_lines(board: BulletinBoard) -> List[str]:
    return [BOARD_HEADER] + [encode_ballot(ballot).hex() for ballot in board]


def board_from_lines(lines: Iterable[str]) -> BulletinBoard:
    """
    Parse board lines. Blank lines and ``#`` comments are skipped;
    byte-equal lines collapse into one ballot. A ballot line is a single
    unbroken hex string.

    Raises:
        DecodingError: a line is not a hex-encoded canonical ballot
    """
    ballots = []
    for number, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith(COMMENT_PREFIX):
            continue
        if any(ch.isspace() for ch in line):
            raise DecodingError(f"Line {number} contains whitespace inside the ballot", line=number)
        try:
            data = bytes.fromhex(line)
        except ValueError as e:
            raise DecodingError(f"Line {number} is not valid hex: {e}", line=number) from e
        try:
            ballots.append(decode_ballot(data))
        except DecodingError as e:
            raise DecodingError(f"Line {number}: {e.message}", line=number) from e
    return BulletinBoard.of(ballots)


def export_board(board: BulletinBoard, path: Union[str, Path]) -> Path:
    """
    Write the board to ``path``, creating parent directories.

    Raises:
        ConfigurationError: the file cannot be written
    """
    target = Path(path)
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text("\n".join(board_to_lines(board)) + "\n", encoding="utf-8")
    except OSError as e:
        raise ConfigurationError(f"Cannot write board file {target}: {e.strerror or e}", field="save_board") from e
    logger.info(f"Exported {len(board)} ballots to {target}", extra={"path": str(target), "ballots": len(board)})
    return target


def import_board(path: Union[str, Path]) -> BulletinBoard:
    """
    Read a board written by export_board.

    Raises:
        DecodingError: a line fails to parse; the error carries its number
        ConfigurationError: the file cannot be read
    """
    source = Path(path)
    try:
        text = source.read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise DecodingError(f"{source} is not a UTF-8 text file") from e
    except OSError as e:
        raise ConfigurationError(f"Cannot read board file {source}: {e.strerror or e}", field="file") from e
    board = board_from_lines(text.splitlines())
    logger.info(f"Imported {len(board)} ballots from {source}", extra={"path": str(source), "ballots": len(board)})
    return board
