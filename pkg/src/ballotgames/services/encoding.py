"""Canonical byte encoding shared by every scheme.

A canonical string is a sequence of fields, each prefixed by its length as a
4-byte big-endian integer. Integers are non-negative and written big-endian
in minimal length (zero is the empty string). Text is UTF-8.
"""

from typing import Iterable, List, Union

from ..utils.error_handling import DecodingError

LENGTH_PREFIX_BYTES = 4
MAX_FIELD_LENGTH = 2 ** 32 - 1

Field = Union[int, str, bytes]


def int_to_bytes(value: int) -> bytes:
    """Minimal big-endian encoding of a non-negative integer."""
    if isinstance(value, bool) or not isinstance(value, int):
        raise TypeError(f"Expected int, got {type(value).__name__}")
    if value < 0:
        raise ValueError("Canonical encoding only covers non-negative integers")
    return value.to_bytes((value.bit_length() + 7) // 8, "big")


def bytes_to_int(raw: bytes) -> int:
    """Inverse of int_to_bytes; rejects non-minimal encodings."""
    if raw and raw[0] == 0:
        raise DecodingError("Integer field has a leading zero byte")
    return int.from_bytes(raw, "big")


def length_prefixed(raw: bytes) -> bytes:
    if len(raw) > MAX_FIELD_LENGTH:
        raise ValueError("Field too long for a 4-byte length prefix")
    return len(raw).to_bytes(LENGTH_PREFIX_BYTES, "big") + raw


def encode_field(value: Field) -> bytes:
    """Encode one field with its length prefix."""
    if isinstance(value, bytes):
        return length_prefixed(value)
    if isinstance(value, str):
        return length_prefixed(value.encode("utf-8"))
    return length_prefixed(int_to_bytes(value))


def encode_fields(*values: Field) -> bytes:
    """Encode a sequence of fields."""
    return b"".join(encode_field(value) for value in values)


def encode_ints(values: Iterable[int]) -> bytes:
    return b"".join(encode_field(value) for value in values)


class FieldReader:
    """Sequential reader over a canonical byte string."""

    def __init__(self, data: bytes):
        self._data = data
        self._offset = 0

    @property
    def exhausted(self) -> bool:
        return self._offset == len(self._data)

    def read_raw(self) -> bytes:
        end_of_prefix = self._offset + LENGTH_PREFIX_BYTES
        if end_of_prefix > len(self._data):
            raise DecodingError(f"Truncated length prefix at offset {self._offset}")
        length = int.from_bytes(self._data[self._offset:end_of_prefix], "big")
        end = end_of_prefix + length
        if end > len(self._data):
            raise DecodingError(
                f"Field at offset {self._offset} declares {length} bytes "
                f"but only {len(self._data) - end_of_prefix} remain"
            )
        self._offset = end
        return self._data[end_of_prefix:end]

    def read_int(self) -> int:
        return bytes_to_int(self.read_raw())

    def read_str(self) -> str:
        try:
            return self.read_raw().decode("utf-8")
        except UnicodeDecodeError as e:
            raise DecodingError(f"Text field is not valid UTF-8: {e}") from e

    def read_ints(self, count: int) -> List[int]:
        return [self.read_int() for _ in range(count)]

    def remaining(self) -> bytes:
        rest = self._data[self._offset:]
        self._offset = len(self._data)
        return rest

    def expect_end(self) -> None:
        if not self.exhausted:
            raise DecodingError(
                f"{len(self._data) - self._offset} trailing bytes after the last field"
            )


def decode_ints(data: bytes, count: int) -> List[int]:
    """Decode exactly ``count`` integer fields and nothing else."""
    reader = FieldReader(data)
    values = reader.read_ints(count)
    reader.expect_end()
    return values
