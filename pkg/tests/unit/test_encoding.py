"""Unit tests for the canonical byte encoding."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ballotgames.services.encoding import (
    FieldReader,
    bytes_to_int,
    decode_ints,
    encode_field,
    encode_fields,
    int_to_bytes,
)
from ballotgames.utils.error_handling import DecodingError


def test_int_to_bytes_is_minimal():
    """Test minimal big-endian integer encoding."""
    assert int_to_bytes(0) == b""
    assert int_to_bytes(1) == b"\x01"
    assert int_to_bytes(255) == b"\xff"
    assert int_to_bytes(256) == b"\x01\x00"


def test_int_to_bytes_rejects_bad_input():
    with pytest.raises(ValueError):
        int_to_bytes(-1)
    with pytest.raises(TypeError):
        int_to_bytes(True)


def test_bytes_to_int_rejects_leading_zero():
    """Test that non-minimal integers do not decode."""
    assert bytes_to_int(b"") == 0
    with pytest.raises(DecodingError):
        bytes_to_int(b"\x00\x01")


def test_field_layout():
    """Test 4-byte big-endian length prefixes."""
    assert encode_field(0) == b"\x00\x00\x00\x00"
    assert encode_field(5) == b"\x00\x00\x00\x01\x05"
    assert encode_field("ab") == b"\x00\x00\x00\x02ab"
    assert encode_field(b"\x00") == b"\x00\x00\x00\x01\x00"


def test_reader_reads_mixed_fields():
    reader = FieldReader(encode_fields("tag", 7, b"raw"))

    assert reader.read_str() == "tag"
    assert reader.read_int() == 7
    assert reader.read_raw() == b"raw"
    assert reader.exhausted
    reader.expect_end()


def test_reader_detects_truncation():
    """Test errors on truncated prefixes and bodies."""
    with pytest.raises(DecodingError):
        FieldReader(b"\x00\x00").read_raw()
    with pytest.raises(DecodingError):
        FieldReader(b"\x00\x00\x00\x05abc").read_raw()


def test_decode_ints_rejects_trailing_bytes():
    data = encode_fields(1, 2) + b"\x00"
    with pytest.raises(DecodingError):
        decode_ints(data, 2)


def test_reader_rejects_invalid_utf8():
    with pytest.raises(DecodingError):
        FieldReader(encode_field(b"\xff\xfe")).read_str()


@given(st.lists(st.integers(min_value=0, max_value=2 ** 256)))
def test_integer_fields_decode_to_themselves(values):
    """Property: decode(encode(values)) == values."""
    assert decode_ints(encode_fields(*values), len(values)) == values
