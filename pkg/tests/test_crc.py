import binascii

import numpy as np
import pytest

import polarkit as pk
from polarkit.crc import bits_to_int, checksum_to_bits


def ascii_bits(s: bytes) -> np.ndarray:
    return np.unpackbits(np.frombuffer(s, dtype=np.uint8))


def long_division_crc(bits, poly, width, init, xorout, refin, refout):
    """Plain-Python reference register, written independently."""
    bits = list(int(b) for b in bits)
    if refin:
        grouped = []
        for i in range(0, len(bits), 8):
            grouped.extend(reversed(bits[i : i + 8]))
        bits = grouped
    reg = init
    for b in bits:
        top = (reg >> (width - 1)) & 1
        reg = (reg << 1) & ((1 << width) - 1)
        if top ^ b:
            reg ^= poly
    if refout:
        reg = int(f"{reg:0{width}b}"[::-1], 2)
    return reg ^ xorout


def test_crc32_check_vector():
    bits = ascii_bits(b"123456789")
    got = bits_to_int(pk.crc_compute(bits, pk.CRC32_IEEE))
    assert got == 0xCBF43926
    assert got == binascii.crc32(b"123456789")


def test_crc8_zero_register_stays_zero():
    assert bits_to_int(pk.crc_compute(np.zeros(17, dtype=np.uint8), pk.CRC8_CCITT)) == 0


def test_crc8_single_bit_is_polynomial():
    assert bits_to_int(pk.crc_compute(np.array([1], dtype=np.uint8), pk.CRC8_CCITT)) == 0x07


def test_crc8_ascii_vector_matches_reference():
    bits = ascii_bits(b"123456789")
    got = bits_to_int(pk.crc_compute(bits, pk.CRC8_CCITT))
    assert got == long_division_crc(bits, 0x07, 8, 0, 0, False, False)
    assert got == 0xF4  # CRC-8/SMBUS check value


@pytest.mark.parametrize("spec", [pk.CRC8_CCITT, pk.CRC32_IEEE])
def test_matches_reference_register_on_odd_lengths(spec, rng):
    for _ in range(50):
        n = int(rng.integers(1, 90))
        bits = rng.integers(0, 2, n, dtype=np.uint8)
        got = bits_to_int(pk.crc_compute(bits, spec))
        want = long_division_crc(
            bits, spec.poly, spec.width, spec.init, spec.xorout,
            spec.reflect_in, spec.reflect_out,
        )
        assert got == want


@pytest.mark.parametrize("spec", [pk.CRC8_CCITT, pk.CRC32_IEEE])
def test_roundtrip_and_single_flip_detection(spec, rng):
    for _ in range(300):
        n = int(rng.integers(1, 120))
        payload = rng.integers(0, 2, n, dtype=np.uint8)
        block = np.concatenate([payload, pk.crc_compute(payload, spec)])
        assert pk.crc_check(block, spec)
        flipped = block.copy()
        flipped[rng.integers(0, block.size)] ^= 1
        assert not pk.crc_check(flipped, spec)


def test_crc_check_rejects_short_blocks():
    with pytest.raises(ValueError):
        pk.crc_check(np.zeros(8, dtype=np.uint8), pk.CRC8_CCITT)


def test_crc_compute_rejects_empty():
    with pytest.raises(ValueError):
        pk.crc_compute(np.zeros(0, dtype=np.uint8), pk.CRC8_CCITT)


def test_spec_validation():
    with pytest.raises(ValueError):
        pk.CrcSpec(width=8, poly=0x107)
    with pytest.raises(ValueError):
        pk.CrcSpec(width=0, poly=0)
    with pytest.raises(ValueError):
        pk.CrcSpec(width=8, poly=0x07, init=0x100)


def test_checksum_bit_helpers():
    bits = checksum_to_bits(0xA5, 8)
    assert list(bits) == [1, 0, 1, 0, 0, 1, 0, 1]
    assert bits_to_int(bits) == 0xA5
