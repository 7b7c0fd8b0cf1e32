"""Cyclic redundancy checks over bit vectors."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels


@dataclass(frozen=True)
class CrcSpec:
    """CRC register description.

    ``poly`` is the normal (MSB-first) representation with the leading
    ``x^width`` term implicit. ``reflect_in`` feeds each 8-bit group of the
    payload in reversed bit order (a trailing partial group is reversed as a
    group of its own size); ``reflect_out`` bit-reverses the final register.
    The checksum is appended after the payload bits, MSB first.
    """

    width: int
    poly: int
    init: int = 0
    xorout: int = 0
    reflect_in: bool = False
    reflect_out: bool = False

    def __post_init__(self):
        if not 1 <= self.width <= 32:
            raise ValueError(f"CRC width must be in [1, 32], got {self.width}")
        if not 0 <= self.poly < (1 << self.width):
            raise ValueError("CRC polynomial degree must equal the width")
        if not 0 <= self.init < (1 << self.width):
            raise ValueError("CRC init value does not fit the width")
        if not 0 <= self.xorout < (1 << self.width):
            raise ValueError("CRC final-xor value does not fit the width")


CRC32_IEEE = CrcSpec(
    width=32,
    poly=0x04C11DB7,
    init=0xFFFFFFFF,
    xorout=0xFFFFFFFF,
    reflect_in=True,
    reflect_out=True,
)

CRC8_CCITT = CrcSpec(width=8, poly=0x07)

DEFAULT_SPECS = {8: CRC8_CCITT, 32: CRC32_IEEE}


def checksum_to_bits(value: int, width: int) -> np.ndarray:
    return np.array([(value >> (width - 1 - i)) & 1 for i in range(width)], dtype=np.uint8)


def bits_to_int(bits: np.ndarray) -> int:
    out = 0
    for b in bits:
        out = (out << 1) | int(b)
    return out


def crc_compute(payload: np.ndarray, spec: CrcSpec) -> np.ndarray:
    """Checksum of a bit vector, returned as ``spec.width`` bits MSB first."""
    payload = np.asarray(payload, dtype=np.uint8)
    if payload.size == 0:
        raise ValueError("CRC payload must be nonempty")
    value = _kernels.crc_bits(
        payload, spec.poly, spec.width, spec.init,
        spec.reflect_in, spec.reflect_out, spec.xorout,
    )
    return checksum_to_bits(int(value), spec.width)


def crc_check(payload_with_checksum: np.ndarray, spec: CrcSpec) -> bool:
    """True iff the trailing ``spec.width`` bits match the recomputed checksum."""
    block = np.asarray(payload_with_checksum, dtype=np.uint8)
    if block.size <= spec.width:
        raise ValueError(
            f"need more than {spec.width} bits to check a width-{spec.width} CRC, got {block.size}"
        )
    expect = crc_compute(block[: block.size - spec.width], spec)
    return bool(np.array_equal(expect, block[block.size - spec.width :]))
