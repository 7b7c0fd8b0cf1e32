"""Encoding: the polar transform, systematic encoding, and CRC framing."""

from __future__ import annotations

import numpy as np

from . import _kernels
from .construction import PolarCode
from .crc import crc_compute


def polar_transform(bits: np.ndarray) -> np.ndarray:
    """Multiply by the Kronecker-power generator over GF(2) (self-inverse)."""
    x = np.ascontiguousarray(bits, dtype=np.uint8).copy()
    _kernels.polar_transform_inplace(x)
    return x


def encode_nonsystematic(code: PolarCode, u: np.ndarray) -> np.ndarray:
    """Codeword of a full source vector ``u`` (frozen positions must be 0)."""
    u = np.asarray(u, dtype=np.uint8)
    if u.shape != (code.n_bits,):
        raise ValueError(f"source vector must have length {code.n_bits}")
    if np.any(u[code.frozen] != 0):
        raise ValueError("frozen positions of the source vector must be zero")
    return polar_transform(u)


def encode_systematic(code: PolarCode, info: np.ndarray) -> np.ndarray:
    """Codeword whose information positions carry ``info`` verbatim.

    Two transform passes with frozen-position zeroing in between.
    """
    info = np.asarray(info, dtype=np.uint8)
    if info.shape != (code.k_code,):
        raise ValueError(f"info block must have length {code.k_code}")
    v = np.zeros(code.n_bits, dtype=np.uint8)
    v[code.info_positions] = info
    _kernels.polar_transform_inplace(v)
    v[code.frozen] = 0
    _kernels.polar_transform_inplace(v)
    return v


def build_info_block(code: PolarCode, payload: np.ndarray) -> np.ndarray:
    """Payload plus appended CRC checksum (when the code carries one)."""
    payload = np.asarray(payload, dtype=np.uint8)
    if payload.shape != (code.k_info,):
        raise ValueError(f"payload must have length {code.k_info}")
    if code.crc is None:
        return payload.copy()
    return np.concatenate([payload, crc_compute(payload, code.crc)])


def encode_payload(code: PolarCode, payload: np.ndarray) -> np.ndarray:
    """CRC-frame and encode a payload per the code's systematic flag."""
    block = build_info_block(code, payload)
    if code.systematic:
        return encode_systematic(code, block)
    u = np.zeros(code.n_bits, dtype=np.uint8)
    u[code.info_positions] = block
    return polar_transform(u)


def info_from_codeword(code: PolarCode, x: np.ndarray) -> np.ndarray:
    """Information block carried by a codeword."""
    x = np.asarray(x, dtype=np.uint8)
    if code.systematic:
        return x[code.info_positions]
    return polar_transform(x)[code.info_positions]
