"""Polar code construction.

Bit-channel reliabilities come from Gaussian-approximation density
evolution of BPSK LLR means at a configurable design SNR, in natural
(non-bit-reversed) index order. Ranking is a fixed total order per
(length, design SNR); the code dimension only moves the frozen cutoff,
with ties frozen at the lower index first.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .crc import DEFAULT_SPECS, CrcSpec

DEFAULT_DESIGN_SNR_DB = 2.0

# ln(phi(10)) on the asymptotic branch; crossover point of the two-piece
# approximation of the LLR-mean degradation function.
_LN_PHI_10 = -2.5 + 0.5 * math.log(math.pi / 10.0) + math.log1p(-10.0 / 70.0)


def _phi_ln(m: float) -> float:
    """log of the mean-degradation function phi(m), stable for large m."""
    if m < 10.0:
        return 0.0218 - 0.4527 * m**0.86
    return -0.25 * m + 0.5 * math.log(math.pi / m) + math.log1p(-10.0 / (7.0 * m))


def _phi_inv_ln(t: float) -> float:
    """Inverse of ``_phi_ln`` (t = ln phi, t <= ~0.0218)."""
    if t > _LN_PHI_10:
        if t >= 0.0218:
            return 0.0
        return ((0.0218 - t) / 0.4527) ** (1.0 / 0.86)
    m = max(-4.0 * t, 11.0)
    for _ in range(100):
        h = -0.25 * m + 0.5 * math.log(math.pi / m) + math.log1p(-10.0 / (7.0 * m)) - t
        dh = -0.25 - 0.5 / m + (10.0 / (7.0 * m * m)) / (1.0 - 10.0 / (7.0 * m))
        step = h / dh
        m -= step
        if m < 10.0:
            m = 10.0
        if abs(step) < 1e-10 * max(1.0, m):
            break
    return m


def _check_combine(m: float) -> float:
    """LLR mean after the check-node (less reliable) polarization step."""
    lp = _phi_ln(m)
    t = lp + math.log(2.0 - math.exp(lp))
    return _phi_inv_ln(t)


@lru_cache(maxsize=32)
def _reliability_order(n_bits: int, design_snr_db: float) -> np.ndarray:
    """Bit-channel indices sorted least reliable first (ties: lower index).

    A fixed total order per (length, design SNR): the code dimension never
    enters, so shrinking k only moves the frozen cutoff. The design SNR is
    the per-symbol SNR of the BPSK/AWGN design channel, giving a channel
    LLR mean of ``4 * 10^(snr/10)``.
    """
    means = np.array([4.0 * 10.0 ** (design_snr_db / 10.0)], dtype=np.float64)
    while means.size < n_bits:
        nxt = np.empty(2 * means.size, dtype=np.float64)
        for i, m in enumerate(means):
            nxt[2 * i] = _check_combine(float(m))
            nxt[2 * i + 1] = 2.0 * m
        means = nxt
    order = np.lexsort((np.arange(n_bits), means))
    order.setflags(write=False)
    return order


def _validate_length(n_bits: int) -> None:
    if n_bits < 2 or n_bits & (n_bits - 1):
        raise ValueError(f"code length must be a power of two >= 2, got {n_bits}")


def build_frozen_set(n_bits: int, k_code: int, design_snr_db: float = DEFAULT_DESIGN_SNR_DB) -> np.ndarray:
    """Boolean mask of length ``n_bits`` with the ``n_bits - k_code`` least
    reliable positions frozen (True)."""
    _validate_length(n_bits)
    if not 0 <= k_code <= n_bits:
        raise ValueError(f"k_code must be in [0, {n_bits}], got {k_code}")
    order = _reliability_order(n_bits, float(design_snr_db))
    frozen = np.zeros(n_bits, dtype=bool)
    frozen[order[: n_bits - k_code]] = True
    return frozen


@dataclass
class PolarCode:
    """An (n_bits, k_code) polar code, optionally CRC-concatenated.

    With a CRC attached, ``k_code = k_info + crc.width`` information
    positions carry the payload plus checksum, so the overall system rate
    stays ``k_info / n_bits``.
    """

    n_bits: int
    frozen: np.ndarray
    k_code: int
    crc: CrcSpec | None = None
    systematic: bool = True
    design_snr_db: float = DEFAULT_DESIGN_SNR_DB
    info_positions: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        _validate_length(self.n_bits)
        self.frozen = np.asarray(self.frozen, dtype=bool)
        if self.frozen.shape != (self.n_bits,):
            raise ValueError("frozen mask length must equal the code length")
        if int((~self.frozen).sum()) != self.k_code:
            raise ValueError("frozen mask must leave exactly k_code information positions")
        if self.crc is not None and self.k_code < self.crc.width + 1:
            raise ValueError("code dimension too small for the attached CRC")
        self.info_positions = np.flatnonzero(~self.frozen)
        self.info_positions.setflags(write=False)

    @property
    def k_info(self) -> int:
        return self.k_code - (self.crc.width if self.crc is not None else 0)

    @property
    def n(self) -> int:
        return self.n_bits.bit_length() - 1


def build_code(
    n_bits: int,
    k_info: int,
    crc: CrcSpec | int | None = None,
    design_snr_db: float = DEFAULT_DESIGN_SNR_DB,
    systematic: bool = True,
) -> PolarCode:
    """Construct a code carrying ``k_info`` payload bits.

    ``crc`` may be a CrcSpec, a default width (8 or 32), or None; the polar
    code rate is raised to fit checksum bits alongside the payload.
    """
    if isinstance(crc, int):
        if crc == 0:
            crc = None
        else:
            try:
                crc = DEFAULT_SPECS[crc]
            except KeyError:
                raise ValueError(f"no default CRC of width {crc}; pass a CrcSpec") from None
    k_code = k_info + (crc.width if crc is not None else 0)
    if k_info < 1 or k_code > n_bits:
        raise ValueError(
            f"invalid dimensions: k_info={k_info} plus CRC exceeds n_bits={n_bits}"
        )
    frozen = build_frozen_set(n_bits, k_code, design_snr_db)
    return PolarCode(
        n_bits=n_bits,
        frozen=frozen,
        k_code=k_code,
        crc=crc,
        systematic=systematic,
        design_snr_db=design_snr_db,
    )


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def _crc_to_dict(spec: CrcSpec) -> dict:
    return {
        "width": spec.width,
        "poly_hex": f"0x{spec.poly:0{(spec.width + 3) // 4}X}",
        "init_hex": f"0x{spec.init:0{(spec.width + 3) // 4}X}",
        "xorout_hex": f"0x{spec.xorout:0{(spec.width + 3) // 4}X}",
        "reflect_in": spec.reflect_in,
        "reflect_out": spec.reflect_out,
    }


def _crc_from_dict(d: dict) -> CrcSpec:
    return CrcSpec(
        width=int(d["width"]),
        poly=int(d["poly_hex"], 16),
        init=int(d.get("init_hex", "0x0"), 16),
        xorout=int(d.get("xorout_hex", "0x0"), 16),
        reflect_in=bool(d.get("reflect_in", False)),
        reflect_out=bool(d.get("reflect_out", False)),
    )


def code_to_dict(code: PolarCode) -> dict:
    """JSON-ready description; the frozen mask is hex-packed MSB-first."""
    packed = np.packbits(code.frozen.astype(np.uint8))
    return {
        "n": code.n_bits,
        "k_info": code.k_info,
        "crc": None if code.crc is None else _crc_to_dict(code.crc),
        "design_snr_db": code.design_snr_db,
        "systematic": code.systematic,
        "frozen_hex": packed.tobytes().hex(),
    }


def code_from_dict(d: dict) -> PolarCode:
    n_bits = int(d["n"])
    crc = None if d.get("crc") is None else _crc_from_dict(d["crc"])
    packed = np.frombuffer(bytes.fromhex(d["frozen_hex"]), dtype=np.uint8)
    frozen = np.unpackbits(packed, count=n_bits).astype(bool)
    k_code = int(d["k_info"]) + (crc.width if crc is not None else 0)
    return PolarCode(
        n_bits=n_bits,
        frozen=frozen,
        k_code=k_code,
        crc=crc,
        systematic=bool(d.get("systematic", True)),
        design_snr_db=float(d.get("design_snr_db", DEFAULT_DESIGN_SNR_DB)),
    )


def save_code(code: PolarCode, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(code_to_dict(code), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_code(path: str) -> PolarCode:
    with open(path) as fh:
        return code_from_dict(json.load(fh))
