"""Two-stage adaptive decoding.

Every frame first runs the fast single-pass decoder; only when the CRC
rejects its output does the list decoder run, directly at the full list
size. Worst-case latency is therefore one fast pass plus one list pass.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .codec import info_from_codeword
from .construction import PolarCode
from .crc import crc_check
from .list_decoder import SscListDecoder, select_output
from .sc import FastSscDecoder
from .tree import SSC_REPERTOIRE, DecoderTree, build_decoder_tree


@dataclass
class AdaptiveResult:
    info_bits: np.ndarray
    stage: str  # "fast_ssc" | "list"
    crc_ok: bool
    elapsed_s: float


class AdaptiveDecoder:
    """Owns both stages' decoder state for one code."""

    def __init__(
        self,
        code: PolarCode,
        list_size: int,
        constraint: int = 8,
        tree_fast: DecoderTree | None = None,
        tree_list: DecoderTree | None = None,
    ):
        if code.crc is None:
            raise ValueError("adaptive decoding requires a code with a CRC")
        if list_size < 2:
            raise ValueError("adaptive decoding needs a list size of at least 2")
        self.code = code
        self.list_size = list_size
        self.constraint = constraint
        tree_fast = tree_fast if tree_fast is not None else build_decoder_tree(code)
        tree_list = (
            tree_list
            if tree_list is not None
            else build_decoder_tree(code, SSC_REPERTOIRE)
        )
        self._fast = FastSscDecoder(tree_fast)
        self._list = SscListDecoder(tree_list, list_size, constraint)

    def decode(self, alpha) -> AdaptiveResult:
        t0 = time.perf_counter()
        x, _ = self._fast.decode(alpha)
        info = info_from_codeword(self.code, x)
        if crc_check(info, self.code.crc):
            return AdaptiveResult(info, "fast_ssc", True, time.perf_counter() - t0)
        xs, rs = self._list.decode(alpha)
        cands = [(info_from_codeword(self.code, xc), float(r)) for xc, r in zip(xs, rs)]
        info, ok = select_output(cands, self.code.crc)
        return AdaptiveResult(info, "list", ok, time.perf_counter() - t0)


def adaptive_decode(
    code: PolarCode,
    tree_fast: DecoderTree,
    tree_list: DecoderTree,
    alpha,
    list_size: int,
    constraint: int = 8,
) -> AdaptiveResult:
    dec = AdaptiveDecoder(
        code, list_size, constraint, tree_fast=tree_fast, tree_list=tree_list
    )
    return dec.decode(alpha)


def predict_throughput(
    k_info: int, fer_fast: float, lat_fast: float, lat_list: float
) -> float:
    """Average information throughput of the two-stage decoder, in bit/s:
    ``k / ((1 - FER_F) * lat_fast + FER_F * lat_list)``."""
    if not 0.0 <= fer_fast <= 1.0:
        raise ValueError("fer_fast must be a probability")
    if lat_fast <= 0.0 or lat_list <= 0.0:
        raise ValueError("latencies must be positive")
    return k_info / ((1.0 - fer_fast) * lat_fast + fer_fast * lat_list)
