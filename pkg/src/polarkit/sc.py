"""Soft-value arithmetic and the single-path decoders.

Soft values are log-likelihood pairs ``(ll0, ll1)``; combining uses the
max-log approximation, and every decision threshold resolves exact ties
to bit 0.
"""

from __future__ import annotations

import numpy as np

from . import _kernels
from .codec import info_from_codeword, polar_transform
from .construction import PolarCode
from .tree import DecoderTree, build_decoder_tree


def channel_ll(y, sigma: float) -> np.ndarray:
    """BPSK AWGN log-likelihood pairs; bit 0 is sent as +1, bit 1 as -1.

    Scalar input gives shape (2,), a length-N vector gives (N, 2).
    """
    if sigma <= 0:
        raise ValueError(f"noise standard deviation must be positive, got {sigma}")
    arr = np.atleast_1d(np.asarray(y, dtype=np.float64))
    out = np.empty(2 * arr.size, dtype=np.float64)
    _kernels.channel_ll_kernel(arr, float(sigma), out)
    out = out.reshape(-1, 2)
    return out[0] if np.isscalar(y) or np.ndim(y) == 0 else out


def f_combine(a, b) -> np.ndarray:
    """Check-node update of two soft pairs (max-log)."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    out = np.empty(np.broadcast(a, b).shape, dtype=np.float64)
    out[..., 0] = np.maximum(a[..., 0] + b[..., 0], a[..., 1] + b[..., 1])
    out[..., 1] = np.maximum(a[..., 0] + b[..., 1], a[..., 1] + b[..., 0])
    return out


def g_combine(a, b, u) -> np.ndarray:
    """Variable-node update given the partial-sum bit ``u``."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    u = np.asarray(u)
    out = np.empty(np.broadcast(a, b).shape, dtype=np.float64)
    flip = u != 0
    a0 = np.where(flip, a[..., 1], a[..., 0])
    a1 = np.where(flip, a[..., 0], a[..., 1])
    out[..., 0] = a0 + b[..., 0]
    out[..., 1] = a1 + b[..., 1]
    return out


def _as_flat_alpha(alpha, n_bits: int) -> np.ndarray:
    alpha = np.ascontiguousarray(alpha, dtype=np.float64)
    if alpha.shape != (n_bits, 2):
        raise ValueError(f"soft input must have shape ({n_bits}, 2), got {alpha.shape}")
    return alpha.reshape(-1)


def _level_bases(n_bits: int):
    n = n_bits.bit_length() - 1
    abase = np.empty(n + 1, dtype=np.int64)
    bbase = np.empty(n + 1, dtype=np.int64)
    ai = bi = 0
    for lev in range(n + 1):
        abase[lev] = ai
        bbase[lev] = bi
        ai += n_bits >> lev
        bi += 2 * (n_bits >> lev)
    return n, abase, bbase, ai, bi


class ScDecoder:
    """Bit-by-bit successive cancellation; owns its scratch buffers."""

    def __init__(self, code: PolarCode):
        self.code = code
        n, self._abase, self._bbase, apairs, bbytes = _level_bases(code.n_bits)
        self._n = n
        self._frozen = code.frozen.astype(np.uint8)
        self._alev = np.empty(2 * apairs, dtype=np.float64)
        self._blev = np.empty(bbytes, dtype=np.int8)
        self._stk = np.empty((n + 2, 3), dtype=np.int64)
        self._u = np.empty(code.n_bits, dtype=np.uint8)
        self._x = np.empty(code.n_bits, dtype=np.uint8)

    def decode(self, alpha) -> tuple[np.ndarray, np.ndarray, int]:
        """Returns (source estimate, codeword, tie count)."""
        flat = _as_flat_alpha(alpha, self.code.n_bits)
        ties = _kernels.sc_decode_kernel(
            self._frozen, flat, self._n, self._abase, self._bbase,
            self._alev, self._blev, self._stk, self._u, self._x,
        )
        return self._u.copy(), self._x.copy(), int(ties)


class FastSscDecoder:
    """Single-pass decode over a pruned node tree."""

    def __init__(self, tree: DecoderTree):
        self.tree = tree
        self.code = tree.code
        n, self._abase, self._bbase, apairs, bbytes = _level_bases(self.code.n_bits)
        self._n = n
        self._alev = np.empty(2 * apairs, dtype=np.float64)
        self._blev = np.empty(bbytes, dtype=np.int8)
        self._stk = np.empty((n + 2, 2), dtype=np.int64)
        self._x = np.empty(self.code.n_bits, dtype=np.uint8)

    def decode(self, alpha) -> tuple[np.ndarray, int]:
        """Returns (codeword, tie count)."""
        flat = _as_flat_alpha(alpha, self.code.n_bits)
        t = self.tree
        ties = _kernels.fast_ssc_decode_kernel(
            t.kind, t.start, t.size, t.left, t.right, t.level, t.side,
            flat, self._n, self.code.n_bits, self._abase, self._bbase,
            self._alev, self._blev, self._stk, self._x,
        )
        return self._x.copy(), int(ties)


def sc_decode(code: PolarCode, alpha) -> np.ndarray:
    """Estimated source vector (frozen positions forced to 0)."""
    u, _, _ = ScDecoder(code).decode(alpha)
    return u


def fast_ssc_decode(tree: DecoderTree, alpha) -> tuple[np.ndarray, np.ndarray]:
    """Returns (codeword, information block)."""
    x, _ = FastSscDecoder(tree).decode(alpha)
    return x, info_from_codeword(tree.code, x)


def sc_info_bits(code: PolarCode, u: np.ndarray) -> np.ndarray:
    """Information block implied by a source estimate."""
    if code.systematic:
        return polar_transform(u)[code.info_positions]
    return np.asarray(u, dtype=np.uint8)[code.info_positions]


def default_fast_tree(code: PolarCode) -> DecoderTree:
    return build_decoder_tree(code)
