"""List decoding.

``SscListDecoder`` runs the pruned-tree list decoder: rate-R nodes update
every path's soft values, rate-0 nodes emit zeros without touching path
reliabilities, and each rate-1 node generates candidate forks by flipping
one or two of the ``c`` least reliable bits of every path's bit-wise ML
decision, keeping the ``L`` most reliable hypotheses overall.

``ScListDecoder`` is the classic bit-by-bit list decoder over the full
tree, kept as a reference for cross-checks. Its path reliability also
accumulates the chosen-bit log-likelihood at frozen leaves, which the
pruned decoder never visits; the two metrics therefore agree statistically
rather than bit-exactly.

Fork bookkeeping is deliberately small: a candidate is just (source path,
reliability, bitsToFlip). Ties order by reliability, then lower source
path id, then lexicographically smaller flip set.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .codec import info_from_codeword
from .construction import PolarCode
from .crc import CrcSpec, crc_check
from .sc import _as_flat_alpha
from .tree import DecoderTree, NodeKind, SSC_REPERTOIRE, build_decoder_tree


# ---------------------------------------------------------------------------
# rate-1 candidate machinery (also exercised directly by tests)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CandidateFork:
    source: int
    reliability: float
    bits_to_flip: tuple[int, ...]


def rate1_ml(alpha: np.ndarray, path_reliability: float = 0.0):
    """Bit-wise ML decision of a rate-1 node.

    Returns (beta, per-bit reliabilities, updated path reliability).
    """
    alpha = np.asarray(alpha, dtype=np.float64).reshape(-1, 2)
    beta = (alpha[:, 1] > alpha[:, 0]).astype(np.uint8)
    r = np.abs(alpha[:, 0] - alpha[:, 1])
    r_path = float(path_reliability) + float(np.maximum(alpha[:, 0], alpha[:, 1]).sum())
    return beta, r, r_path


class CandidateSet:
    """Reliability-ordered multiset of forks (binary heap underneath).

    Insert, delete-min, and min queries are O(log size); the set may
    transiently hold more than the list size during the append phase.
    """

    def __init__(self, capacity: int = 64):
        self._alloc(capacity)
        self.count = 0

    def _alloc(self, capacity: int):
        self.capacity = capacity
        self._R = np.empty(capacity, dtype=np.float64)
        self._src = np.empty(capacity, dtype=np.int64)
        self._f1 = np.empty(capacity, dtype=np.int64)
        self._f2 = np.empty(capacity, dtype=np.int64)

    def _grow(self, need: int):
        if need <= self.capacity:
            return
        old = (self._R, self._src, self._f1, self._f2)
        self._alloc(max(need, 2 * self.capacity))
        for dst, src in zip((self._R, self._src, self._f1, self._f2), old):
            dst[: self.count] = src[: self.count]

    @staticmethod
    def _norm_flips(bits_to_flip) -> tuple[int, int]:
        flips = sorted(int(b) for b in bits_to_flip)
        if not 1 <= len(flips) <= 2 or len(set(flips)) != len(flips):
            raise ValueError("bitsToFlip must hold one or two distinct indices")
        return (flips[0], flips[1] if len(flips) == 2 else -1)

    def insert(self, source: int, reliability: float, bits_to_flip) -> None:
        f1, f2 = self._norm_flips(bits_to_flip)
        self._grow(self.count + 1)
        self.count = int(
            _kernels._heap_push(
                self._R, self._src, self._f1, self._f2, self.count,
                float(reliability), int(source), f1, f2,
            )
        )

    def min_reliability(self) -> float:
        if self.count == 0:
            raise ValueError("candidate set is empty")
        return float(self._R[0])

    def delete_min(self) -> CandidateFork:
        fork = self._peek_min()
        self.count = int(
            _kernels._heap_pop(self._R, self._src, self._f1, self._f2, self.count)
        )
        return fork

    def _peek_min(self) -> CandidateFork:
        if self.count == 0:
            raise ValueError("candidate set is empty")
        flips = (int(self._f1[0]),) if self._f2[0] < 0 else (int(self._f1[0]), int(self._f2[0]))
        return CandidateFork(int(self._src[0]), float(self._R[0]), flips)

    def __len__(self) -> int:
        return self.count


def _selected_weakest(r: np.ndarray, c: int):
    span = r.size
    rs = np.empty(span, dtype=np.float64)
    ridx = np.empty(span, dtype=np.int64)
    _kernels.select_weakest(np.asarray(r, dtype=np.float64), span, c, rs, ridx)
    return rs, ridx


def append_candidates(
    cset: CandidateSet, source: int, r_path: float, r: np.ndarray, c: int
) -> None:
    """Insert all 1-bit and 2-bit forks over the ``c`` weakest bits, unfiltered."""
    c = min(int(c), int(np.asarray(r).size))
    if c <= 0:
        return
    rs, ridx = _selected_weakest(r, c)
    cset._grow(cset.count + c + c * (c - 1) // 2)
    cset.count = int(
        _kernels.append_forks(
            cset._R, cset._src, cset._f1, cset._f2, cset.count,
            int(source), float(r_path), rs, ridx, c,
        )
    )


def replace_candidates(
    cset: CandidateSet, source: int, r_path: float, r: np.ndarray, c: int
) -> None:
    """Insert only forks more reliable than the set minimum, evicting it
    per accepted insertion (count is conserved)."""
    c = min(int(c), int(np.asarray(r).size))
    if c <= 0 or cset.count == 0:
        return
    rs, ridx = _selected_weakest(r, c)
    cset._grow(cset.count + 1)
    cset.count = int(
        _kernels.replace_forks(
            cset._R, cset._src, cset._f1, cset._f2, cset.count,
            int(source), float(r_path), rs, ridx, c,
        )
    )


def merge_best_candidates(
    ml_reliabilities, cset: CandidateSet, list_size: int
) -> list[CandidateFork]:
    """The ``list_size`` most reliable entries among ML decisions and forks.

    ML decisions are reported with an empty flip tuple. Consumes the set.
    """
    src_r = np.asarray(ml_reliabilities, dtype=np.float64)
    n_src = src_r.size
    nd_cap = max(cset.count, 1)
    dR = np.empty(nd_cap, dtype=np.float64)
    dS = np.empty(nd_cap, dtype=np.int64)
    d1 = np.empty(nd_cap, dtype=np.int64)
    d2 = np.empty(nd_cap, dtype=np.int64)
    nd = int(
        _kernels.drain_heap(cset._R, cset._src, cset._f1, cset._f2, cset.count, dR, dS, d1, d2)
    )
    cset.count = 0
    cap = max(int(list_size), 1)
    svR = np.empty(cap, dtype=np.float64)
    svS = np.empty(cap, dtype=np.int64)
    sv1 = np.empty(cap, dtype=np.int64)
    sv2 = np.empty(cap, dtype=np.int64)
    si = np.empty(max(n_src, 1), dtype=np.int64)
    n_sv = int(
        _kernels.merge_ranked(src_r, n_src, dR, dS, d1, d2, nd, int(list_size), svR, svS, sv1, sv2, si)
    )
    out = []
    for j in range(n_sv):
        if sv1[j] < 0:
            flips: tuple[int, ...] = ()
        elif sv2[j] < 0:
            flips = (int(sv1[j]),)
        else:
            flips = (int(sv1[j]), int(sv2[j]))
        out.append(CandidateFork(int(svS[j]), float(svR[j]), flips))
    return out


# ---------------------------------------------------------------------------
# decoders
# ---------------------------------------------------------------------------


class _ListWorkspace:
    def __init__(self, n_bits: int, list_size: int, heap_cap: int):
        n = n_bits.bit_length() - 1
        self.n = n
        self.n_bits = n_bits
        self.L = list_size
        a_slots = list_size + 2
        b_slots = 2 * list_size + 2
        self.pabase = np.empty(n + 1, dtype=np.int64)
        self.pbbase = np.empty(n + 1, dtype=np.int64)
        ai = bi = 0
        for lev in range(n + 1):
            self.pabase[lev] = ai
            self.pbbase[lev] = bi
            # level 0 alpha is the read-only channel input: one slot only
            ai += n_bits if lev == 0 else a_slots * (n_bits >> lev)
            bi += b_slots * 2 * (n_bits >> lev)
        self.APOOL = np.empty(2 * ai, dtype=np.float64)
        self.BPOOL = np.empty(bi, dtype=np.int8)
        self.AREF = np.zeros((n + 1, a_slots), dtype=np.int64)
        self.BREF = np.zeros((n + 1, b_slots), dtype=np.int64)
        self.ASLOT = np.full((list_size, n + 1), -1, dtype=np.int64)
        self.BSLOT = np.full((list_size, n + 1), -1, dtype=np.int64)
        self.ASLOT_NEW = np.empty_like(self.ASLOT)
        self.BSLOT_NEW = np.empty_like(self.BSLOT)
        self.R = np.empty(list_size, dtype=np.float64)
        self.srcR = np.empty(list_size, dtype=np.float64)
        self.hR = np.empty(heap_cap, dtype=np.float64)
        self.hS = np.empty(heap_cap, dtype=np.int64)
        self.h1 = np.empty(heap_cap, dtype=np.int64)
        self.h2 = np.empty(heap_cap, dtype=np.int64)
        self.dR = np.empty(heap_cap, dtype=np.float64)
        self.dS = np.empty(heap_cap, dtype=np.int64)
        self.d1 = np.empty(heap_cap, dtype=np.int64)
        self.d2 = np.empty(heap_cap, dtype=np.int64)
        self.svR = np.empty(list_size, dtype=np.float64)
        self.svS = np.empty(list_size, dtype=np.int64)
        self.sv1 = np.empty(list_size, dtype=np.int64)
        self.sv2 = np.empty(list_size, dtype=np.int64)
        self.si = np.empty(list_size, dtype=np.int64)
        self.stk = np.empty((n + 2, 3), dtype=np.int64)
        self.perm = np.empty(list_size, dtype=np.int64)
        self.out_x = np.empty((list_size, n_bits), dtype=np.int8)
        self.out_R = np.empty(list_size, dtype=np.float64)


class SscListDecoder:
    """Pruned-tree list decoder with Chase-style rate-1 forking."""

    def __init__(self, tree: DecoderTree, list_size: int, constraint: int = 8):
        if list_size < 1:
            raise ValueError("list size must be at least 1")
        if constraint < 1:
            raise ValueError("flip-search constraint must be at least 1")
        if bool(np.isin(tree.kind, (int(NodeKind.REP), int(NodeKind.SPC))).any()):
            raise ValueError(
                "list decoding needs a tree with only rate-0/rate-1/rate-R nodes"
            )
        self.tree = tree
        self.code = tree.code
        self.list_size = list_size
        self.constraint = constraint
        mc = min(constraint, max(tree.max_rate1_span(), 1))
        heap_cap = list_size + mc + mc * (mc - 1) // 2 + 2
        self._ws = _ListWorkspace(self.code.n_bits, list_size, heap_cap)
        self._rbuf = np.empty(self.code.n_bits, dtype=np.float64)
        self._rs = np.empty(self.code.n_bits, dtype=np.float64)
        self._ridx = np.empty(self.code.n_bits, dtype=np.int64)

    def decode(self, alpha) -> tuple[np.ndarray, np.ndarray]:
        """Returns (candidate codewords, reliabilities), best first."""
        flat = _as_flat_alpha(alpha, self.code.n_bits)
        t, w = self.tree, self._ws
        n_out = _kernels.ssc_list_decode_kernel(
            t.kind, t.start, t.size, t.left, t.right, t.level, t.side,
            flat, w.n, w.n_bits, self.list_size, self.constraint,
            w.pabase, w.pbbase, w.APOOL, w.BPOOL, w.AREF, w.BREF,
            w.ASLOT, w.BSLOT, w.ASLOT_NEW, w.BSLOT_NEW,
            w.R, w.srcR, self._rbuf, self._rs, self._ridx,
            w.hR, w.hS, w.h1, w.h2, w.dR, w.dS, w.d1, w.d2,
            w.svR, w.svS, w.sv1, w.sv2, w.si,
            w.stk, w.perm, w.out_x, w.out_R,
        )
        return (
            w.out_x[:n_out].astype(np.uint8),
            w.out_R[:n_out].copy(),
        )


class ScListDecoder:
    """Classic bit-by-bit list decoder (reference implementation)."""

    def __init__(self, code: PolarCode, list_size: int):
        if list_size < 1:
            raise ValueError("list size must be at least 1")
        self.code = code
        self.list_size = list_size
        self._ws = _ListWorkspace(code.n_bits, list_size, list_size + 2)
        self._frozen = code.frozen.astype(np.uint8)

    def decode(self, alpha) -> tuple[np.ndarray, np.ndarray]:
        """Returns (candidate codewords, reliabilities), best first."""
        flat = _as_flat_alpha(alpha, self.code.n_bits)
        w = self._ws
        n_out = _kernels.sc_list_decode_kernel(
            self._frozen, flat, w.n, self.list_size,
            w.pabase, w.pbbase, w.APOOL, w.BPOOL, w.AREF, w.BREF,
            w.ASLOT, w.BSLOT, w.ASLOT_NEW, w.BSLOT_NEW,
            w.R, w.srcR,
            w.hR, w.hS, w.h1, w.h2, w.dR, w.dS, w.d1, w.d2,
            w.svR, w.svS, w.sv1, w.sv2, w.si,
            w.stk, w.perm, w.out_x, w.out_R,
        )
        return (
            w.out_x[:n_out].astype(np.uint8),
            w.out_R[:n_out].copy(),
        )


def ssc_list_decode(
    tree: DecoderTree, alpha, list_size: int, constraint: int = 8
) -> list[tuple[np.ndarray, float]]:
    """Candidate information blocks with reliabilities, best first."""
    if list_size < 1:
        raise ValueError("list size must be at least 1")
    dec = SscListDecoder(tree, list_size, constraint)
    xs, rs = dec.decode(alpha)
    code = tree.code
    return [(info_from_codeword(code, x), float(r)) for x, r in zip(xs, rs)]


def sc_list_decode(code: PolarCode, alpha, list_size: int) -> list[tuple[np.ndarray, float]]:
    """Reference list decoder's candidates, best first."""
    dec = ScListDecoder(code, list_size)
    xs, rs = dec.decode(alpha)
    return [(info_from_codeword(code, x), float(r)) for x, r in zip(xs, rs)]


def select_output(
    candidates: list[tuple[np.ndarray, float]], crc: CrcSpec
) -> tuple[np.ndarray, bool]:
    """Most reliable candidate passing the CRC; falls back to the most
    reliable overall (flagged) when none passes."""
    if not candidates:
        raise ValueError("candidate list is empty")
    for info, _ in candidates:
        if crc_check(info, crc):
            return info, True
    return candidates[0][0], False


def default_list_tree(code: PolarCode, max_leaf_size: int | None = None) -> DecoderTree:
    return build_decoder_tree(code, SSC_REPERTOIRE, max_leaf_size)
