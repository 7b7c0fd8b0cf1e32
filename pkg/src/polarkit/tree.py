"""Pruned decoder trees.

Recursion over a code's binary tree stops at the shallowest node whose
span matches a leaf kind from the chosen repertoire, so the tree is
minimal for that repertoire. Node data lives in flat arrays (preorder)
for the decoding kernels.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum

import numpy as np

from . import _kernels
from .construction import PolarCode


class NodeKind(IntEnum):
    RATE0 = _kernels.RATE0
    RATE1 = _kernels.RATE1
    REP = _kernels.REP
    SPC = _kernels.SPC
    RATER = _kernels.RATER


SSC_REPERTOIRE = frozenset({NodeKind.RATE0, NodeKind.RATE1, NodeKind.RATER})
FAST_SSC_REPERTOIRE = frozenset(
    {NodeKind.RATE0, NodeKind.RATE1, NodeKind.REP, NodeKind.SPC, NodeKind.RATER}
)


@dataclass
class DecoderTree:
    code: PolarCode
    repertoire: frozenset
    max_leaf_size: int | None
    kind: np.ndarray = field(repr=False)
    start: np.ndarray = field(repr=False)
    size: np.ndarray = field(repr=False)
    left: np.ndarray = field(repr=False)
    right: np.ndarray = field(repr=False)
    level: np.ndarray = field(repr=False)
    side: np.ndarray = field(repr=False)

    @property
    def node_count(self) -> int:
        return int(self.kind.size)

    @property
    def n(self) -> int:
        return self.code.n

    def leaves(self) -> list[tuple[NodeKind, int, int]]:
        """(kind, start, size) for every leaf, in span order."""
        out = [
            (NodeKind(int(k)), int(s), int(z))
            for k, s, z in zip(self.kind, self.start, self.size)
            if k != NodeKind.RATER
        ]
        out.sort(key=lambda t: t[1])
        return out

    def max_rate1_span(self) -> int:
        spans = self.size[self.kind == NodeKind.RATE1]
        return int(spans.max()) if spans.size else 0


def _classify(frozen: np.ndarray, start: int, size: int, repertoire, cap: int | None):
    piece = frozen[start : start + size]
    nf = int(piece.sum())
    if nf == size:
        return NodeKind.RATE0
    if nf == 0 and (cap is None or size <= cap):
        return NodeKind.RATE1
    if NodeKind.REP in repertoire and nf == size - 1 and not piece[-1]:
        return NodeKind.REP
    if NodeKind.SPC in repertoire and nf == 1 and piece[0]:
        return NodeKind.SPC
    return None


def build_decoder_tree(
    code: PolarCode,
    repertoire: frozenset = FAST_SSC_REPERTOIRE,
    max_leaf_size: int | None = None,
) -> DecoderTree:
    """Minimal pruned tree for the repertoire.

    ``max_leaf_size`` caps rate-1 leaves only (it bounds the candidate
    search span in list decoding); None leaves them unbounded.
    """
    repertoire = frozenset(NodeKind(k) for k in repertoire)
    if not {NodeKind.RATE0, NodeKind.RATE1, NodeKind.RATER} <= repertoire:
        raise ValueError("repertoire must include rate-0, rate-1, and rate-R kinds")
    if max_leaf_size is not None and max_leaf_size < 1:
        raise ValueError("max_leaf_size must be at least 1")

    kinds: list[int] = []
    starts: list[int] = []
    sizes: list[int] = []
    lefts: list[int] = []
    rights: list[int] = []
    levels: list[int] = []
    sides: list[int] = []

    def build(start: int, size: int, level: int, side: int) -> int:
        idx = len(kinds)
        k = _classify(code.frozen, start, size, repertoire, max_leaf_size)
        kinds.append(int(k) if k is not None else int(NodeKind.RATER))
        starts.append(start)
        sizes.append(size)
        lefts.append(-1)
        rights.append(-1)
        levels.append(level)
        sides.append(side)
        if k is None:
            h = size // 2
            lefts[idx] = build(start, h, level + 1, 0)
            rights[idx] = build(start + h, h, level + 1, 1)
        return idx

    build(0, code.n_bits, 0, 0)
    return DecoderTree(
        code=code,
        repertoire=repertoire,
        max_leaf_size=max_leaf_size,
        kind=np.array(kinds, dtype=np.int64),
        start=np.array(starts, dtype=np.int64),
        size=np.array(sizes, dtype=np.int64),
        left=np.array(lefts, dtype=np.int64),
        right=np.array(rights, dtype=np.int64),
        level=np.array(levels, dtype=np.int64),
        side=np.array(sides, dtype=np.int64),
    )
