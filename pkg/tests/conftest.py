"""Shared test oracles, implemented independently of the package kernels."""

import numpy as np
import pytest

import polarkit as pk


def bec_bhattacharyya_order(n_bits: int) -> np.ndarray:
    """Erasure-channel parameter recursion (z=0.5 start), natural order.

    Returns indices sorted least reliable first; the package's ranking must
    preserve this order for small sizes.
    """
    z = np.array([0.5])
    while z.size < n_bits:
        nxt = np.empty(2 * z.size)
        nxt[0::2] = 2 * z - z * z
        nxt[1::2] = z * z
        z = nxt
    return np.lexsort((np.arange(n_bits), -z))


def gf2_generator(n_bits: int) -> np.ndarray:
    """Kronecker-power generator matrix, built directly."""
    f2 = np.array([[1, 0], [1, 1]], dtype=np.uint8)
    g = np.array([[1]], dtype=np.uint8)
    while g.shape[0] < n_bits:
        g = np.kron(g, f2)
    return g


def matrix_encode(u: np.ndarray, n_bits: int) -> np.ndarray:
    return (np.asarray(u, dtype=np.uint8) @ gf2_generator(n_bits)) % 2


def codeword_score(alpha: np.ndarray, x: np.ndarray) -> float:
    """Sum of the chosen-value channel log-likelihoods."""
    alpha = np.asarray(alpha, dtype=float).reshape(-1, 2)
    return float(alpha[np.arange(alpha.shape[0]), np.asarray(x, dtype=int)].sum())


def exhaustive_ml(code, alpha):
    """Best codeword by channel score over all information patterns.

    Returns (codeword, score, runner_up_gap). A zero gap means a tie.
    """
    k = code.k_code
    best_x, best, second = None, -np.inf, -np.inf
    for m in range(1 << k):
        u = np.zeros(code.n_bits, dtype=np.uint8)
        u[code.info_positions] = [(m >> i) & 1 for i in range(k)]
        x = matrix_encode(u, code.n_bits)
        s = codeword_score(alpha, x)
        if s > best:
            best_x, second, best = x, best, s
        elif s > second:
            second = s
    return best_x, best, best - second


def _f_ref(a, b):
    return (
        max(a[0] + b[0], a[1] + b[1]),
        max(a[0] + b[1], a[1] + b[0]),
    )


def _g_ref(a, b, u):
    if u:
        return (a[1] + b[0], a[0] + b[1])
    return (a[0] + b[0], a[1] + b[1])


def forced_path_score(frozen: np.ndarray, alpha, u: np.ndarray) -> float:
    """Reliability of a fully forced decision path: the max-log recursion is
    replayed with every source bit pinned to ``u`` and the chosen-value
    log-likelihood summed at every leaf (frozen ones included)."""
    alpha = [tuple(p) for p in np.asarray(alpha, dtype=float).reshape(-1, 2)]
    u = np.asarray(u, dtype=int)
    total = 0.0

    def walk(a, start):
        nonlocal total
        if len(a) == 1:
            bit = int(u[start])
            total += a[0][bit]
            return [bit]
        h = len(a) // 2
        bl = walk([_f_ref(a[i], a[h + i]) for i in range(h)], start)
        br = walk([_g_ref(a[i], a[h + i], bl[i]) for i in range(h)], start + h)
        return [bl[i] ^ br[i] for i in range(h)] + br

    walk(alpha, 0)
    return total


def replay_list_reliability(tree, alpha, x: np.ndarray) -> float:
    """Recompute a pruned-tree path reliability from its codeword.

    Forces every node's output to the matching chunk of ``x`` and sums the
    chosen-value soft values over rate-1 leaves only (rate-0 contributes
    nothing, matching the decoder's metric).
    """
    alpha = [tuple(p) for p in np.asarray(alpha, dtype=float).reshape(-1, 2)]
    x = np.asarray(x, dtype=int)
    kinds = tree.kind
    total = 0.0

    def beta_of(start, size):
        return list(x[start : start + size])

    def walk(node, a):
        nonlocal total
        k = int(kinds[node])
        start = int(tree.start[node])
        size = int(tree.size[node])
        if k == int(pk.NodeKind.RATE1):
            beta = beta_of(start, size)
            total += sum(a[i][beta[i]] for i in range(size))
            return
        if k != int(pk.NodeKind.RATER):
            return
        h = size // 2
        lc, rc = int(tree.left[node]), int(tree.right[node])
        if int(kinds[lc]) != int(pk.NodeKind.RATE0):
            walk(lc, [_f_ref(a[i], a[h + i]) for i in range(h)])
        bl = [x[start + i] ^ x[start + h + i] for i in range(h)]
        walk(rc, [_g_ref(a[i], a[h + i], bl[i]) for i in range(h)])

    walk(0, alpha)
    return total


def noisy_frame(code, sigma: float, rng, systematic=None):
    """Random encoded frame plus its soft channel output."""
    if systematic is None:
        systematic = code.systematic
    if systematic:
        info = rng.integers(0, 2, code.k_code, dtype=np.uint8)
        x = pk.encode_systematic(code, info)
    else:
        u = np.zeros(code.n_bits, dtype=np.uint8)
        u[code.info_positions] = rng.integers(0, 2, code.k_code)
        x = pk.encode_nonsystematic(code, u)
    y = (1.0 - 2.0 * x.astype(float)) + rng.normal(0.0, sigma, code.n_bits)
    return x, pk.channel_ll(y, sigma)


@pytest.fixture
def rng():
    return np.random.default_rng(0x5EED)
