"""Hot decoding kernels.

Everything here is compiled with numba unless ``POLARKIT_NO_NUMBA=1`` is set
(see ``_backend``). The kernels operate on flat preallocated arrays so that
the same bodies run under both backends and allocate nothing per frame.

Notes
-----
Soft values are log-likelihood pairs: a flat float64 array where element
``i`` stores ``(ll0, ll1)`` at positions ``2*i`` and ``2*i + 1``.

Decoders walk the code's binary node tree with per-level scratch:

- alpha (soft input) of the active node at level ``lev`` lives in a buffer
  of ``N >> lev`` pairs;
- decided bits live in per-level buffers of shape ``(2, N >> lev)``: half 0
  holds the finished left child's bits, half 1 the right child's. A parent
  combines the two halves into its own slot in the level above, so the root
  buffer ends up holding the codeword.

List decoders keep one such buffer set per path, pooled and reference
counted: forking a path just bumps refcounts, and a write to a shared
buffer grabs a free slot first (copying only the half that is still live).

Tree node kinds use the integer codes RATE0..RATER below.
"""

from __future__ import annotations

import numpy as np

from ._backend import njit

RATE0 = 0
RATE1 = 1
REP = 2
SPC = 3
RATER = 4


# ---------------------------------------------------------------------------
# bit plumbing
# ---------------------------------------------------------------------------


@njit
def polar_transform_inplace(x):
    """Multiply a bit vector by the Kronecker-power generator, in place."""
    n = x.shape[0]
    m = 1
    while m < n:
        step = 2 * m
        for base in range(0, n, step):
            for i in range(base, base + m):
                x[i] ^= x[i + m]
        m = step


@njit
def crc_bits(bits, poly, width, init, refin, refout, xorout):
    """Bit-serial CRC with an MSB-first register.

    ``refin`` feeds each 8-bit group of the input in reversed order (the
    trailing partial group, if any, is reversed as well); ``refout``
    bit-reverses the final register. Works for widths up to 32.
    """
    mask = (1 << width) - 1
    reg = init & mask
    nbits = bits.shape[0]
    i = 0
    while i < nbits:
        if refin:
            g = 8 if nbits - i >= 8 else nbits - i
            for j in range(g - 1, -1, -1):
                t = ((reg >> (width - 1)) & 1) ^ bits[i + j]
                reg = (reg << 1) & mask
                if t != 0:
                    reg ^= poly
            i += g
        else:
            t = ((reg >> (width - 1)) & 1) ^ bits[i]
            reg = (reg << 1) & mask
            if t != 0:
                reg ^= poly
            i += 1
    if refout:
        rev = 0
        for j in range(width):
            rev = (rev << 1) | ((reg >> j) & 1)
        reg = rev
    return (reg ^ xorout) & mask


@njit
def channel_ll_kernel(y, sigma, out):
    """Per-sample BPSK log-likelihood pairs; bit 0 maps to +1, bit 1 to -1."""
    inv = 1.0 / (2.0 * sigma * sigma)
    for i in range(y.shape[0]):
        d0 = y[i] - 1.0
        d1 = y[i] + 1.0
        out[2 * i] = -d0 * d0 * inv
        out[2 * i + 1] = -d1 * d1 * inv


# ---------------------------------------------------------------------------
# single-path decoders
# ---------------------------------------------------------------------------
#
# Scratch layout shared by the single-path kernels:
#   alev  : flat float64, per-level alpha pairs; level lev starts at pair
#           offset abase[lev] and spans N >> lev pairs.
#   blev  : flat int8, per-level bit halves; level lev starts at byte
#           offset bbase[lev] and spans 2 * (N >> lev) bytes.


@njit
def _f_span(alev, src, dst, h):
    for i in range(h):
        a0 = alev[2 * (src + i)]
        a1 = alev[2 * (src + i) + 1]
        b0 = alev[2 * (src + h + i)]
        b1 = alev[2 * (src + h + i) + 1]
        s0 = a0 + b0
        s1 = a1 + b1
        o0 = s0 if s0 >= s1 else s1
        s0 = a0 + b1
        s1 = a1 + b0
        o1 = s0 if s0 >= s1 else s1
        alev[2 * (dst + i)] = o0
        alev[2 * (dst + i) + 1] = o1


@njit
def _g_span(alev, src, dst, h, blev, uoff):
    for i in range(h):
        a0 = alev[2 * (src + i)]
        a1 = alev[2 * (src + i) + 1]
        b0 = alev[2 * (src + h + i)]
        b1 = alev[2 * (src + h + i) + 1]
        if blev[uoff + i] == 0:
            alev[2 * (dst + i)] = a0 + b0
            alev[2 * (dst + i) + 1] = a1 + b1
        else:
            alev[2 * (dst + i)] = a1 + b0
            alev[2 * (dst + i) + 1] = a0 + b1


@njit
def sc_decode_kernel(frozen, alpha, n, abase, bbase, alev, blev, stk, u_out, x_out):
    """Bit-by-bit successive cancellation over the full code tree.

    Returns the number of exact soft-value ties hit at decision leaves.
    """
    nbits = frozen.shape[0]
    for i in range(2 * nbits):
        alev[i] = alpha[i]
    ties = 0
    # stack rows: level, start, state
    sp = 1
    stk[0, 0] = 0
    stk[0, 1] = 0
    stk[0, 2] = 0
    while sp > 0:
        lev = stk[sp - 1, 0]
        start = stk[sp - 1, 1]
        state = stk[sp - 1, 2]
        span = nbits >> lev
        side = (start >> (n - lev)) & 1
        if lev == n:
            a0 = alev[2 * abase[lev]]
            a1 = alev[2 * abase[lev] + 1]
            if frozen[start] != 0:
                bit = 0
            else:
                if a0 == a1:
                    ties += 1
                bit = 1 if a1 > a0 else 0
            u_out[start] = bit
            blev[bbase[lev] + side] = bit
            sp -= 1
        elif state == 0:
            _f_span(alev, abase[lev], abase[lev + 1], span >> 1)
            stk[sp - 1, 2] = 1
            stk[sp, 0] = lev + 1
            stk[sp, 1] = start
            stk[sp, 2] = 0
            sp += 1
        elif state == 1:
            h = span >> 1
            _g_span(alev, abase[lev], abase[lev + 1], h, blev, bbase[lev + 1])
            stk[sp - 1, 2] = 2
            stk[sp, 0] = lev + 1
            stk[sp, 1] = start + h
            stk[sp, 2] = 0
            sp += 1
        else:
            h = span >> 1
            src = bbase[lev + 1]
            dst = bbase[lev] + side * span
            for i in range(h):
                bl = blev[src + i]
                br = blev[src + h + i]
                blev[dst + i] = bl ^ br
                blev[dst + h + i] = br
            sp -= 1
    for i in range(nbits):
        x_out[i] = blev[bbase[0] + i]
    return ties


@njit
def fast_ssc_decode_kernel(
    kind, start, size, left, right, level, side,
    alpha, n, nbits, abase, bbase, alev, blev, stk, x_out,
):
    """Pruned-tree single-pass decode; writes the codeword into ``x_out``.

    Returns the number of exact decision ties hit in rate-1, repetition,
    and parity leaves (callers may exclude tied frames from equivalence
    checks).
    """
    for i in range(2 * nbits):
        alev[i] = alpha[i]
    ties = 0
    sp = 1
    stk[0, 0] = 0
    stk[0, 1] = 0
    while sp > 0:
        v = stk[sp - 1, 0]
        state = stk[sp - 1, 1]
        k = kind[v]
        lev = level[v]
        span = size[v]
        sd = side[v]
        boff = bbase[lev] + sd * span
        if k == RATER:
            h = span >> 1
            if state == 0:
                lc = left[v]
                if kind[lc] == RATE0:
                    for i in range(bbase[lev + 1], bbase[lev + 1] + h):
                        blev[i] = 0
                    stk[sp - 1, 1] = 1
                else:
                    _f_span(alev, abase[lev], abase[lev + 1], h)
                    stk[sp - 1, 1] = 1
                    stk[sp, 0] = lc
                    stk[sp, 1] = 0
                    sp += 1
            elif state == 1:
                rc = right[v]
                _g_span(alev, abase[lev], abase[lev + 1], h, blev, bbase[lev + 1])
                stk[sp - 1, 1] = 2
                stk[sp, 0] = rc
                stk[sp, 1] = 0
                sp += 1
            else:
                h = span >> 1
                src = bbase[lev + 1]
                for i in range(h):
                    bl = blev[src + i]
                    br = blev[src + h + i]
                    blev[boff + i] = bl ^ br
                    blev[boff + h + i] = br
                sp -= 1
        else:
            ap = abase[lev]
            if k == RATE0:
                for i in range(span):
                    blev[boff + i] = 0
            elif k == RATE1:
                for i in range(span):
                    a0 = alev[2 * (ap + i)]
                    a1 = alev[2 * (ap + i) + 1]
                    if a0 == a1:
                        ties += 1
                    blev[boff + i] = 1 if a1 > a0 else 0
            elif k == REP:
                s = 0.0
                for i in range(span):
                    s += alev[2 * (ap + i) + 1] - alev[2 * (ap + i)]
                if s == 0.0:
                    ties += 1
                bit = 1 if s > 0.0 else 0
                for i in range(span):
                    blev[boff + i] = bit
            else:  # SPC
                parity = 0
                rmin = np.inf
                imin = 0
                nmin = 0
                for i in range(span):
                    a0 = alev[2 * (ap + i)]
                    a1 = alev[2 * (ap + i) + 1]
                    if a0 == a1:
                        ties += 1
                    bit = 1 if a1 > a0 else 0
                    r = a0 - a1 if a0 >= a1 else a1 - a0
                    if r < rmin:
                        rmin = r
                        imin = i
                        nmin = 1
                    elif r == rmin:
                        nmin += 1
                    parity ^= bit
                    blev[boff + i] = bit
                if parity != 0:
                    if nmin > 1:
                        ties += 1
                    blev[boff + imin] ^= 1
            sp -= 1
    for i in range(nbits):
        x_out[i] = blev[bbase[0] + i]
    return ties


# ---------------------------------------------------------------------------
# list decoding: pooled per-path buffers with reference counting
# ---------------------------------------------------------------------------
#
# APOOL : flat float64; level lev holds `a_slots` slots of `N >> lev` pairs,
#         slot k starting at pair offset pabase[lev] + k * (N >> lev).
#         Level 0, slot 0 is the shared channel input (never written, not
#         refcounted; every path's ASLOT[:, 0] stays 0).
# BPOOL : flat int8; level lev holds `b_slots` slots of 2 * (N >> lev) bytes
#         starting at pbbase[lev] + k * 2 * (N >> lev).
# AREF / BREF : per-level slot refcounts. ASLOT / BSLOT map paths to slots
#         (-1 = none). A write grabs an exclusive slot first; only the live
#         left half of a bit buffer is ever copied.


@njit
def _alpha_acquire(lev, p, ASLOT, AREF):
    cur = ASLOT[p, lev]
    if cur >= 0:
        if AREF[lev, cur] == 1:
            return cur
        AREF[lev, cur] -= 1
    for k in range(AREF.shape[1]):
        if AREF[lev, k] == 0:
            AREF[lev, k] = 1
            ASLOT[p, lev] = k
            return k
    raise RuntimeError("alpha slot pool exhausted")


@njit
def _beta_acquire(lev, p, side, span, BSLOT, BREF, BPOOL, pbbase):
    cur = BSLOT[p, lev]
    if cur >= 0:
        if BREF[lev, cur] == 1:
            return cur
        BREF[lev, cur] -= 1
    new = -1
    for k in range(BREF.shape[1]):
        if BREF[lev, k] == 0:
            BREF[lev, k] = 1
            BSLOT[p, lev] = k
            new = k
            break
    if new < 0:
        raise RuntimeError("beta slot pool exhausted")
    if side == 1 and cur >= 0:
        src = pbbase[lev] + cur * 2 * span
        dst = pbbase[lev] + new * 2 * span
        for i in range(span):
            BPOOL[dst + i] = BPOOL[src + i]
    return new


@njit
def _beta_exclusive(lev, p, span, BSLOT, BREF, BPOOL, pbbase):
    """Make the path's bit buffer at ``lev`` exclusive, copying both halves."""
    cur = BSLOT[p, lev]
    if BREF[lev, cur] == 1:
        return cur
    BREF[lev, cur] -= 1
    for k in range(BREF.shape[1]):
        if BREF[lev, k] == 0:
            BREF[lev, k] = 1
            BSLOT[p, lev] = k
            src = pbbase[lev] + cur * 2 * span
            dst = pbbase[lev] + k * 2 * span
            for i in range(2 * span):
                BPOOL[dst + i] = BPOOL[src + i]
            return k
    raise RuntimeError("beta slot pool exhausted")


@njit
def _fork_worse(ra, sa, f1a, f2a, rb, sb, f1b, f2b):
    """Strict 'less reliable' order: reliability, then the deterministic
    tie chain (higher source id, then lexicographically larger flip set)."""
    if ra != rb:
        return ra < rb
    if sa != sb:
        return sa > sb
    if f1a != f1b:
        return f1a > f1b
    return f2a > f2b


@njit
def _heap_push(hR, hS, h1, h2, hn, r, s, f1, f2):
    i = hn
    hR[i] = r
    hS[i] = s
    h1[i] = f1
    h2[i] = f2
    while i > 0:
        par = (i - 1) >> 1
        if _fork_worse(hR[i], hS[i], h1[i], h2[i], hR[par], hS[par], h1[par], h2[par]):
            hR[i], hR[par] = hR[par], hR[i]
            hS[i], hS[par] = hS[par], hS[i]
            h1[i], h1[par] = h1[par], h1[i]
            h2[i], h2[par] = h2[par], h2[i]
            i = par
        else:
            break
    return hn + 1


@njit
def _heap_pop(hR, hS, h1, h2, hn):
    """Remove the least reliable entry; min must be read from index 0 first."""
    last = hn - 1
    hR[0] = hR[last]
    hS[0] = hS[last]
    h1[0] = h1[last]
    h2[0] = h2[last]
    i = 0
    while True:
        l = 2 * i + 1
        if l >= last:
            break
        m = l
        r = l + 1
        if r < last and _fork_worse(hR[r], hS[r], h1[r], h2[r], hR[l], hS[l], h1[l], h2[l]):
            m = r
        if _fork_worse(hR[m], hS[m], h1[m], h2[m], hR[i], hS[i], h1[i], h2[i]):
            hR[i], hR[m] = hR[m], hR[i]
            hS[i], hS[m] = hS[m], hS[i]
            h1[i], h1[m] = h1[m], h1[i]
            h2[i], h2[m] = h2[m], h2[i]
            i = m
        else:
            break
    return last


@njit
def select_weakest(rbuf, span, c, rs, ridx):
    """Partial selection sort: the ``c`` smallest bit reliabilities land in
    ``rs[:c]`` ascending, with original positions in ``ridx[:c]``."""
    for i in range(span):
        rs[i] = rbuf[i]
        ridx[i] = i
    for j in range(c):
        m = j
        for i in range(j + 1, span):
            if rs[i] < rs[m]:
                m = i
        if m != j:
            rs[j], rs[m] = rs[m], rs[j]
            ridx[j], ridx[m] = ridx[m], ridx[j]


@njit
def append_forks(hR, hS, h1, h2, hn, src, r_path, rs, ridx, c):
    """Insert every single- and two-bit fork of the path, unfiltered."""
    for j in range(c):
        f = ridx[j]
        hn = _heap_push(hR, hS, h1, h2, hn, r_path - rs[j], src, f, -1)
    for j in range(c - 1):
        for k in range(j + 1, c):
            fa = ridx[j]
            fb = ridx[k]
            if fa > fb:
                fa, fb = fb, fa
            hn = _heap_push(hR, hS, h1, h2, hn, r_path - rs[j] - rs[k], src, fa, fb)
    return hn


@njit
def replace_forks(hR, hS, h1, h2, hn, src, r_path, rs, ridx, c):
    """Insert only forks beating the current minimum, evicting it each time."""
    for j in range(c):
        r = r_path - rs[j]
        if r > hR[0]:
            f = ridx[j]
            hn = _heap_push(hR, hS, h1, h2, hn, r, src, f, -1)
            hn = _heap_pop(hR, hS, h1, h2, hn)
    for j in range(c - 1):
        for k in range(j + 1, c):
            r = r_path - rs[j] - rs[k]
            if r > hR[0]:
                fa = ridx[j]
                fb = ridx[k]
                if fa > fb:
                    fa, fb = fb, fa
                hn = _heap_push(hR, hS, h1, h2, hn, r, src, fa, fb)
                hn = _heap_pop(hR, hS, h1, h2, hn)
    return hn


@njit
def drain_heap(hR, hS, h1, h2, hn, dR, dS, d1, d2):
    """Empty the heap into the drain arrays, least reliable first."""
    nd = 0
    while hn > 0:
        dR[nd] = hR[0]
        dS[nd] = hS[0]
        d1[nd] = h1[0]
        d2[nd] = h2[0]
        hn = _heap_pop(hR, hS, h1, h2, hn)
        nd += 1
    return nd


@njit
def merge_ranked(srcR, n_src, dR, dS, d1, d2, nd, lmax, svR, svS, sv1, sv2, si):
    """Keep the ``lmax`` most reliable of {path decisions} U {forks}.

    ``dR..d2`` must be ordered least reliable first (heap drain order).
    Survivors come out best first.
    """
    for i in range(n_src):
        si[i] = i
    for i in range(1, n_src):
        key = si[i]
        j = i - 1
        while j >= 0 and _fork_worse(srcR[si[j]], si[j], -1, -1, srcR[key], key, -1, -1):
            si[j + 1] = si[j]
            j -= 1
        si[j + 1] = key
    n_sv = 0
    i = 0
    j = nd - 1
    while n_sv < lmax and (i < n_src or j >= 0):
        take_src = False
        if i >= n_src:
            take_src = False
        elif j < 0:
            take_src = True
        else:
            s = si[i]
            take_src = _fork_worse(dR[j], dS[j], d1[j], d2[j], srcR[s], s, -1, -1)
        if take_src:
            s = si[i]
            svR[n_sv] = srcR[s]
            svS[n_sv] = s
            sv1[n_sv] = -1
            sv2[n_sv] = -1
            i += 1
        else:
            svR[n_sv] = dR[j]
            svS[n_sv] = dS[j]
            sv1[n_sv] = d1[j]
            sv2[n_sv] = d2[j]
            j -= 1
        n_sv += 1
    return n_sv


@njit
def _remap_paths(n, n_old, n_sv, svS, svR, ASLOT, BSLOT, ASLOT_NEW, BSLOT_NEW, AREF, BREF, R):
    for jj in range(n_sv):
        s = svS[jj]
        ASLOT_NEW[jj, 0] = 0
        for le in range(1, n + 1):
            a = ASLOT[s, le]
            ASLOT_NEW[jj, le] = a
            if a >= 0:
                AREF[le, a] += 1
        for le in range(n + 1):
            b = BSLOT[s, le]
            BSLOT_NEW[jj, le] = b
            if b >= 0:
                BREF[le, b] += 1
    for p in range(n_old):
        for le in range(1, n + 1):
            a = ASLOT[p, le]
            if a >= 0:
                AREF[le, a] -= 1
        for le in range(n + 1):
            b = BSLOT[p, le]
            if b >= 0:
                BREF[le, b] -= 1
    for jj in range(n_sv):
        for le in range(n + 1):
            ASLOT[jj, le] = ASLOT_NEW[jj, le]
            BSLOT[jj, le] = BSLOT_NEW[jj, le]
        R[jj] = svR[jj]


@njit
def _f_pool(APOOL, src, dst, h):
    for i in range(h):
        a0 = APOOL[2 * (src + i)]
        a1 = APOOL[2 * (src + i) + 1]
        b0 = APOOL[2 * (src + h + i)]
        b1 = APOOL[2 * (src + h + i) + 1]
        s0 = a0 + b0
        s1 = a1 + b1
        o0 = s0 if s0 >= s1 else s1
        s0 = a0 + b1
        s1 = a1 + b0
        o1 = s0 if s0 >= s1 else s1
        APOOL[2 * (dst + i)] = o0
        APOOL[2 * (dst + i) + 1] = o1


@njit
def _g_pool(APOOL, src, dst, h, BPOOL, uoff):
    for i in range(h):
        a0 = APOOL[2 * (src + i)]
        a1 = APOOL[2 * (src + i) + 1]
        b0 = APOOL[2 * (src + h + i)]
        b1 = APOOL[2 * (src + h + i) + 1]
        if BPOOL[uoff + i] == 0:
            APOOL[2 * (dst + i)] = a0 + b0
            APOOL[2 * (dst + i) + 1] = a1 + b1
        else:
            APOOL[2 * (dst + i)] = a1 + b0
            APOOL[2 * (dst + i) + 1] = a0 + b1


@njit
def _emit_sorted(npaths, nbits, R, BSLOT, BPOOL, pbbase, perm, out_x, out_R):
    for i in range(npaths):
        perm[i] = i
    for i in range(1, npaths):
        key = perm[i]
        j = i - 1
        while j >= 0 and (R[perm[j]] < R[key] or (R[perm[j]] == R[key] and perm[j] > key)):
            perm[j + 1] = perm[j]
            j -= 1
        perm[j + 1] = key
    for t in range(npaths):
        p = perm[t]
        out_R[t] = R[p]
        src = pbbase[0] + BSLOT[p, 0] * 2 * nbits
        for i in range(nbits):
            out_x[t, i] = BPOOL[src + i]
    return npaths


@njit
def ssc_list_decode_kernel(
    kind, start, size, left, right, level, side,
    alpha, n, nbits, lmax, c,
    pabase, pbbase, APOOL, BPOOL, AREF, BREF, ASLOT, BSLOT, ASLOT_NEW, BSLOT_NEW,
    R, srcR, rbuf, rs, ridx,
    hR, hS, h1, h2, dR, dS, d1, d2, svR, svS, sv1, sv2, si,
    stk, perm, out_x, out_R,
):
    """Pruned-tree list decode with fork generation at rate-1 nodes."""
    for i in range(2 * nbits):
        APOOL[i] = alpha[i]
    for le in range(AREF.shape[0]):
        for k in range(AREF.shape[1]):
            AREF[le, k] = 0
        for k in range(BREF.shape[1]):
            BREF[le, k] = 0
    for p in range(lmax):
        for le in range(n + 1):
            ASLOT[p, le] = -1
            BSLOT[p, le] = -1
    ASLOT[0, 0] = 0
    R[0] = 0.0
    npaths = 1

    sp = 1
    stk[0, 0] = 0
    stk[0, 1] = 0
    while sp > 0:
        v = stk[sp - 1, 0]
        state = stk[sp - 1, 1]
        k = kind[v]
        lev = level[v]
        span = size[v]
        sd = side[v]
        if k == RATER:
            h = span >> 1
            if state == 0:
                lc = left[v]
                if kind[lc] == RATE0:
                    for p in range(npaths):
                        slot = _beta_acquire(lev + 1, p, 0, h, BSLOT, BREF, BPOOL, pbbase)
                        dst = pbbase[lev + 1] + slot * 2 * h
                        for i in range(h):
                            BPOOL[dst + i] = 0
                    stk[sp - 1, 1] = 1
                else:
                    for p in range(npaths):
                        src = pabase[lev] + ASLOT[p, lev] * span
                        slot = _alpha_acquire(lev + 1, p, ASLOT, AREF)
                        dst = pabase[lev + 1] + slot * h
                        _f_pool(APOOL, src, dst, h)
                    stk[sp - 1, 1] = 1
                    stk[sp, 0] = lc
                    stk[sp, 1] = 0
                    sp += 1
            elif state == 1:
                rc = right[v]
                for p in range(npaths):
                    src = pabase[lev] + ASLOT[p, lev] * span
                    uoff = pbbase[lev + 1] + BSLOT[p, lev + 1] * 2 * h
                    slot = _alpha_acquire(lev + 1, p, ASLOT, AREF)
                    dst = pabase[lev + 1] + slot * h
                    _g_pool(APOOL, src, dst, h, BPOOL, uoff)
                stk[sp - 1, 1] = 2
                stk[sp, 0] = rc
                stk[sp, 1] = 0
                sp += 1
            else:
                for p in range(npaths):
                    csrc = pbbase[lev + 1] + BSLOT[p, lev + 1] * 2 * h
                    slot = _beta_acquire(lev, p, sd, span, BSLOT, BREF, BPOOL, pbbase)
                    dst = pbbase[lev] + slot * 2 * span + sd * span
                    for i in range(h):
                        bl = BPOOL[csrc + i]
                        br = BPOOL[csrc + h + i]
                        BPOOL[dst + i] = bl ^ br
                        BPOOL[dst + h + i] = br
                sp -= 1
        elif k == RATE0:
            for p in range(npaths):
                slot = _beta_acquire(lev, p, sd, span, BSLOT, BREF, BPOOL, pbbase)
                dst = pbbase[lev] + slot * 2 * span + sd * span
                for i in range(span):
                    BPOOL[dst + i] = 0
            sp -= 1
        else:  # RATE1: Chase-style fork generation
            c_eff = c if c < span else span
            hn = 0
            n_src = npaths
            for p in range(n_src):
                apb = pabase[lev] + ASLOT[p, lev] * span
                slot = _beta_acquire(lev, p, sd, span, BSLOT, BREF, BPOOL, pbbase)
                bb = pbbase[lev] + slot * 2 * span + sd * span
                r_path = R[p]
                for i in range(span):
                    a0 = APOOL[2 * (apb + i)]
                    a1 = APOOL[2 * (apb + i) + 1]
                    if a1 > a0:
                        BPOOL[bb + i] = 1
                        r_path += a1
                        rbuf[i] = a1 - a0
                    else:
                        BPOOL[bb + i] = 0
                        r_path += a0
                        rbuf[i] = a0 - a1
                srcR[p] = r_path
                select_weakest(rbuf, span, c_eff, rs, ridx)
                if hn < lmax:
                    hn = append_forks(hR, hS, h1, h2, hn, p, r_path, rs, ridx, c_eff)
                else:
                    hn = replace_forks(hR, hS, h1, h2, hn, p, r_path, rs, ridx, c_eff)
            nd = drain_heap(hR, hS, h1, h2, hn, dR, dS, d1, d2)
            n_sv = merge_ranked(srcR, n_src, dR, dS, d1, d2, nd, lmax, svR, svS, sv1, sv2, si)
            _remap_paths(n, n_src, n_sv, svS, svR, ASLOT, BSLOT, ASLOT_NEW, BSLOT_NEW, AREF, BREF, R)
            for jj in range(n_sv):
                if sv1[jj] >= 0:
                    slot = _beta_exclusive(lev, jj, span, BSLOT, BREF, BPOOL, pbbase)
                    bb = pbbase[lev] + slot * 2 * span + sd * span
                    BPOOL[bb + sv1[jj]] ^= 1
                    if sv2[jj] >= 0:
                        BPOOL[bb + sv2[jj]] ^= 1
            npaths = n_sv
            sp -= 1
    return _emit_sorted(npaths, nbits, R, BSLOT, BPOOL, pbbase, perm, out_x, out_R)


@njit
def sc_list_decode_kernel(
    frozen, alpha, n, lmax,
    pabase, pbbase, APOOL, BPOOL, AREF, BREF, ASLOT, BSLOT, ASLOT_NEW, BSLOT_NEW,
    R, srcR,
    hR, hS, h1, h2, dR, dS, d1, d2, svR, svS, sv1, sv2, si,
    stk, perm, out_x, out_R,
):
    """Classic bit-by-bit list decode over the full tree (reference decoder).

    Every leaf's soft value feeds the path reliability; information leaves
    fork both hypotheses and the best ``lmax`` paths survive.
    """
    nbits = frozen.shape[0]
    for i in range(2 * nbits):
        APOOL[i] = alpha[i]
    for le in range(AREF.shape[0]):
        for k in range(AREF.shape[1]):
            AREF[le, k] = 0
        for k in range(BREF.shape[1]):
            BREF[le, k] = 0
    for p in range(lmax):
        for le in range(n + 1):
            ASLOT[p, le] = -1
            BSLOT[p, le] = -1
    ASLOT[0, 0] = 0
    R[0] = 0.0
    npaths = 1

    sp = 1
    stk[0, 0] = 0
    stk[0, 1] = 0
    stk[0, 2] = 0
    while sp > 0:
        lev = stk[sp - 1, 0]
        pos = stk[sp - 1, 1]
        state = stk[sp - 1, 2]
        span = nbits >> lev
        sd = (pos >> (n - lev)) & 1
        if lev == n:
            if frozen[pos] != 0:
                for p in range(npaths):
                    apb = pabase[n] + ASLOT[p, n]
                    R[p] += APOOL[2 * apb]
                    slot = _beta_acquire(n, p, sd, 1, BSLOT, BREF, BPOOL, pbbase)
                    BPOOL[pbbase[n] + slot * 2 + sd] = 0
            else:
                n_src = npaths
                hn = 0
                for p in range(n_src):
                    apb = pabase[n] + ASLOT[p, n]
                    a0 = APOOL[2 * apb]
                    a1 = APOOL[2 * apb + 1]
                    for bit in range(2):
                        rr = R[p] + (a1 if bit == 1 else a0)
                        if hn < lmax:
                            hn = _heap_push(hR, hS, h1, h2, hn, rr, p, bit, -1)
                        elif _fork_worse(hR[0], hS[0], h1[0], h2[0], rr, p, bit, -1):
                            hn = _heap_push(hR, hS, h1, h2, hn, rr, p, bit, -1)
                            hn = _heap_pop(hR, hS, h1, h2, hn)
                nd = drain_heap(hR, hS, h1, h2, hn, dR, dS, d1, d2)
                n_sv = nd if nd < lmax else lmax
                for t in range(n_sv):
                    svR[t] = dR[nd - 1 - t]
                    svS[t] = dS[nd - 1 - t]
                    sv1[t] = d1[nd - 1 - t]
                    sv2[t] = -1
                _remap_paths(n, n_src, n_sv, svS, svR, ASLOT, BSLOT, ASLOT_NEW, BSLOT_NEW, AREF, BREF, R)
                for jj in range(n_sv):
                    slot = _beta_acquire(n, jj, sd, 1, BSLOT, BREF, BPOOL, pbbase)
                    BPOOL[pbbase[n] + slot * 2 + sd] = sv1[jj]
                npaths = n_sv
            sp -= 1
        elif state == 0:
            h = span >> 1
            for p in range(npaths):
                src = pabase[lev] + ASLOT[p, lev] * span
                slot = _alpha_acquire(lev + 1, p, ASLOT, AREF)
                dst = pabase[lev + 1] + slot * h
                _f_pool(APOOL, src, dst, h)
            stk[sp - 1, 2] = 1
            stk[sp, 0] = lev + 1
            stk[sp, 1] = pos
            stk[sp, 2] = 0
            sp += 1
        elif state == 1:
            h = span >> 1
            for p in range(npaths):
                src = pabase[lev] + ASLOT[p, lev] * span
                uoff = pbbase[lev + 1] + BSLOT[p, lev + 1] * 2 * h
                slot = _alpha_acquire(lev + 1, p, ASLOT, AREF)
                dst = pabase[lev + 1] + slot * h
                _g_pool(APOOL, src, dst, h, BPOOL, uoff)
            stk[sp - 1, 2] = 2
            stk[sp, 0] = lev + 1
            stk[sp, 1] = pos + h
            stk[sp, 2] = 0
            sp += 1
        else:
            h = span >> 1
            for p in range(npaths):
                csrc = pbbase[lev + 1] + BSLOT[p, lev + 1] * 2 * h
                slot = _beta_acquire(lev, p, sd, span, BSLOT, BREF, BPOOL, pbbase)
                dst = pbbase[lev] + slot * 2 * span + sd * span
                for i in range(h):
                    bl = BPOOL[csrc + i]
                    br = BPOOL[csrc + h + i]
                    BPOOL[dst + i] = bl ^ br
                    BPOOL[dst + h + i] = br
            sp -= 1
    return _emit_sorted(npaths, nbits, R, BSLOT, BPOOL, pbbase, perm, out_x, out_R)
