"""Sparse challenge multiplication: the signing-path replacement for the NTT.

A challenge c has exactly tau coefficients in {-1, +1}. It is stored as a
(tau+1)-byte index list: slot 0 holds the count of +1 coefficients, slots
1..poscnt the +1 indices in scan order, and slots tau down to poscnt+1 the
-1 indices in scan order. The secret is widened once into the 512-entry
extended layout (-s_0..-s_255, s_0..s_255) so that for every challenge
index k the contribution to all 256 output coefficients is the contiguous
byte window ext[256-k .. 511-k], negacyclic signs included.

The production kernel accumulates those windows with packed-lane (SWAR)
adds and subs on 32-bit words of four wrapping signed bytes; its loop trip
counts depend only on (poscnt, tau), both public. For levels where
tau*eta <= 127 the 8-bit result is exact; otherwise wrapping is a
documented, probability-bounded event.
"""

from typing import NamedTuple

import numpy as np

from . import instrumentation
from .params import N, Q
from .ring import Domain, Poly

_LANE_LOW = 0x7F7F7F7F
_LANE_TOP = 0x80808080

_BLOCK = 16                       # coefficients per fused-check block
_ARANGE_N = np.arange(N)


def packed_add_lanes(x, y):
    """Lane-wise wrapping add of four signed bytes packed in a 32-bit word.

    Works on Python ints and numpy uint32 arrays alike; no carry crosses a
    lane boundary.
    """
    return ((x & _LANE_LOW) + (y & _LANE_LOW)) ^ ((x ^ y) & _LANE_TOP)


def packed_sub_lanes(x, y):
    """Lane-wise wrapping subtract of four signed bytes in a 32-bit word."""
    return ((x | _LANE_TOP) - (y & _LANE_LOW)) ^ ((x ^ ~y) & _LANE_TOP)


def encode_challenge(c, tau: int) -> np.ndarray:
    """Encode a weight-tau challenge as its (tau+1)-byte index list."""
    c = np.asarray(c, dtype=np.int64)
    if c.shape != (N,):
        raise ValueError(f"challenge must have {N} coefficients")
    if np.any((c < -1) | (c > 1)):
        raise ValueError("challenge coefficients must lie in {-1, 0, 1}")
    pos = np.flatnonzero(c == 1)
    neg = np.flatnonzero(c == -1)
    if len(pos) + len(neg) != tau:
        raise ValueError(f"challenge has weight {len(pos) + len(neg)}, expected {tau}")
    index = np.empty(tau + 1, dtype=np.uint8)
    index[0] = len(pos)
    index[1:1 + len(pos)] = pos
    # scan-order negatives fill from the tail, so slot tau holds the first one
    index[1 + len(pos):] = neg[::-1]
    return index


def decode_challenge(index, tau: int) -> np.ndarray:
    """Rebuild the +-1 challenge polynomial from its index list."""
    index = np.asarray(index, dtype=np.uint8)
    if index.shape != (tau + 1,):
        raise ValueError(f"index list must have {tau + 1} entries")
    poscnt = int(index[0])
    if poscnt > tau:
        raise ValueError(f"positive count {poscnt} exceeds weight {tau}")
    slots = index[1:]
    if len(np.unique(slots)) != tau:
        raise ValueError("duplicate challenge indices")
    c = np.zeros(N, dtype=np.int8)
    c[slots[:poscnt]] = 1
    c[slots[poscnt:]] = -1
    return c


def extend_secret(s, eta: int) -> np.ndarray:
    """Widen a small secret polynomial to the 512-entry (-s, s) layout."""
    s = np.asarray(s, dtype=np.int64)
    if s.shape != (N,):
        raise ValueError(f"secret must have {N} coefficients")
    if np.any(np.abs(s) > eta):
        raise ValueError(f"secret coefficient outside [-{eta}, {eta}]")
    return np.concatenate((-s, s)).astype(np.int8)


def sparse_mul_indexed(c, a) -> Poly:
    """Exact c*a in R_q by shifted accumulation into 2n cells, then folding.

    The mid-level oracle: same index-driven access pattern as the
    production kernel, but full-width arithmetic and an explicit
    u_i = w_i - w_{i+n} (mod q) fold.
    """
    cv = np.asarray(c, dtype=np.int64)
    a_coeffs = getattr(a, "coeffs", a)
    if getattr(a, "domain", Domain.STANDARD) != Domain.STANDARD:
        raise ValueError("sparse_mul_indexed expects a standard-domain polynomial")
    av = np.asarray(a_coeffs, dtype=np.int64)
    if np.any((cv < -1) | (cv > 1)):
        raise ValueError("challenge coefficients must lie in {-1, 0, 1}")
    w = np.zeros(2 * N, dtype=np.int64)
    for i in np.flatnonzero(cv == 1):
        w[i:i + N] += av
    for i in np.flatnonzero(cv == -1):
        w[i:i + N] -= av
    return Poly((w[:N] - w[N:]) % Q, Domain.STANDARD)


def _window_words(ext_rows: np.ndarray, pos: int) -> np.ndarray:
    """Byte windows ext[256-pos .. 511-pos] of each row as packed 32-bit words.

    Window starts are byte offsets, so the loads are generally unaligned;
    the bytes are assembled into a fresh aligned word array of shape
    (rows, 64).
    """
    rows = ext_rows.shape[0]
    win = ext_rows[:, 256 - pos: 512 - pos]
    return np.frombuffer(np.ascontiguousarray(win).tobytes(), dtype=np.uint32).reshape(rows, N // 4)


def sparse_mul_branchless_vec(index, ext_rows: np.ndarray, tau: int,
                              lane_batch: int = 4) -> np.ndarray:
    """Branchless c*s for a whole vector of extended secrets at once.

    `ext_rows` has shape (m, 512); one shared challenge index list drives
    all rows. Trip counts depend solely on (poscnt, tau); secrets are
    touched only through public window offsets. `lane_batch` selects how
    many byte lanes one accumulation step covers (4 = one 32-bit word,
    16 = four words); both batchings produce identical bytes.
    """
    index = np.asarray(index, dtype=np.uint8)
    if index.shape != (tau + 1,):
        raise ValueError(f"index list must have {tau + 1} entries")
    if lane_batch not in (4, 16):
        raise ValueError("lane_batch must be 4 or 16")
    ext_rows = np.asarray(ext_rows)
    if ext_rows.dtype != np.int8 or ext_rows.ndim != 2 or ext_rows.shape[1] != 2 * N:
        raise ValueError("extended secrets must be rows of 512 signed bytes")
    m = ext_rows.shape[0]
    steps_per_index = N // lane_batch
    words_per_step = lane_batch // 4
    poscnt = int(index[0])
    acc = np.zeros((m, steps_per_index, words_per_step), dtype=np.uint32)
    for t in range(1, poscnt + 1):
        win = _window_words(ext_rows, int(index[t]))
        acc = packed_add_lanes(acc, win.reshape(m, steps_per_index, words_per_step))
        instrumentation.add_swar_steps(m * steps_per_index)
    for t in range(poscnt + 1, tau + 1):
        win = _window_words(ext_rows, int(index[t]))
        acc = packed_sub_lanes(acc, win.reshape(m, steps_per_index, words_per_step))
        instrumentation.add_swar_steps(m * steps_per_index)
    return acc.reshape(m, N // 4).view(np.int8)


def sparse_mul_branchless(index, ext, tau: int, lane_batch: int = 4) -> np.ndarray:
    """Accumulate c*s in wrapping signed bytes, driven only by the index list."""
    if getattr(ext, "ndim", 1) != 1:
        raise ValueError("expected a single 512-byte extended secret")
    return sparse_mul_branchless_vec(index, ext[None, :], tau, lane_batch)[0]


class FusedZ(NamedTuple):
    z: np.ndarray          # (m, 256) int64, centered; rows past a rejection are zero
    rejected: bool
    blocks: int            # 16-coefficient blocks actually accumulated


class FusedR0(NamedTuple):
    ok: bool
    cs2: np.ndarray        # (m, 256) int64; complete only when ok
    blocks: int


def _stage_windows(ext: np.ndarray, positions: np.ndarray) -> np.ndarray:
    """Gather the tau challenge windows of one extended secret as (tau, 256).

    Row t is ext[256-k_t .. 511-k_t]; staging the input bytes up front
    keeps the per-block work to the wrapping accumulation itself.
    """
    offs = 256 - positions
    return ext[offs[:, None] + _ARANGE_N]


def _block_product(windows: np.ndarray, poscnt: int, b: int) -> np.ndarray:
    """Wrapping 8-bit c*s for one 16-coefficient block.

    Wrapping addition is associative, so summing the positive and negative
    windows separately in int8 matches the sequential packed-lane kernel
    byte for byte.
    """
    win = windows[:, _BLOCK * b: _BLOCK * (b + 1)]
    return (win[:poscnt].sum(axis=0, dtype=np.int8)
            - win[poscnt:].sum(axis=0, dtype=np.int8))


def fused_z(index, ext_s1: np.ndarray, y: np.ndarray, bound: int) -> FusedZ:
    """z = y + c*s1 with the norm check fused into the accumulation.

    Proceeds polynomial by polynomial and, inside each, block by block;
    the first block holding a coefficient with |z_i| >= bound aborts the
    whole computation. On acceptance z equals the unfused computation
    exactly.
    """
    index = np.asarray(index, dtype=np.uint8)
    poscnt = int(index[0])
    positions = index[1:].astype(np.int64)
    y = np.asarray(getattr(y, "coeffs", y), dtype=np.int64)
    m = y.shape[0]
    z = np.zeros_like(y)
    blocks = 0
    for i in range(m):
        windows = _stage_windows(ext_s1[i], positions)
        for b in range(N // _BLOCK):
            zb = y[i, _BLOCK * b: _BLOCK * (b + 1)] + _block_product(windows, poscnt, b)
            blocks += 1
            if np.any(np.abs(zb) >= bound):
                return FusedZ(z, True, blocks)
            z[i, _BLOCK * b: _BLOCK * (b + 1)] = zb
    return FusedZ(z, False, blocks)


def fused_r0(index, ext_s2: np.ndarray, w: np.ndarray, gamma2: int, bound: int) -> FusedR0:
    """Low-bits check of w - c*s2 fused into the accumulation of c*s2.

    Rejects at the first block where |LowBits(w - c*s2, 2*gamma2)| >= bound;
    on acceptance the full c*s2 is returned for the later hint computation.
    """
    index = np.asarray(index, dtype=np.uint8)
    poscnt = int(index[0])
    positions = index[1:].astype(np.int64)
    w = np.asarray(getattr(w, "coeffs", w), dtype=np.int64)
    m = w.shape[0]
    cs2 = np.zeros_like(w)
    alpha = 2 * gamma2
    half = alpha // 2
    blocks = 0
    for i in range(m):
        windows = _stage_windows(ext_s2[i], positions)
        for b in range(N // _BLOCK):
            prod = _block_product(windows, poscnt, b).astype(np.int64)
            r = (w[i, _BLOCK * b: _BLOCK * (b + 1)] - prod) % Q
            # inline LowBits(r, alpha): centered remainder plus the q-1 fold
            r0 = r % alpha
            r0 = np.where(r0 > half, r0 - alpha, r0)
            r0 = np.where((r - r0) == Q - 1, r0 - 1, r0)
            blocks += 1
            if np.any(np.abs(r0) >= bound):
                return FusedR0(False, cs2, blocks)
            cs2[i, _BLOCK * b: _BLOCK * (b + 1)] = prod
    return FusedR0(True, cs2, blocks)
