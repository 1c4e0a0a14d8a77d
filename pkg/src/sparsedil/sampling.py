"""Deterministic expansions of seeds into matrices, secrets, masks, challenges.

Every sampler is a pure function of (seed, nonce). Byte framing follows the
round-3 reference conventions: SHAKE-128 with a 2-byte little-endian nonce
for the public matrix, SHAKE-256 elsewhere, and the challenge sign bits
taken from the first 8 bytes of the stream.
"""

import functools

import numpy as np

from .codec import unpack_z
from .keccak import Shake, shake256
from .params import N, Q, ParameterSet
from .ring import Domain, PolyMat, PolyVec


def _uniform_poly(rho: bytes, nonce: int) -> np.ndarray:
    """One matrix polynomial: rejection-sample 23-bit chunks below q."""
    xof = Shake("shake128").absorb(rho + nonce.to_bytes(2, "little"))
    out = np.empty(N, dtype=np.int32)
    filled = 0
    need = 5 * 168          # five blocks cover 256 draws except ~1e-40 of seeds
    while filled < N:
        buf = np.frombuffer(xof.squeeze(need), dtype=np.uint8).reshape(-1, 3).astype(np.int64)
        t = buf[:, 0] | (buf[:, 1] << 8) | ((buf[:, 2] & 0x7F) << 16)
        good = t[t < Q]
        take = min(len(good), N - filled)
        out[filled:filled + take] = good[:take]
        filled += take
        need = 168
    return out


@functools.lru_cache(maxsize=16)
def expand_a(rho: bytes, params: ParameterSet) -> PolyMat:
    """The public k x l matrix, sampled directly in the NTT domain.

    Pure in (rho, params); a small cache amortizes re-expansion when many
    operations share one key. The cached array is read-only.
    """
    coeffs = np.empty((params.k, params.l, N), dtype=np.int32)
    for i in range(params.k):
        for j in range(params.l):
            coeffs[i, j] = _uniform_poly(rho, (i << 8) + j)
    mat = PolyMat(coeffs, Domain.NTT)
    mat.coeffs.setflags(write=False)
    return mat


def _eta_poly(rho_prime: bytes, nonce: int, eta: int) -> np.ndarray:
    """One secret polynomial: nibble rejection onto [-eta, eta]."""
    xof = Shake("shake256").absorb(rho_prime + nonce.to_bytes(2, "little"))
    out = np.empty(N, dtype=np.int8)
    filled = 0
    while filled < N:
        buf = np.frombuffer(xof.squeeze(136), dtype=np.uint8).astype(np.int64)
        nibbles = np.column_stack((buf & 0xF, buf >> 4)).reshape(-1)
        if eta == 2:
            good = nibbles[nibbles < 15]
            vals = 2 - (good % 5)
        else:
            good = nibbles[nibbles < 9]
            vals = 4 - good
        take = min(len(vals), N - filled)
        out[filled:filled + take] = vals[:take]
        filled += take
    return out


def expand_s(rho_prime: bytes, params: ParameterSet) -> tuple[np.ndarray, np.ndarray]:
    """Secret vectors (s1, s2) as int8 arrays of shape (l, 256) and (k, 256)."""
    s1 = np.stack([_eta_poly(rho_prime, i, params.eta) for i in range(params.l)])
    s2 = np.stack([_eta_poly(rho_prime, params.l + i, params.eta) for i in range(params.k)])
    return s1, s2


def expand_mask(rho_prime: bytes, kappa: int, params: ParameterSet) -> PolyVec:
    """Mask vector y with coefficients in (-gamma1, gamma1], nonces kappa..kappa+l-1."""
    width = 18 if params.gamma1 == 1 << 17 else 20
    per_poly = N * width // 8
    rows = np.empty((params.l, N), dtype=np.int32)
    for i in range(params.l):
        buf = shake256(rho_prime + (kappa + i).to_bytes(2, "little"), per_poly)
        rows[i] = unpack_z(buf, params)
    return PolyVec(rows, Domain.STANDARD)


def sample_in_ball(seed: bytes, tau: int) -> np.ndarray:
    """The challenge polynomial: tau +-1 coefficients placed by in-place swaps.

    Sign bits come from the first 8 stream bytes; each swap target is a
    rejection-sampled byte bounded by the running position.
    """
    xof = Shake("shake256").absorb(seed)
    signs = int.from_bytes(xof.squeeze(8), "little")
    c = np.zeros(N, dtype=np.int8)
    for i in range(N - tau, N):
        while True:
            j = xof.squeeze(1)[0]
            if j <= i:
                break
        c[i] = c[j]
        c[j] = 1 - 2 * (signs & 1)
        signs >>= 1
    return c
