"""Coefficient rounding, high/low-bit decomposition, hints, and norm checks.

All functions are vectorized over numpy integer arrays (any shape) and also
accept Python ints, returning numpy scalars. Inputs to power2round and
decompose must be canonical representatives in [0, q).
"""

import numpy as np

from .params import D, Q
from .ring import center


def power2round(r, d: int = D):
    """Split r = r1 * 2^d + r0 with r0 in (-2^(d-1), 2^(d-1)]."""
    r = np.asarray(r, dtype=np.int64)
    r1 = (r + (1 << (d - 1)) - 1) >> d
    r0 = r - (r1 << d)
    return r1, r0


def decompose(r, alpha: int):
    """Split r = r1 * alpha + r0 (mod q) with centered r0 in (-alpha/2, alpha/2].

    The q-1 boundary is folded down: when r - r0 == q - 1 the high part
    wraps to 0 and r0 is decremented, keeping r1 in [0, (q-1)/alpha).
    """
    r = np.asarray(r, dtype=np.int64)
    r0 = r % alpha
    r0 = np.where(r0 > alpha // 2, r0 - alpha, r0)
    boundary = (r - r0) == Q - 1
    r1 = np.where(boundary, 0, (r - r0) // alpha)
    r0 = np.where(boundary, r0 - 1, r0)
    return r1, r0


def highbits(r, alpha: int):
    return decompose(r, alpha)[0]


def lowbits(r, alpha: int):
    return decompose(r, alpha)[1]


def make_hint(z, r, alpha: int):
    """Hint bits recording whether adding z changes the high part of r.

    Operands follow the signing call shape: z is the negated perturbation
    (centered), r the perturbed value in [0, q); the produced hints let
    use_hint(h, r) recover HighBits(r + z).
    """
    r = np.asarray(r, dtype=np.int64)
    z = np.asarray(z, dtype=np.int64)
    return (highbits(r, alpha) != highbits((r + z) % Q, alpha)).astype(np.uint8)


def use_hint(h, r, alpha: int):
    """Recover the high part of the unperturbed value from a hint bit."""
    m = (Q - 1) // alpha
    r1, r0 = decompose(r, alpha)
    shifted = np.where(np.asarray(r0) > 0, (r1 + 1) % m, (r1 - 1) % m)
    return np.where(np.asarray(h, dtype=bool), shifted, r1)


def hint_weight(h) -> int:
    return int(np.count_nonzero(np.asarray(h)))


def norm_inf_exceeds(v, bound: int) -> bool:
    """True iff any centered coefficient magnitude is >= bound.

    Accepts reduced [0, q) or centered values; Poly/PolyVec wrappers are
    unwrapped. The comparison is non-strict to match the rejection rule
    "reject when the norm reaches the bound".
    """
    coeffs = getattr(v, "coeffs", v)
    return bool(np.any(np.abs(center(coeffs)) >= bound))
