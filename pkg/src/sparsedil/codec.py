"""Bit-exact packing and unpacking of keys, signatures, and coefficients.

All codecs are little-endian fixed-width bit fields (round-3 wire layout),
bijections between their declared coefficient ranges and byte images.
Out-of-range coefficients fail at pack time; malformed bytes fail at decode
time with DecodeError so verification can fail closed.

The private-key decoder deviates from the classic in-memory shape on
purpose: secrets come back already widened to the 512-entry (-s, s) layout
consumed by the branchless multiplier, and t0 as signed 16-bit rows, so a
signing loop never re-derives them across restarts.
"""

import functools
from dataclasses import dataclass

import numpy as np

from .params import D, N, ParameterSet
from .sparse import extend_secret


class DecodeError(ValueError):
    """Malformed byte string for the declared object."""


# ---------------------------------------------------------------------------
# generic little-endian bit fields

def pack_bits(values, width: int) -> bytes:
    v = np.asarray(values, dtype=np.int64).reshape(-1)
    bits = ((v[:, None] >> np.arange(width)) & 1).astype(np.uint8)
    return np.packbits(bits.reshape(-1), bitorder="little").tobytes()


def unpack_bits(data: bytes, width: int, count: int) -> np.ndarray:
    bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8), bitorder="little")
    if len(bits) < count * width:
        raise DecodeError("byte string too short for field count")
    weights = np.int64(1) << np.arange(width, dtype=np.int64)
    return bits[: count * width].reshape(count, width).astype(np.int64) @ weights


def _check_range(values: np.ndarray, lo: int, hi: int, what: str) -> None:
    if np.any((values < lo) | (values > hi)):
        raise ValueError(f"{what} coefficient outside [{lo}, {hi}]")


# ---------------------------------------------------------------------------
# per-object codecs; arrays may be (256,) or (m, 256)

def pack_t1(t1) -> bytes:
    v = np.asarray(t1, dtype=np.int64)
    _check_range(v, 0, 1023, "t1")
    return pack_bits(v, 10)


def unpack_t1(data: bytes, m: int) -> np.ndarray:
    return unpack_bits(data, 10, m * N).reshape(m, N)


def pack_t0(t0) -> bytes:
    v = np.asarray(t0, dtype=np.int64)
    half = 1 << (D - 1)
    _check_range(v, -half + 1, half, "t0")
    return pack_bits(half - v, D)


def unpack_t0(data: bytes, m: int) -> np.ndarray:
    return ((1 << (D - 1)) - unpack_bits(data, D, m * N)).reshape(m, N)


def _eta_width(eta: int) -> int:
    return 3 if eta == 2 else 4


def pack_eta(s, eta: int) -> bytes:
    v = np.asarray(s, dtype=np.int64)
    _check_range(v, -eta, eta, "secret")
    return pack_bits(eta - v, _eta_width(eta))


def unpack_eta(data: bytes, m: int, eta: int) -> np.ndarray:
    vals = eta - unpack_bits(data, _eta_width(eta), m * N)
    if np.any(np.abs(vals) > eta):
        raise DecodeError("secret field out of range")
    return vals.reshape(m, N)


def _z_width(params: ParameterSet) -> int:
    return 18 if params.gamma1 == 1 << 17 else 20


def pack_z(z, params: ParameterSet) -> bytes:
    v = np.asarray(z, dtype=np.int64)
    _check_range(v, -params.gamma1 + 1, params.gamma1, "z")
    return pack_bits(params.gamma1 - v, _z_width(params))


def unpack_z(data: bytes, params: ParameterSet) -> np.ndarray:
    width = _z_width(params)
    count = len(data) * 8 // width
    return params.gamma1 - unpack_bits(data, width, count)


def _w1_width(params: ParameterSet) -> int:
    return 6 if params.level == 2 else 4


def pack_w1(w1, params: ParameterSet) -> bytes:
    v = np.asarray(w1, dtype=np.int64)
    _check_range(v, 0, (params.q - 1) // params.alpha - 1, "w1")
    return pack_bits(v, _w1_width(params))


# ---------------------------------------------------------------------------
# object sizes

def eta_packed_bytes(eta: int) -> int:
    return N * _eta_width(eta) // 8


def z_packed_bytes(params: ParameterSet) -> int:
    return N * _z_width(params) // 8


def w1_packed_bytes(params: ParameterSet) -> int:
    return N * _w1_width(params) // 8


T0_PACKED_BYTES = N * D // 8
T1_PACKED_BYTES = N * 10 // 8


def pk_size(params: ParameterSet) -> int:
    return 32 + params.k * T1_PACKED_BYTES


def sk_size(params: ParameterSet) -> int:
    per = eta_packed_bytes(params.eta)
    return 3 * 32 + (params.l + params.k) * per + params.k * T0_PACKED_BYTES


def sig_size(params: ParameterSet) -> int:
    return 32 + params.l * z_packed_bytes(params) + params.omega + params.k


# ---------------------------------------------------------------------------
# public key

def pk_encode(rho: bytes, t1, params: ParameterSet) -> bytes:
    return rho + pack_t1(t1)


def pk_decode(pk: bytes, params: ParameterSet) -> tuple[bytes, np.ndarray]:
    if len(pk) != pk_size(params):
        raise DecodeError(f"public key must be {pk_size(params)} bytes, got {len(pk)}")
    return pk[:32], unpack_t1(pk[32:], params.k)


# ---------------------------------------------------------------------------
# secret key

@dataclass(frozen=True)
class DecodedSecret:
    """Working form of a secret key; arrays are read-only."""

    rho: bytes
    key: bytes
    tr: bytes
    s1_ext: np.ndarray      # (l, 512) int8, rows in (-s, s) layout
    s2_ext: np.ndarray      # (k, 512) int8
    t0: np.ndarray          # (k, 256) int16


def sk_encode(rho: bytes, key: bytes, tr: bytes, s1, s2, t0,
              params: ParameterSet) -> bytes:
    return (rho + key + tr
            + pack_eta(s1, params.eta)
            + pack_eta(s2, params.eta)
            + pack_t0(t0))


def sk_decode_extended(sk: bytes, params: ParameterSet) -> DecodedSecret:
    """Decode a secret key straight into the extended signing layout.

    Called once per signature; restarts reuse the result untouched, which
    the read-only flags enforce.
    """
    if len(sk) != sk_size(params):
        raise DecodeError(f"secret key must be {sk_size(params)} bytes, got {len(sk)}")
    per = eta_packed_bytes(params.eta)
    off = 96
    s1 = unpack_eta(sk[off:off + params.l * per], params.l, params.eta)
    off += params.l * per
    s2 = unpack_eta(sk[off:off + params.k * per], params.k, params.eta)
    off += params.k * per
    t0 = unpack_t0(sk[off:], params.k).astype(np.int16)
    s1_ext = np.stack([extend_secret(row, params.eta) for row in s1])
    s2_ext = np.stack([extend_secret(row, params.eta) for row in s2])
    for arr in (s1_ext, s2_ext, t0):
        arr.setflags(write=False)
    return DecodedSecret(rho=sk[:32], key=sk[32:64], tr=sk[64:96],
                         s1_ext=s1_ext, s2_ext=s2_ext, t0=t0)


# ---------------------------------------------------------------------------
# signature

def _encode_hints(h: np.ndarray, params: ParameterSet) -> bytes:
    buf = np.zeros(params.omega + params.k, dtype=np.uint8)
    off = 0
    for i in range(params.k):
        pos = np.flatnonzero(h[i])
        if off + len(pos) > params.omega:
            raise ValueError(f"hint weight exceeds omega = {params.omega}")
        buf[off:off + len(pos)] = pos
        off += len(pos)
        buf[params.omega + i] = off
    return buf.tobytes()


def _decode_hints(data: bytes, params: ParameterSet) -> np.ndarray:
    raw = np.frombuffer(data, dtype=np.uint8)
    h = np.zeros((params.k, N), dtype=np.uint8)
    prev = 0
    for i in range(params.k):
        cnt = int(raw[params.omega + i])
        if cnt < prev or cnt > params.omega:
            raise DecodeError("hint counts not non-decreasing or above omega")
        pos = raw[prev:cnt].astype(np.int64)
        if len(pos) > 1 and np.any(np.diff(pos) <= 0):
            raise DecodeError("hint positions not strictly increasing")
        h[i, pos] = 1
        prev = cnt
    if np.any(raw[prev:params.omega] != 0):
        raise DecodeError("nonzero padding in hint section")
    return h


def sig_encode(c_tilde: bytes, z, h, params: ParameterSet) -> bytes:
    if len(c_tilde) != 32:
        raise ValueError("challenge hash must be 32 bytes")
    return c_tilde + pack_z(z, params) + _encode_hints(np.asarray(h), params)


def sig_decode(sig: bytes, params: ParameterSet) -> tuple[bytes, np.ndarray, np.ndarray]:
    if len(sig) != sig_size(params):
        raise DecodeError(f"signature must be {sig_size(params)} bytes, got {len(sig)}")
    c_tilde = sig[:32]
    zlen = params.l * z_packed_bytes(params)
    z = unpack_z(sig[32:32 + zlen], params).reshape(params.l, N)
    h = _decode_hints(sig[32 + zlen:], params)
    return c_tilde, z, h


# ---------------------------------------------------------------------------
# level inference for raw key files (byte lengths are unique per level)

@functools.lru_cache(maxsize=1)
def _size_maps():
    from .params import LEVELS, param_set
    pk, sk = {}, {}
    for lv in LEVELS:
        p = param_set(lv)
        pk[pk_size(p)], sk[sk_size(p)] = lv, lv
    return pk, sk


def level_for_pk(pk: bytes) -> int:
    m = _size_maps()[0]
    if len(pk) not in m:
        raise DecodeError(f"no security level has a {len(pk)}-byte public key")
    return m[len(pk)]


def level_for_sk(sk: bytes) -> int:
    m = _size_maps()[1]
    if len(sk) not in m:
        raise DecodeError(f"no security level has a {len(sk)}-byte secret key")
    return m[len(sk)]
