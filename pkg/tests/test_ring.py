import numpy as np
import pytest

from sparsedil import ring
from sparsedil.params import N, Q
from sparsedil.ring import Domain, Poly, PolyVec


def rand_poly(rng, lo=0, hi=Q):
    return Poly(rng.integers(lo, hi, N))


def test_domain_tags_enforced():
    rng = np.random.default_rng(0)
    p = rand_poly(rng)
    hat = ring.ntt(p)
    assert hat.domain == Domain.NTT
    with pytest.raises(ValueError, match="standard"):
        ring.ntt(hat)
    with pytest.raises(ValueError, match="NTT"):
        ring.inv_ntt(p)
    with pytest.raises(ValueError, match="NTT"):
        ring.pointwise_mul(p, p)
    with pytest.raises(ValueError, match="domain mismatch"):
        ring.poly_add(p, hat)


def test_ntt_zero_and_basis():
    zero = ring.zero_poly()
    assert np.all(ring.ntt(zero).coeffs == 0)
    basis = np.zeros(N, dtype=np.int64)
    basis[0] = 1
    one = Poly(basis)
    assert np.array_equal(ring.inv_ntt(ring.ntt(one)).coeffs, one.coeffs)


def test_roundtrip_random():
    rng = np.random.default_rng(1)
    for _ in range(1000):
        p = rand_poly(rng)
        assert np.array_equal(ring.inv_ntt(ring.ntt(p)).coeffs, p.coeffs)


def test_inv_ntt_linearity():
    rng = np.random.default_rng(2)
    a, b = rand_poly(rng), rand_poly(rng)
    ah, bh = ring.ntt(a), ring.ntt(b)
    lhs = ring.inv_ntt(ring.poly_add(ah, bh))
    rhs = ring.poly_add(ring.inv_ntt(ah), ring.inv_ntt(bh))
    assert np.array_equal(lhs.coeffs, rhs.coeffs)


def test_pointwise_identity():
    rng = np.random.default_rng(3)
    one = np.zeros(N, dtype=np.int64)
    one[0] = 1
    one_hat = ring.ntt(Poly(one))
    p = rand_poly(rng)
    out = ring.inv_ntt(ring.pointwise_mul(ring.ntt(p), one_hat))
    assert np.array_equal(out.coeffs, p.coeffs)


def test_negacyclic_wrap():
    # x * x^255 == -1 in R_q
    x = np.zeros(N, dtype=np.int64)
    x[1] = 1
    xtop = np.zeros(N, dtype=np.int64)
    xtop[255] = 1
    out = ring.inv_ntt(ring.pointwise_mul(ring.ntt(Poly(x)), ring.ntt(Poly(xtop))))
    want = np.zeros(N, dtype=np.int64)
    want[0] = Q - 1
    assert np.array_equal(out.coeffs, want)


def test_schoolbook_identity_and_rotation():
    rng = np.random.default_rng(4)
    a = rand_poly(rng)
    one = np.zeros(N, dtype=np.int64)
    one[0] = 1
    assert np.array_equal(ring.schoolbook_negacyclic(a, Poly(one)).coeffs, a.coeffs)
    x = np.zeros(N, dtype=np.int64)
    x[1] = 1
    rotated = ring.schoolbook_negacyclic(a, Poly(x)).coeffs
    want = np.roll(a.coeffs.astype(np.int64), 1)
    want[0] = (-want[0]) % Q       # the wrapped coefficient picks up the sign
    assert np.array_equal(rotated, want % Q)


def test_schoolbook_commutes():
    rng = np.random.default_rng(5)
    for _ in range(50):
        a, b = rand_poly(rng), rand_poly(rng)
        assert np.array_equal(ring.schoolbook_negacyclic(a, b).coeffs,
                              ring.schoolbook_negacyclic(b, a).coeffs)


def test_schoolbook_matches_naive_loops():
    # guards the convolution-based oracle with a from-first-principles one
    rng = np.random.default_rng(6)
    for _ in range(3):
        a, b = rand_poly(rng), rand_poly(rng)
        t = [0] * (2 * N)
        for i in range(N):
            ai = int(a.coeffs[i])
            for j in range(N):
                t[i + j] += ai * int(b.coeffs[j])
        want = [(t[i] - t[i + N]) % Q for i in range(N)]
        assert list(ring.schoolbook_negacyclic(a, b).coeffs) == want


def test_ntt_mul_matches_schoolbook():
    rng = np.random.default_rng(7)
    for _ in range(300):
        a, b = rand_poly(rng), rand_poly(rng)
        via_ntt = ring.inv_ntt(ring.pointwise_mul(ring.ntt(a), ring.ntt(b)))
        assert np.array_equal(via_ntt.coeffs, ring.schoolbook_negacyclic(a, b).coeffs)


def test_ntt_mul_matches_schoolbook_bulk():
    # 1e4 random pairs, transforms batched for speed
    rng = np.random.default_rng(77)
    m = 10000
    a = rng.integers(0, Q, (m, N))
    b = rng.integers(0, Q, (m, N))
    prod_hat = ring.ntt_values(a) * ring.ntt_values(b) % Q
    got = ring.intt_values(prod_hat)
    for i in range(m):
        want = ring.schoolbook_negacyclic(Poly(a[i]), Poly(b[i])).coeffs
        assert np.array_equal(got[i], want), i


def test_add_sub_reduce_caddq():
    rng = np.random.default_rng(8)
    a, b = rand_poly(rng), rand_poly(rng)
    assert np.array_equal(ring.poly_add(a, ring.zero_poly()).coeffs, a.coeffs)
    assert np.all(ring.poly_sub(a, a).coeffs == 0)
    wild = Poly(rng.integers(-(1 << 31) + Q, (1 << 31) - Q, N))
    red = ring.reduce(wild).coeffs
    assert np.all((red >= 0) & (red < Q))
    assert np.array_equal(red % Q, wild.coeffs.astype(np.int64) % Q)
    neg = Poly(rng.integers(-Q + 1, 0, N))
    fixed = ring.caddq(neg).coeffs
    assert np.all((fixed >= 0) & (fixed < Q))


def test_center_range():
    rng = np.random.default_rng(9)
    v = rng.integers(0, Q, 4096)
    c = ring.center(v)
    assert np.all(np.abs(c) <= (Q - 1) // 2)
    assert np.all((c - v) % Q == 0)


def test_polyvec_shares_domain():
    rng = np.random.default_rng(10)
    vec = PolyVec(rng.integers(0, Q, (3, N)))
    hat = ring.ntt(vec)
    assert hat.domain == Domain.NTT and hat.coeffs.shape == (3, N)
    back = ring.inv_ntt(hat)
    assert np.array_equal(back.coeffs, vec.coeffs)
