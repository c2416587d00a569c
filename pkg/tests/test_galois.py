import itertools

import numpy as np
import pytest

from blocktri_ldpc.galois import (
    PRIMITIVE_POLYS,
    SingularError,
    build_field,
    dense_inverse,
    dense_matmul,
    field_for_order,
    gf_add,
    gf_inv,
    gf_mul,
)


def clmul_mod(a, b, poly, p):
    """Carry-less product reduced by the polynomial, bit by bit."""
    r = 0
    for i in range(p):
        if (b >> i) & 1:
            r ^= a << i
    for i in range(2 * p - 2, p - 1, -1):
        if (r >> i) & 1:
            r ^= poly << (i - p)
    return r


def test_gf8_frozen_values():
    gf = build_field(3)
    assert gf.q == 8
    assert gf.primitive_poly == 0b1011
    assert gf_mul(gf, 2, 2) == 4
    assert gf_mul(gf, 5, 5) == 7
    assert gf_add(3, 5) == 6
    assert gf_inv(gf, 1) == 1


def test_gf4_inverse_of_two():
    gf = build_field(2)
    assert gf_inv(gf, 2) == 3
    hits = [b for b in range(4) if gf.mul(2, b) == 1]
    assert hits == [3]


def test_binary_field_is_and_xor():
    gf = build_field(1)
    for a, b in itertools.product(range(2), repeat=2):
        assert gf.mul(a, b) == (a & b)
        assert gf.add(a, b) == (a ^ b)


@pytest.mark.parametrize("p", range(1, 9))
def test_mul_matches_polynomial_oracle(p):
    gf = build_field(p)
    q = 1 << p
    rng = np.random.default_rng(p)
    pairs = itertools.product(range(q), repeat=2) if q <= 16 else rng.integers(0, q, size=(3000, 2))
    for a, b in pairs:
        assert gf.mul(int(a), int(b)) == clmul_mod(int(a), int(b), PRIMITIVE_POLYS[p], p)


@pytest.mark.parametrize("p", range(1, 9))
def test_field_axioms(p):
    gf = build_field(p)
    q = gf.q
    for a in range(1, q):
        assert gf.mul(a, gf.inv(a)) == 1
        assert gf.add(a, a) == 0
        assert gf.mul(a, 1) == a
        assert gf.add(a, 0) == a
        assert gf.exp[gf.log[a]] == a
    rng = np.random.default_rng(100 + p)
    for a, b, c in rng.integers(0, q, size=(500, 3)):
        a, b, c = int(a), int(b), int(c)
        assert gf.mul(a, b) == gf.mul(b, a)
        assert gf.mul(gf.mul(a, b), c) == gf.mul(a, gf.mul(b, c))
        assert gf.mul(a, b ^ c) == gf.mul(a, b) ^ gf.mul(a, c)


def test_build_is_deterministic():
    for p in range(1, 9):
        a, b = build_field(p), build_field(p)
        assert np.array_equal(a.exp, b.exp) and np.array_equal(a.log, b.log)
        assert a == b


@pytest.mark.parametrize("p", [0, 9, -1])
def test_bad_degree(p):
    with pytest.raises(ValueError):
        build_field(p)


def test_field_for_order():
    assert field_for_order(16).p == 4
    with pytest.raises(ValueError):
        field_for_order(6)


def test_inverse_of_zero():
    with pytest.raises(SingularError):
        gf_inv(build_field(3), 0)


def test_dense_inverse_roundtrip():
    gf = build_field(3)
    rng = np.random.default_rng(0)
    done = 0
    while done < 20:
        a = rng.integers(0, 8, size=(5, 5)).astype(np.uint8)
        try:
            ai = dense_inverse(gf, a)
        except SingularError:
            continue
        assert np.array_equal(dense_matmul(gf, a, ai), np.eye(5, dtype=np.uint8))
        done += 1
    with pytest.raises(SingularError):
        dense_inverse(gf, np.ones((3, 3), dtype=np.uint8))
