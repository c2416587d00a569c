import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_full_rank
from blocktri_ldpc.atm import (
    RankDeficientError,
    RUEncoder,
    approximate_triangulate,
    phi_matrix,
    ru_costs,
    ru_precompute,
    ru_solve,
)
from blocktri_ldpc.galois import build_field, dense_matmul
from blocktri_ldpc.oracle import dense_solve, syndrome
from blocktri_ldpc.spmat import CostProfile, SparseMatrix

GF8 = build_field(3)


def test_rank_deficient_window():
    with pytest.raises(RankDeficientError):
        approximate_triangulate(SparseMatrix.from_dense(np.ones((3, 3), dtype=np.uint8), GF8))


def test_triangular_input_has_no_gap():
    a = SparseMatrix.from_dense([[1, 0, 0], [2, 3, 0], [0, 4, 5]], GF8)
    sk = approximate_triangulate(a)
    assert sk.delta == 0
    form = ru_precompute(sk)
    assert form.phi_inv.shape == (0, 0)
    assert ru_solve(form, [1, 2, 3]) == dense_solve(GF8, form.T.to_dense(), [1, 2, 3]).tolist()


def test_dense_block_needs_gap():
    a = SparseMatrix.from_dense([[1, 1, 0], [1, 2, 1], [1, 0, 3]], GF8)
    sk = approximate_triangulate(a)
    assert sk.delta >= 1
    form = ru_precompute(sk)
    block = a.submatrix(form.rows, form.cols).to_dense()
    b = [5, 6, 7]
    assert ru_solve(form, b) == dense_solve(GF8, block, b).tolist()


def check_form(h, rows=None, cols=None):
    sk = approximate_triangulate(h, rows, cols)
    form = ru_precompute(sk)
    k = form.size - form.delta
    T = form.T.to_dense()
    assert np.array_equal(T, np.tril(T)) and all(T[i, i] for i in range(k))
    assert set(form.cols).isdisjoint(sk.unused)
    gf = h.field
    if form.delta:
        eye = np.eye(form.delta, dtype=np.uint8)
        assert np.array_equal(dense_matmul(gf, phi_matrix(form), form.phi_inv), eye)
    return form


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 25), st.integers(0, 15), st.sampled_from([2, 4, 8]), st.integers(0, 2**32 - 1))
def test_solve_matches_oracle_and_costs(m, extra, q, seed):
    rng = np.random.default_rng(seed)
    h = random_full_rank(rng, m, m + extra, q)
    form = check_form(h)
    block = h.submatrix(form.rows, form.cols).to_dense()
    b = rng.integers(0, q, size=m).tolist()
    prof = CostProfile(q=q)
    p = ru_solve(form, b, prof)
    assert p == dense_solve(h.field, block, b).tolist()
    assert (prof.mul_count, prof.add_count) == ru_costs(form)


def test_window_triangulation():
    rng = np.random.default_rng(11)
    h = random_full_rank(rng, 12, 24, 8)
    rows = list(range(3, 12))
    cols = list(range(2, 24))
    sub = h.submatrix(rows, cols)
    from blocktri_ldpc.spmat import gauss_rank

    if gauss_rank(sub) == len(rows):
        form = check_form(h, rows, cols)
        assert set(form.rows) == set(rows)
        assert set(form.cols) <= set(cols)


def test_ru_encoder_codewords():
    rng = np.random.default_rng(12)
    for q in (2, 8):
        for _ in range(10):
            h = random_full_rank(rng, 15, 30, q)
            enc = RUEncoder(h)
            u = rng.integers(0, q, size=15).tolist()
            prof = CostProfile(q=q)
            x = enc.codeword(u, prof)
            assert not syndrome(h, x).any()
            assert (prof.mul_count, prof.add_count) == enc.costs()
            if q == 2:
                assert prof.mu == 0
