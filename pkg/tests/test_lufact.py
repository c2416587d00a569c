import numpy as np
import pytest

from conftest import random_full_rank, random_nonsingular_dense
from blocktri_ldpc.galois import SingularError, build_field, dense_matmul
from blocktri_ldpc.lufact import LUEncoder, lu_costs, lu_factorize, lu_solve
from blocktri_ldpc.oracle import dense_solve, syndrome
from blocktri_ldpc.spmat import CostProfile, SparseMatrix


def test_factors_reproduce_matrix():
    rng = np.random.default_rng(0)
    for q in (2, 4, 8, 16):
        gf = build_field(q.bit_length() - 1)
        for k in range(1, 14):
            a = random_nonsingular_dense(rng, k, q, density=0.35)
            form = lu_factorize(SparseMatrix.from_dense(a, gf))
            L, U = form.L.to_dense(), form.U.to_dense()
            assert np.array_equal(L, np.tril(L)) and all(L[i, i] == 1 for i in range(k))
            assert np.array_equal(U, np.triu(U)) and all(U[i, i] for i in range(k))
            pa = a[form.row_order][:, form.col_order]
            assert np.array_equal(dense_matmul(gf, L, U), pa)
            b = rng.integers(0, q, size=k).tolist()
            prof = CostProfile(q=q)
            assert lu_solve(form, b, prof) == dense_solve(gf, a, b).tolist()
            assert (prof.mul_count, prof.add_count) == lu_costs(form)


def test_singular_matrix_rejected():
    gf = build_field(3)
    with pytest.raises(SingularError):
        lu_factorize(SparseMatrix.from_dense([[1, 2], [2, 4]], gf))
    with pytest.raises(ValueError):
        lu_factorize(SparseMatrix.from_dense([[1, 2, 3]], gf))


def test_identity_has_trivial_factors():
    gf = build_field(3)
    form = lu_factorize(SparseMatrix.identity(4, gf))
    assert lu_costs(form) == (8, 0)


def test_lu_encoder():
    rng = np.random.default_rng(1)
    for q in (2, 8):
        for _ in range(10):
            h = random_full_rank(rng, 14, 28, q)
            enc = LUEncoder(h)
            u = rng.integers(0, q, size=14).tolist()
            prof = CostProfile(q=q)
            x = enc.codeword(u, prof)
            assert not syndrome(h, x).any()
            assert (prof.mul_count, prof.add_count) == enc.costs()
