import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_full_rank
from blocktri_ldpc.atm import RankDeficientError
from blocktri_ldpc.blocktri import (
    ATM,
    CYCLE,
    DIAGONAL,
    PreprocessState,
    dumps,
    encode,
    encoding_costs,
    load,
    loads,
    preprocess,
    save,
    substep_a,
    substep_b,
    substep_d,
    substep_e,
)
from blocktri_ldpc.codegen import sample_ensemble, sample_proper_cycle_code
from blocktri_ldpc.galois import build_field
from blocktri_ldpc.oracle import dense_encode, syndrome
from blocktri_ldpc.spmat import CostProfile, Permutation, SparseMatrix, permute

GF2 = build_field(1)
GF8 = build_field(3)


def assert_valid(h, form):
    assert permute(h, form.P, form.Q) == form.h_prime
    assert form.h_prime.wt == h.wt
    form.check_shape()
    assert sum(b.size for b in form.blocks) == h.m
    f = [fg[0] for fg in form.history]
    assert all(b > a for a, b in zip([0] + f, f))


def test_identity_is_one_diagonal_block():
    h = SparseMatrix.identity(5, GF8)
    form = preprocess(h)
    assert form.kinds == [DIAGONAL]
    assert encoding_costs(form) == (5, 0)
    assert encode(form, []) == [0] * 5


def test_surplus_weight_one_column_goes_rear():
    h = SparseMatrix.from_dense([[1, 1, 0], [0, 1, 1]], GF8)
    state = PreprocessState.start(h)
    rows, cols, rear, _ = substep_a(state)
    assert rows == [0, 1] and cols == [0, 2] and rear == []
    h = SparseMatrix.from_dense([[1, 2, 1, 0], [0, 0, 1, 1]], GF8)
    state = PreprocessState.start(h)
    rows, cols, rear, _ = substep_a(state)
    substep_e(state, rows, cols, rear)
    assert (rows, cols, rear) == ([0, 1], [0, 3], [1])
    assert (state.f, state.g) == (2, 1)
    assert state.col_order == [0, 3, 2, 1]


def test_identity_round_is_noop():
    h = SparseMatrix.identity(3, GF8)
    state = PreprocessState.start(h)
    substep_e(state, [], [], [])
    assert state.row_order == [0, 1, 2] and state.col_order == [0, 1, 2]
    with pytest.raises(ValueError):
        substep_e(state, [0, 1], [0], [])


def test_binary_without_split_is_single_triangulated_block():
    h = SparseMatrix.from_dense([[1, 1, 0, 1], [1, 0, 1, 1], [0, 1, 1, 1]], GF2)
    form = preprocess(h)
    assert form.kinds == [ATM]
    assert_valid(h, form)


def test_cycle_branch_needs_nonbinary_field():
    h = SparseMatrix.from_dense([[1, 1, 1], [1, 1, 1]], GF2)
    assert substep_b(PreprocessState.start(h)) is None
    assert substep_b(PreprocessState.start(SparseMatrix.from_dense([[1, 0], [0, 1]], GF8))) is None


def test_forest_skips_cycle_branch():
    h = SparseMatrix.from_dense([[1, 0, 1, 1], [1, 1, 0, 1], [0, 1, 0, 1]], GF8)
    assert substep_b(PreprocessState.start(h)) is None


def test_rank_deficient_input():
    h = SparseMatrix.from_dense([[1, 1, 1, 0], [1, 1, 1, 0]], GF2)
    with pytest.raises(RankDeficientError):
        substep_d(PreprocessState.start(h))
    with pytest.raises(RankDeficientError):
        preprocess(h)


def test_cycle_code_structure():
    h = sample_proper_cycle_code(60, 30, 8, seed=3)
    form = preprocess(h)
    assert form.kinds[0] == CYCLE
    assert all(k == DIAGONAL for k in form.kinds[1:])
    assert_valid(h, form)


def test_example_profile_matrix():
    # 50 x 100 over GF(8): 33 weight-2 columns and 67 weight-5 columns
    rng = np.random.default_rng(2024)
    entries = []
    for j in range(100):
        w = 2 if j < 33 else 5
        for i in rng.choice(50, size=w, replace=False):
            entries.append((int(i), j, int(rng.integers(1, 8))))
    h = SparseMatrix(50, 100, GF8, entries)
    form = preprocess(h)
    assert form.kinds[0] == CYCLE
    assert_valid(h, form)
    u = rng.integers(0, 8, size=50).tolist()
    assert not syndrome(h, form.codeword(u)).any()


def check_encoding(h, form, rng):
    q = h.q
    u = rng.integers(0, q, size=h.n - h.m).tolist()
    prof = CostProfile(q=q)
    x = form.codeword(u, prof)
    assert not syndrome(h, x).any()
    assert (prof.mul_count, prof.add_count) == encoding_costs(form)
    if q == 2:
        assert prof.mu == 0
    parity = form.Q.order()[: h.m]
    msg = sorted(set(range(h.n)) - set(parity))
    ref = dense_encode(h, [x[c] for c in msg], parity_cols=parity)
    assert ref.tolist() == x


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 30), st.integers(1, 30), st.sampled_from([2, 4, 8]),
       st.sampled_from(["ru", "lu"]), st.integers(0, 2**32 - 1))
def test_random_matrices(m, extra, q, mode, seed):
    rng = np.random.default_rng(seed)
    h = random_full_rank(rng, m, m + extra, q)
    form = preprocess(h, mode)
    assert_valid(h, form)
    check_encoding(h, form, rng)
    assert encode(form, [0] * (h.n - h.m)) == [0] * h.n


@pytest.mark.parametrize("name", ["e8", "e2"])
def test_ensemble_instance_against_oracle(name):
    h = sample_ensemble(name, 200, seed=17)
    rng = np.random.default_rng(0)
    for mode in ("ru", "lu"):
        form = preprocess(h, mode)
        assert_valid(h, form)
        check_encoding(h, form, rng)


def test_serialization_roundtrip(tmp_path):
    rng = np.random.default_rng(8)
    for name, mode in (("e8", "ru"), ("e2", "ru"), ("e2", "lu")):
        h = sample_ensemble(name, 150, seed=3)
        form = preprocess(h, mode)
        text = dumps(form)
        back = loads(text)
        assert back.h_prime == form.h_prime and back.P == form.P and back.Q == form.Q
        assert back.kinds == form.kinds
        assert encoding_costs(back) == encoding_costs(form)
        u = rng.integers(0, h.q, size=h.n - h.m).tolist()
        assert back.encode(u) == form.encode(u)
        assert dumps(back) == text
    path = tmp_path / "form.json"
    save(form, path)
    assert load(path).encode(u) == form.encode(u)


def test_serialization_rejects_foreign_documents():
    with pytest.raises(ValueError):
        loads('{"format": "other", "version": 1}')
    form = preprocess(SparseMatrix.identity(2, GF8))
    text = dumps(form).replace('"version": 1', '"version": 99')
    with pytest.raises(ValueError):
        loads(text)


def test_unknown_solver_mode():
    with pytest.raises(ValueError):
        preprocess(SparseMatrix.identity(2, GF8), "qr")
