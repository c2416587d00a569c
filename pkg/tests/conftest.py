import numpy as np

from blocktri_ldpc.galois import field_for_order
from blocktri_ldpc.spmat import SparseMatrix, gauss_rank


def random_sparse(rng, m, n, q, col_weights=(2, 3, 4)):
    """Random m x n matrix with the given column weights and nonzero values."""
    gf = field_for_order(q)
    entries = []
    for j in range(n):
        w = min(int(rng.choice(col_weights)), m)
        for i in rng.choice(m, size=w, replace=False):
            entries.append((int(i), j, int(rng.integers(1, q))))
    return SparseMatrix(m, n, gf, entries)


def hidden_triangle(rng, m, n, q, col_weights=(2, 3, 4)):
    """Full rank by construction: a permuted sparse triangle plus random columns."""
    gf = field_for_order(q)
    rows = rng.permutation(m)
    cols = rng.permutation(n)
    entries = {}
    for k in range(m):
        j = int(cols[k])
        entries[(int(rows[k]), j)] = int(rng.integers(1, q))
        w = min(int(rng.choice(col_weights)), m - k) - 1
        for i in rng.choice(rows[k + 1:], size=max(w, 0), replace=False):
            entries[(int(i), j)] = int(rng.integers(1, q))
    for k in range(m, n):
        j = int(cols[k])
        w = min(int(rng.choice(col_weights)), m)
        for i in rng.choice(m, size=w, replace=False):
            entries[(int(i), j)] = int(rng.integers(1, q))
    return SparseMatrix(m, n, gf, [(i, j, v) for (i, j), v in entries.items()])


def random_full_rank(rng, m, n, q, col_weights=(2, 3, 4)):
    for _ in range(20):
        h = random_sparse(rng, m, n, q, col_weights)
        if gauss_rank(h) == m:
            return h
    return hidden_triangle(rng, m, n, q, col_weights)


def random_nonsingular_dense(rng, k, q, density=0.5):
    from blocktri_ldpc.oracle import dense_rank

    gf = field_for_order(q)
    while True:
        a = rng.integers(1, q, size=(k, k)) * (rng.random((k, k)) < density)
        a = a.astype(np.uint8)
        if dense_rank(gf, a) == k:
            return a
