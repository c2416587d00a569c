"""Dense Gaussian-elimination reference solver and encoder.

Nothing here is fast or counted; it is the ground truth the sparse encoders are
checked against. Matrices are numpy ``uint8`` arrays of field elements.
"""
from __future__ import annotations

import numpy as np

from .galois import FieldTable, SingularError
from .spmat import SparseMatrix


def _as_dense(a) -> np.ndarray:
    if isinstance(a, SparseMatrix):
        return a.to_dense()
    return np.array(a, dtype=np.uint8, ndmin=2)


def _reduce(gf: FieldTable, aug: np.ndarray, ncols: int, full_pivot: bool):
    """Gauss-Jordan on the first ``ncols`` columns of ``aug`` in place.

    Returns the list of ``(row, col)`` pivot positions in the reduced matrix
    (after the row swaps, which are applied to ``aug``). With ``full_pivot``
    the pivot is the first nonzero of the remaining block in row-major order,
    otherwise columns are taken left to right.
    """
    mt = gf.mul_table
    m = aug.shape[0]
    pivots = []
    r = 0
    cols_left = list(range(ncols))
    while r < m and cols_left:
        block = aug[r:, cols_left]
        nz = np.argwhere(block)
        if nz.size == 0:
            break
        if full_pivot:
            pr, pk = nz[0]
        else:
            pk = nz[:, 1].min()
            pr = nz[nz[:, 1] == pk][0, 0]
        pr += r
        pc = cols_left.pop(int(pk))
        if pr != r:
            aug[[r, pr]] = aug[[pr, r]]
        aug[r] = mt[gf.inv(int(aug[r, pc])), aug[r]]
        f = aug[:, pc].copy()
        f[r] = 0
        idx = np.flatnonzero(f)
        if idx.size:
            aug[idx] ^= mt[f[idx][:, None], aug[r][None, :]]
        pivots.append((r, pc))
        r += 1
    return pivots


def dense_rank(gf: FieldTable, a) -> int:
    a = _as_dense(a).copy()
    if a.size == 0:
        return 0
    return len(_reduce(gf, a, a.shape[1], full_pivot=True))


def dense_solve(gf: FieldTable, a, b) -> np.ndarray:
    """Solve ``a x = b`` for square nonsingular ``a`` by full-pivot elimination."""
    a = _as_dense(a)
    k = a.shape[0]
    if a.shape != (k, k):
        raise ValueError("matrix must be square")
    b = np.asarray(b, dtype=np.uint8).reshape(-1)
    if b.shape[0] != k:
        raise ValueError("right-hand side length mismatch")
    aug = np.concatenate([a, b[:, None]], axis=1)
    pivots = _reduce(gf, aug, k, full_pivot=True)
    if len(pivots) < k:
        raise SingularError("matrix is singular")
    x = np.zeros(k, dtype=np.uint8)
    for r, c in pivots:
        x[c] = aug[r, k]
    return x


def dense_matvec(gf: FieldTable, a, v) -> np.ndarray:
    a = _as_dense(a)
    v = np.asarray(v, dtype=np.uint8)
    out = np.zeros(a.shape[0], dtype=np.uint8)
    for j in range(a.shape[1]):
        if v[j]:
            out ^= gf.mul_table[a[:, j], v[j]]
    return out


def parity_columns(h) -> list[int]:
    """First ``m`` columns (left to right) that form a nonsingular square block."""
    if isinstance(h, SparseMatrix):
        gf, a = h.field, h.to_dense()
    else:
        raise TypeError("expected a SparseMatrix")
    aug = a.copy()
    pivots = _reduce(gf, aug, aug.shape[1], full_pivot=False)
    if len(pivots) < a.shape[0]:
        raise SingularError(f"rank {len(pivots)} < {a.shape[0]} rows")
    return sorted(c for _, c in pivots)


def dense_encode(h: SparseMatrix, u, parity_cols=None, return_columns: bool = False):
    """Codeword ``x`` (original column order) with ``H x^T = 0`` and message ``u``.

    The parity part sits on ``parity_cols`` (default: the first ``m`` columns,
    or the leftmost nonsingular choice when those are singular); the message
    fills the remaining columns in increasing order.
    """
    m, n = h.shape
    u = np.asarray(u, dtype=np.uint8).reshape(-1)
    if u.shape[0] != n - m:
        raise ValueError(f"message length {u.shape[0]} != {n - m}")
    gf = h.field
    a = h.to_dense()
    if parity_cols is None:
        first = list(range(m))
        if dense_rank(gf, a[:, first]) == m:
            parity_cols = first
        else:
            parity_cols = parity_columns(h)
    parity_cols = list(parity_cols)
    pset = set(parity_cols)
    msg_cols = [j for j in range(n) if j not in pset]
    b = dense_matvec(gf, a[:, msg_cols], u)  # char 2: -b == b
    p = dense_solve(gf, a[:, parity_cols], b)
    x = np.zeros(n, dtype=np.uint8)
    x[parity_cols] = p
    x[msg_cols] = u
    if return_columns:
        return x, parity_cols
    return x


def syndrome(h: SparseMatrix, x) -> np.ndarray:
    return dense_matvec(h.field, h.to_dense(), x)
