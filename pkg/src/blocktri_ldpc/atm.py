"""Approximate triangulation and the gap-based solver.

A square nonsingular block ``A`` is brought (by row and column permutations)
into

    A = | T  S |
        | V  N |

with ``T`` lower triangular with a nonzero diagonal and a gap of ``delta``
rows. Solving ``A p = b`` then needs two triangular solves, three sparse
products and one dense ``delta x delta`` product with the inverse of
``Phi = N - V T^-1 S``.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .galois import FieldTable, SingularError, dense_inverse, dense_matmul
from .spmat import (
    CostProfile,
    Permutation,
    SparseMatrix,
    permute,
    solve_lower,
    spmv_counted,
    weight_stats,
)


class RankDeficientError(ValueError):
    """The matrix window does not have full row rank."""


@dataclass
class ATMSkeleton:
    """Output of :func:`approximate_triangulate`, ids refer to ``source``.

    ``rows`` lists the triangle rows in lower-triangular order followed by the
    ``delta`` gap rows; ``cols`` the triangle columns followed by the gap
    columns. ``unused`` holds the remaining window columns.
    """

    source: SparseMatrix
    rows: list[int]
    cols: list[int]
    unused: list[int]
    delta: int

    @property
    def size(self) -> int:
        return len(self.rows)

    def permutations(self) -> tuple[Permutation, Permutation]:
        """Row/column permutations of ``source`` putting ``A`` top-left.

        Only meaningful when the window covers every row of ``source``.
        """
        row_order = list(self.rows)
        if len(row_order) != self.source.m:
            seen = set(row_order)
            row_order += [r for r in range(self.source.m) if r not in seen]
        col_order = list(self.cols) + list(self.unused)
        seen = set(col_order)
        col_order += [c for c in range(self.source.n) if c not in seen]
        return Permutation.from_order(row_order), Permutation.from_order(col_order)


@dataclass
class ATMForm:
    """Precomputed gap solver for the square block picked by a skeleton."""

    field: FieldTable
    rows: list[int]
    cols: list[int]
    delta: int
    T: SparseMatrix
    S: SparseMatrix
    V: SparseMatrix
    N: SparseMatrix
    phi_inv: np.ndarray
    phi_inv_sparse: SparseMatrix = field(repr=False)
    t_diag_inv: list[int] = field(repr=False)

    @property
    def size(self) -> int:
        return len(self.rows)


# ---------------------------------------------------------------------------
# greedy triangulation
# ---------------------------------------------------------------------------

def _greedy_triangle(mat: SparseMatrix, rows: Sequence[int], cols: Sequence[int]):
    in_rows = set(rows)
    in_cols = set(cols)
    residual = set(rows)
    weight = {}
    for c in cols:
        weight[c] = sum(1 for r in mat.col_rows[c] if r in in_rows)
    heap = [(w, c) for c, w in weight.items() if w > 0]
    heapq.heapify(heap)
    assigned_col = set()
    tri = []  # (row, col) in assignment order
    gap_rows = []

    def drop(r):
        residual.discard(r)
        for c in mat.row_cols[r]:
            if c in in_cols and c not in assigned_col:
                w = weight[c] - 1
                weight[c] = w
                if w > 0:
                    heapq.heappush(heap, (w, c))

    while residual:
        while heap:
            w, c = heap[0]
            if c in assigned_col or weight[c] != w:
                heapq.heappop(heap)
                continue
            break
        if not heap:
            for r in sorted(residual):
                gap_rows.append(r)
            residual.clear()
            break
        w, c = heapq.heappop(heap)
        live = sorted(r for r in mat.col_rows[c] if r in residual)
        keep = live[0]
        for r in live[1:]:
            gap_rows.append(r)
            drop(r)
        assigned_col.add(c)
        tri.append((keep, c))
        drop(keep)
    tri.reverse()
    return [r for r, _ in tri], [c for _, c in tri], gap_rows


def _schur_columns(mat: SparseMatrix, t_rows, t_cols, gap_rows, candidates) -> dict[int, np.ndarray]:
    """``N_c + V T^-1 S_c`` (length ``delta``) for each candidate column ``c``."""
    gf = mat.field
    mt = gf.mul_table
    delta = len(gap_rows)
    k = len(t_rows)
    tpos = {r: i for i, r in enumerate(t_rows)}
    gpos = {r: i for i, r in enumerate(gap_rows)}
    # X = V T^-1 by transposed substitution: X T = V, last column first
    T = mat.submatrix(t_rows, t_cols)
    V = mat.submatrix(gap_rows, t_cols).to_dense() if delta else np.zeros((0, k), np.uint8)
    X = np.zeros((delta, k), dtype=np.uint8)
    for i in range(k - 1, -1, -1):
        acc = V[:, i].copy()
        diag = 0
        for j, v in zip(T.col_rows[i], T.col_vals[i]):
            if j == i:
                diag = v
            else:
                acc ^= mt[X[:, j], v]
        X[:, i] = mt[acc, gf.inv(diag)]
    out = {}
    for c in candidates:
        phi = np.zeros(delta, dtype=np.uint8)
        for r, v in zip(mat.col_rows[c], mat.col_vals[c]):
            g = gpos.get(r)
            if g is not None:
                phi[g] ^= v
                continue
            t = tpos.get(r)
            if t is not None:
                phi ^= mt[X[:, t], v]
        out[c] = phi
    return out


def _select_independent(gf: FieldTable, vectors, order, need: int) -> list:
    """First ``need`` keys of ``order`` whose vectors are linearly independent."""
    mt = gf.mul_table
    basis: dict[int, np.ndarray] = {}  # pivot index -> vector with 1 at pivot
    chosen = []
    for key in order:
        if len(chosen) == need:
            break
        v = vectors[key].copy()
        while True:
            nz = np.flatnonzero(v)
            if nz.size == 0:
                break
            piv = int(nz[0])
            bvec = basis.get(piv)
            if bvec is None:
                basis[piv] = mt[gf.inv(int(v[piv])), v]
                chosen.append(key)
                break
            v ^= mt[int(v[piv]), bvec]
    return chosen


def approximate_triangulate(mat: SparseMatrix, rows: Sequence[int] | None = None,
                            cols: Sequence[int] | None = None) -> ATMSkeleton:
    """Greedy approximate lower triangulation of the window ``mat[rows, cols]``.

    Repeatedly take the column of smallest positive residual weight (lowest
    column id on ties). A weight-1 column extends the triangle; otherwise its
    residual rows except the lowest-numbered one move to the gap first. The
    ``delta`` gap columns are then the first columns, by (window weight, id),
    whose Schur complement vectors are independent, which makes ``Phi``
    nonsingular. Raises :class:`RankDeficientError` if no such choice exists.
    """
    rows = list(range(mat.m)) if rows is None else list(rows)
    cols = list(range(mat.n)) if cols is None else list(cols)
    t_rows, t_cols, gap_rows = _greedy_triangle(mat, rows, cols)
    delta = len(gap_rows)
    used = set(t_cols)
    rest = [c for c in cols if c not in used]
    if delta:
        in_rows = set(rows)
        wt = {c: sum(1 for r in mat.col_rows[c] if r in in_rows) for c in rest}
        pref = sorted((c for c in rest if wt[c] > 0), key=lambda c: (wt[c], c))
        vecs = _schur_columns(mat, t_rows, t_cols, gap_rows, pref)
        gap_cols = _select_independent(mat.field, vecs, pref, delta)
        if len(gap_cols) < delta:
            raise RankDeficientError(
                f"window of {len(rows)} rows has rank {len(rows) - delta + len(gap_cols)}"
            )
    else:
        gap_cols = []
    chosen = set(gap_cols)
    unused = [c for c in rest if c not in chosen]
    return ATMSkeleton(mat, t_rows + gap_rows, t_cols + gap_cols, unused, delta)


def ru_precompute(sk: ATMSkeleton) -> ATMForm:
    """Split the block, form ``Phi`` and invert it.

    If the skeleton's gap columns give a singular ``Phi`` they are swapped for
    other window columns (column permutation only) before inverting.
    """
    mat = sk.source
    gf = mat.field
    k = sk.size - sk.delta
    t_rows, gap_rows = sk.rows[:k], sk.rows[k:]
    t_cols, gap_cols = sk.cols[:k], sk.cols[k:]
    T = mat.submatrix(t_rows, t_cols)
    for i in range(k):
        if T.get(i, i) == 0 or (T.row_cols[i] and T.row_cols[i][-1] > i):
            raise ValueError("skeleton triangle is not lower triangular with full diagonal")
    if sk.delta:
        vecs = _schur_columns(mat, t_rows, t_cols, gap_rows, gap_cols)
        phi = np.stack([vecs[c] for c in gap_cols], axis=1)
        try:
            phi_inv = dense_inverse(gf, phi)
        except SingularError:
            pool = gap_cols + sorted(sk.unused, key=lambda c: (len(mat.col_rows[c]), c))
            vecs = _schur_columns(mat, t_rows, t_cols, gap_rows, pool)
            gap_cols = _select_independent(gf, vecs, pool, sk.delta)
            if len(gap_cols) < sk.delta:
                raise RankDeficientError("Phi cannot be made nonsingular")
            chosen = set(gap_cols)
            sk.unused = [c for c in pool if c not in chosen]
            sk.cols = t_cols + gap_cols
            phi = np.stack([vecs[c] for c in gap_cols], axis=1)
            phi_inv = dense_inverse(gf, phi)
    else:
        phi_inv = np.zeros((0, 0), dtype=np.uint8)
    return ATMForm(
        field=gf,
        rows=list(sk.rows),
        cols=list(sk.cols),
        delta=sk.delta,
        T=T,
        S=mat.submatrix(t_rows, gap_cols),
        V=mat.submatrix(gap_rows, t_cols),
        N=mat.submatrix(gap_rows, gap_cols),
        phi_inv=phi_inv,
        phi_inv_sparse=SparseMatrix.from_dense(phi_inv, gf),
        t_diag_inv=[gf.inv(T.get(i, i)) for i in range(k)],
    )


def phi_matrix(form: ATMForm) -> np.ndarray:
    """``Phi = N - V T^-1 S`` recomputed densely (for checks)."""
    from .oracle import dense_solve

    gf = form.field
    k = form.T.m
    if form.delta == 0:
        return np.zeros((0, 0), dtype=np.uint8)
    T = form.T.to_dense()
    S = form.S.to_dense()
    tinv_s = np.stack([dense_solve(gf, T, S[:, j]) for j in range(form.delta)], axis=1) if k else S
    return form.N.to_dense() ^ dense_matmul(gf, form.V.to_dense(), tinv_s)


def ru_solve(form: ATMForm, b: Sequence[int], profile: CostProfile | None = None) -> list[int]:
    """Solve ``A p = b`` (both in the block's own row/column order)."""
    m = form.size
    if len(b) != m:
        raise ValueError(f"right-hand side length {len(b)} != {m}")
    k = m - form.delta
    b1, b2 = list(b[:k]), list(b[k:])
    t = solve_lower(form.T, b1, profile, form.t_diag_inv)
    y = spmv_counted(form.V, t, profile)
    for i in range(form.delta):
        y[i] ^= b2[i]
    p2 = spmv_counted(form.phi_inv_sparse, y, profile)
    r = spmv_counted(form.S, p2, profile)
    for i in range(k):
        r[i] ^= b1[i]
    if profile is not None:
        profile.add_count += m
    p1 = solve_lower(form.T, r, profile, form.t_diag_inv)
    return p1 + p2


def ru_costs(form: ATMForm) -> tuple[int, int]:
    """Multiplications and additions of one :func:`ru_solve` call."""
    st = weight_stats(form.T)
    sv = weight_stats(form.V)
    ss = weight_stats(form.S)
    sp = weight_stats(form.phi_inv_sparse)
    f_m = 2 * st.wt + sv.wt + ss.wt + sp.wt
    f_a = 2 * st.s + sv.s + ss.s + sp.s + form.size
    return f_m, f_a


class RUEncoder:
    """Whole-matrix triangulation encoder: ``H`` becomes ``(A | H_I)``."""

    def __init__(self, h: SparseMatrix):
        self.h = h
        sk = approximate_triangulate(h)
        self.form = ru_precompute(sk)
        self.row_perm, self.col_perm = sk.permutations()
        self.h_perm = permute(h, self.row_perm, self.col_perm)

    @property
    def delta(self) -> int:
        return self.form.delta

    def encode(self, u: Sequence[int], profile: CostProfile | None = None) -> list[int]:
        """Codeword in the permuted column order ``(p, u)``."""
        m, n = self.h.shape
        if len(u) != n - m:
            raise ValueError(f"message length {len(u)} != {n - m}")
        b = spmv_counted(self.h_perm, list(u), profile, col_range=(m, n))
        return ru_solve(self.form, b, profile) + list(u)

    def codeword(self, u: Sequence[int], profile: CostProfile | None = None) -> list[int]:
        """Codeword in the original column order of ``H``."""
        x = self.encode(u, profile)
        return [x[k] for k in self.col_perm.forward]

    def costs(self) -> tuple[int, int]:
        m, n = self.h.shape
        hi = weight_stats(self.h_perm, col_range=(m, n))
        f_m, f_a = ru_costs(self.form)
        return hi.wt + f_m, hi.s + f_a
