"""Sparse LU factorization of square blocks and the LU-based encoder."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from ._elim import eliminate
from .atm import approximate_triangulate
from .galois import FieldTable, SingularError
from .spmat import (
    CostProfile,
    Permutation,
    SparseMatrix,
    permute,
    solve_lower,
    solve_upper,
    spmv_counted,
    weight_stats,
)


@dataclass
class LUForm:
    """``A[row_order][:, col_order] = L U`` with ``L`` unit lower triangular.

    Solving ``A p = b`` permutes ``b`` by ``row_order``, runs forward then
    backward substitution, and scatters the result back through ``col_order``.
    """

    field: FieldTable
    row_order: list[int]
    col_order: list[int]
    L: SparseMatrix
    U: SparseMatrix
    u_diag_inv: list[int] = field(repr=False)

    @property
    def size(self) -> int:
        return len(self.row_order)


def lu_factorize(a: SparseMatrix) -> LUForm:
    """Markowitz-ordered sparse LU of a square nonsingular matrix."""
    k = a.m
    if a.n != k:
        raise ValueError(f"matrix must be square, got {a.shape}")
    gf = a.field
    rows = [a.row(i) for i in range(k)]
    el = eliminate(rows, k, gf, record=True)
    if len(el.pivots) < k:
        raise SingularError(f"matrix has rank {len(el.pivots)} < {k}")
    row_order = [r for r, _ in el.pivots]
    col_order = [c for _, c in el.pivots]
    rpos = {r: t for t, r in enumerate(row_order)}
    cpos = {c: t for t, c in enumerate(col_order)}
    u_rows = [{cpos[j]: v for j, v in prow.items()} for prow in el.upper]
    l_rows: list[dict[int, int]] = [{t: 1} for t in range(k)]
    for t, mult in enumerate(el.lower):
        for r, f in mult.items():
            l_rows[rpos[r]][t] = f
    L = SparseMatrix.from_rows(k, k, gf, l_rows)
    U = SparseMatrix.from_rows(k, k, gf, u_rows)
    return LUForm(gf, row_order, col_order, L, U, [gf.inv(U.get(t, t)) for t in range(k)])


def lu_solve(form: LUForm, b: Sequence[int], profile: CostProfile | None = None) -> list[int]:
    """Solve ``A p = b`` using the factors; costs ``wt(L) + wt(U)`` multiplications."""
    k = form.size
    if len(b) != k:
        raise ValueError(f"right-hand side length {len(b)} != {k}")
    pb = [b[r] for r in form.row_order]
    y = solve_lower(form.L, pb, profile, [1] * k)
    z = solve_upper(form.U, y, profile, form.u_diag_inv)
    p = [0] * k
    for t, c in enumerate(form.col_order):
        p[c] = z[t]
    return p


def lu_costs(form: LUForm) -> tuple[int, int]:
    sl, su = weight_stats(form.L), weight_stats(form.U)
    return sl.wt + su.wt, sl.s + su.s


class LUEncoder:
    """Triangulation-ordered ``H = (A | H_I)`` with ``A`` solved through its LU factors."""

    def __init__(self, h: SparseMatrix):
        self.h = h
        sk = approximate_triangulate(h)
        self.delta = sk.delta
        self.row_perm, self.col_perm = sk.permutations()
        self.h_perm = permute(h, self.row_perm, self.col_perm)
        m = h.m
        self.a = self.h_perm.submatrix(range(m), range(m))
        self.form = lu_factorize(self.a)

    def encode(self, u: Sequence[int], profile: CostProfile | None = None) -> list[int]:
        """Codeword in the permuted column order ``(p, u)``."""
        m, n = self.h.shape
        if len(u) != n - m:
            raise ValueError(f"message length {len(u)} != {n - m}")
        b = spmv_counted(self.h_perm, list(u), profile, col_range=(m, n))
        return lu_solve(self.form, b, profile) + list(u)

    def codeword(self, u: Sequence[int], profile: CostProfile | None = None) -> list[int]:
        x = self.encode(u, profile)
        return [x[k] for k in self.col_perm.forward]

    def costs(self) -> tuple[int, int]:
        m, n = self.h.shape
        hi = weight_stats(self.h_perm, col_range=(m, n))
        f_m, f_a = lu_costs(self.form)
        return hi.wt + f_m, hi.s + f_a


