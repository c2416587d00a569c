"""Singly bordered block-diagonal splits of a matrix window.

A window ``W`` (rows x columns of a larger matrix, given as id lists) is
permuted into

    | B1  0   Z1 |
    | 0   B2  Z2 |

where the first ``m1`` rows and the last rows share only the border columns
``Z``. The rows of the first block are a prefix of one greedy row sequence, so
every ``m1`` can be examined from a single pass; that is what the search for a
full-rank horizontal ``B1`` relies on.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Sequence

from .galois import FieldTable
from .spmat import Permutation, SparseMatrix


@dataclass
class SBBDResult:
    """Split of a window; permutations act on window-local indices.

    ``rows``/``cols`` list the window ids in split order: block-1 rows then
    block-2 rows; ``B1`` columns, ``B2`` columns, then the border.
    """

    P: Permutation
    Q: Permutation
    m1: int
    n1: int
    n2: int
    rows: list[int]
    cols: list[int]

    @property
    def border(self) -> int:
        return len(self.cols) - self.n1 - self.n2

    @property
    def b1_rows(self) -> list[int]:
        return self.rows[: self.m1]

    @property
    def b1_cols(self) -> list[int]:
        return self.cols[: self.n1]


def row_sequence(mat: SparseMatrix, rows: Sequence[int], cols: Sequence[int]) -> list[int]:
    """Greedy order of the window rows, most overlapping with earlier rows first.

    The seed is the row of least window weight (lowest id on ties). Each next
    row maximizes the number of its columns already covered, then minimizes
    the number of new columns, then the row id.
    """
    in_cols = set(cols)
    in_rows = set(rows)
    supp = {r: [c for c in mat.row_cols[r] if c in in_cols] for r in rows}
    if not rows:
        return []
    seed = min(rows, key=lambda r: (len(supp[r]), r))
    overlap = {r: 0 for r in rows}
    covered: set[int] = set()
    done: set[int] = set()
    heap = [(0, len(supp[r]), r) for r in rows if r != seed]
    heapq.heapify(heap)
    order = []

    def take(r):
        order.append(r)
        done.add(r)
        for c in supp[r]:
            if c in covered:
                continue
            covered.add(c)
            for r2 in mat.col_rows[c]:
                if r2 in in_rows and r2 not in done:
                    ov = overlap[r2] + 1
                    overlap[r2] = ov
                    heapq.heappush(heap, (-ov, len(supp[r2]) - ov, r2))

    take(seed)
    while heap:
        neg, _, r = heapq.heappop(heap)
        if r in done or -neg != overlap[r]:
            continue
        take(r)
    return order


def _split(mat: SparseMatrix, seq: list[int], cols: Sequence[int], m1: int):
    pos = {r: k for k, r in enumerate(seq)}
    b1, b2, border = [], [], []
    for c in cols:
        ps = [pos[r] for r in mat.col_rows[c] if r in pos]
        if not ps:
            border.append(c)
        elif max(ps) < m1:
            b1.append(c)
        elif min(ps) >= m1:
            b2.append(c)
        else:
            border.append(c)
    return b1, b2, border


def _result(seq, cols, m1, b1, b2, border, rows, wcols) -> SBBDResult:
    rloc = {r: k for k, r in enumerate(rows)}
    cloc = {c: k for k, c in enumerate(wcols)}
    order_c = b1 + b2 + border
    return SBBDResult(
        P=Permutation.from_order([rloc[r] for r in seq]),
        Q=Permutation.from_order([cloc[c] for c in order_c]),
        m1=m1, n1=len(b1), n2=len(b2), rows=list(seq), cols=order_c,
    )


def sbbd(mat: SparseMatrix, m1: int, rows: Sequence[int] | None = None,
         cols: Sequence[int] | None = None) -> SBBDResult:
    """Split the window ``mat[rows, cols]`` with exactly ``m1`` rows in block 1."""
    rows = list(range(mat.m)) if rows is None else list(rows)
    cols = list(range(mat.n)) if cols is None else list(cols)
    if not 0 < m1 < len(rows):
        raise ValueError(f"m1={m1} must lie strictly between 0 and {len(rows)}")
    seq = row_sequence(mat, rows, cols)
    b1, b2, border = _split(mat, seq, cols, m1)
    return _result(seq, cols, m1, b1, b2, border, rows, cols)


class _PrefixBasis:
    """Row-echelon basis of column vectors over a growing coordinate set."""

    def __init__(self, gf: FieldTable):
        self.gf = gf
        self.basis: dict[int, dict[int, int]] = {}  # pivot coordinate -> vector (pivot value 1)

    def __len__(self):
        return len(self.basis)

    def add(self, vec: dict[int, int]) -> bool:
        gf = self.gf
        mt = gf.mul_rows
        v = dict(vec)
        while v:
            piv = max(v)
            b = self.basis.get(piv)
            if b is None:
                s = gf.inv(v[piv])
                self.basis[piv] = {k: mt[s][x] for k, x in v.items()}
                return True
            f = v[piv]
            mf = mt[f]
            for k, x in b.items():
                y = v.get(k, 0) ^ mf[x]
                if y:
                    v[k] = y
                else:
                    v.pop(k, None)
        return False


def find_full_rank_split(mat: SparseMatrix, rows: Sequence[int], cols: Sequence[int],
                         start: int | None = None) -> SBBDResult | None:
    """Smallest ``m1 >= start`` whose split has a horizontal full-rank ``B1``.

    ``start`` defaults to ``ceil(r / 2)`` for ``r`` window rows; ``m1`` runs up
    to ``r - 1``. Returns ``None`` when no such split exists.
    """
    rows = list(rows)
    cols = list(cols)
    r = len(rows)
    if r < 2:
        return None
    if start is None:
        start = (r + 1) // 2
    start = max(start, 1)
    seq = row_sequence(mat, rows, cols)
    pos = {row: k for k, row in enumerate(seq)}
    joins: list[list[int]] = [[] for _ in range(r)]  # columns whose last row is seq[k]
    for c in cols:
        ps = [pos[x] for x in mat.col_rows[c] if x in pos]
        if ps:
            joins[max(ps)].append(c)
    basis = _PrefixBasis(mat.field)
    ncols = 0
    for m1 in range(1, r):
        for c in joins[m1 - 1]:
            ncols += 1
            basis.add({pos[x]: v for x, v in zip(mat.col_rows[c], mat.col_vals[c]) if x in pos})
        if m1 >= start and ncols >= m1 and len(basis) == m1:
            b1, b2, border = _split(mat, seq, cols, m1)
            return _result(seq, cols, m1, b1, b2, border, rows, cols)
    return None


def extract_nonsingular(result: SBBDResult, mat: SparseMatrix):
    """Pick ``m1`` independent ``B1`` columns forming a nonsingular ``F1``.

    Returns ``(f_rows, f_cols, rest_cols, Q)`` where ``Q`` reorders the
    window columns as ``F1`` columns, the remaining ``B1`` columns (``R1``),
    ``B2`` columns and the border.
    """
    m1, n1 = result.m1, result.n1
    if n1 < m1:
        raise ValueError(f"B1 is vertical ({m1} x {n1})")
    rpos = {r: k for k, r in enumerate(result.b1_rows)}
    basis = _PrefixBasis(mat.field)
    chosen, rest = [], []
    for c in result.b1_cols:
        vec = {rpos[x]: v for x, v in zip(mat.col_rows[c], mat.col_vals[c]) if x in rpos}
        if len(chosen) < m1 and basis.add(vec):
            chosen.append(c)
        else:
            rest.append(c)
    if len(chosen) < m1:
        raise ValueError(f"B1 has rank {len(chosen)} < {m1}")
    new_cols = chosen + rest + result.cols[n1:]
    old = {c: k for k, c in enumerate(result.cols)}
    q2 = Permutation.from_order([old[c] for c in new_cols])
    return result.b1_rows, chosen, rest, result.Q.then(q2)
