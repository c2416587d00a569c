"""Sparse matrices over GF(2^p), permutations and counted products.

A :class:`SparseMatrix` keeps its nonzeros twice, once per row and once per
column, both sorted by index. It is treated as immutable: every transform
(:func:`permute`, :meth:`SparseMatrix.submatrix`) returns a new matrix.

Operation counting follows one convention everywhere in the package: a
matrix-vector product with ``Z`` costs ``wt(Z)`` multiplications (an entry equal
to 1 still counts) and ``wt(Z) - rows_touched(Z)`` additions, because the first
product of each row is assigned rather than added.
"""
from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .galois import FieldTable, SingularError, field_for_order


class Permutation:
    """Bijection on ``range(size)``; ``perm(i)`` is the new position of ``i``."""

    __slots__ = ("forward",)

    def __init__(self, forward: Iterable[int]):
        fwd = tuple(int(i) for i in forward)
        if sorted(fwd) != list(range(len(fwd))):
            raise ValueError("not a permutation")
        self.forward = fwd

    @classmethod
    def identity(cls, size: int) -> "Permutation":
        return cls(range(size))

    @classmethod
    def from_order(cls, order: Sequence[int]) -> "Permutation":
        """Permutation that moves ``order[k]`` to position ``k``."""
        fwd = [0] * len(order)
        for k, i in enumerate(order):
            fwd[i] = k
        return cls(fwd)

    @property
    def size(self) -> int:
        return len(self.forward)

    def __call__(self, i: int) -> int:
        return self.forward[i]

    def __len__(self):
        return len(self.forward)

    def order(self) -> list[int]:
        """Inverse map as a list: ``order()[k]`` is the index sent to ``k``."""
        out = [0] * len(self.forward)
        for i, k in enumerate(self.forward):
            out[k] = i
        return out

    def inverse(self) -> "Permutation":
        return Permutation(self.order())

    def then(self, other: "Permutation") -> "Permutation":
        """Apply ``self`` first, then ``other``."""
        if other.size != self.size:
            raise ValueError("size mismatch")
        return Permutation(other.forward[k] for k in self.forward)

    def apply(self, vec: Sequence) -> list:
        """Move ``vec[i]`` to position ``perm(i)``."""
        out = [None] * len(vec)
        for i, k in enumerate(self.forward):
            out[k] = vec[i]
        return out

    def __eq__(self, other):
        return isinstance(other, Permutation) and other.forward == self.forward

    def __hash__(self):
        return hash(self.forward)

    def __repr__(self):
        return f"Permutation({list(self.forward)})"


@dataclass(frozen=True)
class WeightStats:
    wt: int
    z: int

    @property
    def s(self) -> int:
        return self.wt - self.z


@dataclass
class CostProfile:
    """Tallies of field operations actually executed.

    For the binary field the reported multiplication count :attr:`mu` is 0,
    since every nonzero entry is 1; the raw tally is still kept.
    """

    mul_count: int = 0
    add_count: int = 0
    q: int | None = None

    @property
    def mu(self) -> int:
        return 0 if self.q == 2 else self.mul_count

    @property
    def alpha(self) -> int:
        return self.add_count

    def reset(self) -> None:
        self.mul_count = 0
        self.add_count = 0


class SparseMatrix:
    """Sparse ``m x n`` matrix over a :class:`FieldTable`."""

    __slots__ = ("m", "n", "field", "row_cols", "row_vals", "col_rows", "col_vals", "_wt")

    def __init__(self, m: int, n: int, field: FieldTable, entries: Iterable[tuple[int, int, int]] = ()):
        self.m = int(m)
        self.n = int(n)
        self.field = field
        q = field.q
        rows: list[dict[int, int]] = [dict() for _ in range(self.m)]
        for i, j, v in entries:
            i, j, v = int(i), int(j), int(v)
            if not (0 <= i < self.m and 0 <= j < self.n):
                raise IndexError(f"entry ({i}, {j}) outside {self.m}x{self.n}")
            if not 0 <= v < q:
                raise ValueError(f"value {v} not in GF({q})")
            if j in rows[i]:
                raise ValueError(f"duplicate entry ({i}, {j})")
            if v:
                rows[i][j] = v
        self._fill(rows)

    def _fill(self, rows: list[dict[int, int]]) -> None:
        self.row_cols = []
        self.row_vals = []
        col_rows: list[list[int]] = [[] for _ in range(self.n)]
        col_vals: list[list[int]] = [[] for _ in range(self.n)]
        wt = 0
        for i, r in enumerate(rows):
            cols = sorted(r)
            vals = [r[j] for j in cols]
            self.row_cols.append(cols)
            self.row_vals.append(vals)
            wt += len(cols)
            for j, v in zip(cols, vals):
                col_rows[j].append(i)
                col_vals[j].append(v)
        self.col_rows = col_rows
        self.col_vals = col_vals
        self._wt = wt

    @classmethod
    def from_rows(cls, m: int, n: int, field: FieldTable, rows: Sequence[dict[int, int]]) -> "SparseMatrix":
        """Build from per-row ``{col: value}`` dicts (zero values dropped)."""
        mat = cls.__new__(cls)
        mat.m, mat.n, mat.field = int(m), int(n), field
        if len(rows) != mat.m:
            raise ValueError("row count mismatch")
        clean = []
        for r in rows:
            d = {int(j): int(v) for j, v in r.items() if v}
            if d and (min(d) < 0 or max(d) >= mat.n):
                raise IndexError("column index out of range")
            clean.append(d)
        mat._fill(clean)
        return mat

    @classmethod
    def from_dense(cls, a, field: FieldTable | int) -> "SparseMatrix":
        if isinstance(field, int):
            field = field_for_order(field)
        a = np.asarray(a)
        if a.ndim != 2:
            raise ValueError("expected a 2-d array")
        ii, jj = np.nonzero(a)
        return cls(a.shape[0], a.shape[1], field, zip(ii.tolist(), jj.tolist(), a[ii, jj].tolist()))

    @classmethod
    def identity(cls, k: int, field: FieldTable) -> "SparseMatrix":
        return cls(k, k, field, ((i, i, 1) for i in range(k)))

    # -- access ---------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.m, self.n)

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def wt(self) -> int:
        return self._wt

    def entries(self) -> Iterator[tuple[int, int, int]]:
        for i in range(self.m):
            for j, v in zip(self.row_cols[i], self.row_vals[i]):
                yield i, j, v

    def get(self, i: int, j: int) -> int:
        cols = self.row_cols[i]
        k = bisect_left(cols, j)
        if k < len(cols) and cols[k] == j:
            return self.row_vals[i][k]
        return 0

    def row(self, i: int) -> dict[int, int]:
        return dict(zip(self.row_cols[i], self.row_vals[i]))

    def col(self, j: int) -> dict[int, int]:
        return dict(zip(self.col_rows[j], self.col_vals[j]))

    def row_weights(self) -> list[int]:
        return [len(c) for c in self.row_cols]

    def col_weights(self) -> list[int]:
        return [len(r) for r in self.col_rows]

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.m, self.n), dtype=np.uint8)
        for i, j, v in self.entries():
            out[i, j] = v
        return out

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "SparseMatrix":
        """Copy of the rows ``rows`` and columns ``cols`` in the given order."""
        cpos = {c: k for k, c in enumerate(cols)}
        new_rows = []
        for i in rows:
            d = {}
            for j, v in zip(self.row_cols[i], self.row_vals[i]):
                k = cpos.get(j)
                if k is not None:
                    d[k] = v
            new_rows.append(d)
        return SparseMatrix.from_rows(len(rows), len(cols), self.field, new_rows)

    def weight_stats(self, row_range: tuple[int, int] | None = None,
                     col_range: tuple[int, int] | None = None) -> WeightStats:
        return weight_stats(self, row_range, col_range)

    def matvec(self, v: Sequence[int]) -> list[int]:
        """Uncounted product ``M v``."""
        if len(v) != self.n:
            raise ValueError(f"vector length {len(v)} != {self.n}")
        mt = self.field.mul_rows
        out = []
        for cols, vals in zip(self.row_cols, self.row_vals):
            acc = 0
            for j, a in zip(cols, vals):
                acc ^= mt[a][v[j]]
            out.append(acc)
        return out

    def __eq__(self, other):
        return (
            isinstance(other, SparseMatrix)
            and other.shape == self.shape
            and other.field == self.field
            and other.row_cols == self.row_cols
            and other.row_vals == self.row_vals
        )

    def __repr__(self):
        return f"SparseMatrix({self.m}x{self.n}, q={self.q}, wt={self.wt})"


def weight_stats(mat: SparseMatrix, row_range: tuple[int, int] | None = None,
                 col_range: tuple[int, int] | None = None) -> WeightStats:
    """``wt``, touched-row count ``z`` and ``s = wt - z`` of a window of ``mat``."""
    r0, r1 = row_range if row_range is not None else (0, mat.m)
    c0, c1 = col_range if col_range is not None else (0, mat.n)
    if not (0 <= r0 <= r1 <= mat.m and 0 <= c0 <= c1 <= mat.n):
        raise IndexError("window out of bounds")
    wt = z = 0
    full_cols = c0 == 0 and c1 == mat.n
    for i in range(r0, r1):
        cols = mat.row_cols[i]
        k = len(cols) if full_cols else sum(1 for j in cols if c0 <= j < c1)
        wt += k
        z += k > 0
    return WeightStats(wt, z)


def permute(mat: SparseMatrix, row_perm: Permutation, col_perm: Permutation) -> SparseMatrix:
    """Entry ``(i, j, v)`` goes to ``(row_perm(i), col_perm(j), v)``."""
    if row_perm.size != mat.m or col_perm.size != mat.n:
        raise ValueError(
            f"permutation sizes ({row_perm.size}, {col_perm.size}) do not match {mat.shape}"
        )
    P, Q = row_perm.forward, col_perm.forward
    rows: list[dict[int, int]] = [None] * mat.m  # type: ignore[list-item]
    for i in range(mat.m):
        rows[P[i]] = {Q[j]: v for j, v in zip(mat.row_cols[i], mat.row_vals[i])}
    return SparseMatrix.from_rows(mat.m, mat.n, mat.field, rows)


def spmv_counted(mat: SparseMatrix, v: Sequence[int], profile: CostProfile | None = None,
                 row_range: tuple[int, int] | None = None,
                 col_range: tuple[int, int] | None = None) -> list[int]:
    """Product of a window of ``mat`` with ``v``, tallying operations.

    ``v`` is indexed by the columns of the window (``len(v) == c1 - c0``).
    Rows of the window with no nonzero give 0 and cost nothing.
    """
    r0, r1 = row_range if row_range is not None else (0, mat.m)
    c0, c1 = col_range if col_range is not None else (0, mat.n)
    if len(v) != c1 - c0:
        raise ValueError(f"vector length {len(v)} != window width {c1 - c0}")
    mt = mat.field.mul_rows
    out = []
    muls = adds = 0
    full = c0 == 0 and c1 == mat.n
    for i in range(r0, r1):
        acc = 0
        first = True
        for j, a in zip(mat.row_cols[i], mat.row_vals[i]):
            if not full and not c0 <= j < c1:
                continue
            prod = mt[a][v[j - c0]]
            muls += 1
            if first:
                acc = prod
                first = False
            else:
                acc ^= prod
                adds += 1
        out.append(acc)
    if profile is not None:
        profile.mul_count += muls
        profile.add_count += adds
    return out


def gauss_rank(mat: SparseMatrix) -> int:
    """Rank over the field, by elimination on a private copy."""
    from ._elim import eliminate

    rows = [mat.row(i) for i in range(mat.m)]
    return len(eliminate(rows, mat.n, mat.field, search_limit=4).pivots)


# ---------------------------------------------------------------------------
# extended alist files
# ---------------------------------------------------------------------------
#
#   m n q
#   <n column degrees>
#   <m row degrees>
#   one line per column: r_1 v_1 r_2 v_2 ...   (1-based rows; values omitted for q = 2)

def format_alist(mat: SparseMatrix) -> str:
    binary = mat.q == 2
    lines = [f"{mat.m} {mat.n} {mat.q}",
             " ".join(str(d) for d in mat.col_weights()),
             " ".join(str(d) for d in mat.row_weights())]
    for j in range(mat.n):
        if binary:
            lines.append(" ".join(str(i + 1) for i in mat.col_rows[j]))
        else:
            lines.append(" ".join(f"{i + 1} {v}" for i, v in zip(mat.col_rows[j], mat.col_vals[j])))
    return "\n".join(lines) + "\n"


def parse_alist(text: str) -> SparseMatrix:
    lines = text.splitlines()
    if len(lines) < 3:
        raise ValueError("truncated alist file")
    try:
        m, n, q = (int(t) for t in lines[0].split())
    except ValueError as exc:
        raise ValueError("header must be 'm n q'") from exc
    field = field_for_order(q)
    col_deg = [int(t) for t in lines[1].split()]
    row_deg = [int(t) for t in lines[2].split()]
    if len(col_deg) != n or len(row_deg) != m:
        raise ValueError("degree list length mismatch")
    if len(lines) < 3 + n:
        raise ValueError("missing column lines")
    entries = []
    for j in range(n):
        toks = [int(t) for t in lines[3 + j].split()]
        if q == 2:
            pairs = [(r, 1) for r in toks]
        else:
            if len(toks) % 2:
                raise ValueError(f"column {j + 1}: odd number of tokens")
            pairs = list(zip(toks[0::2], toks[1::2]))
        if len(pairs) != col_deg[j]:
            raise ValueError(f"column {j + 1}: degree mismatch")
        for r, v in pairs:
            if v == 0:
                raise ValueError(f"column {j + 1}: stored zero")
            entries.append((r - 1, j, v))
    mat = SparseMatrix(m, n, field, entries)
    if mat.row_weights() != row_deg:
        raise ValueError("row degree list does not match entries")
    return mat


def read_alist(path) -> SparseMatrix:
    with open(path) as fh:
        return parse_alist(fh.read())


def write_alist(mat: SparseMatrix, path) -> None:
    with open(path, "w") as fh:
        fh.write(format_alist(mat))


# ---------------------------------------------------------------------------
# triangular solves
# ---------------------------------------------------------------------------

def _diag_inverses(mat: SparseMatrix) -> list[int]:
    gf = mat.field
    out = []
    for i in range(mat.m):
        d = mat.get(i, i)
        if d == 0:
            raise SingularError(f"zero diagonal entry at {i}")
        out.append(gf.inv(d))
    return out


def solve_lower(mat: SparseMatrix, b: Sequence[int], profile: CostProfile | None = None,
                diag_inv: Sequence[int] | None = None) -> list[int]:
    """Forward substitution for lower-triangular ``mat`` with nonzero diagonal.

    Costs ``wt(mat)`` multiplications and ``wt(mat) - m`` additions.
    """
    k = mat.m
    if mat.n != k or len(b) != k:
        raise ValueError("dimension mismatch")
    if diag_inv is None:
        diag_inv = _diag_inverses(mat)
    mt = mat.field.mul_rows
    x = [0] * k
    muls = adds = 0
    for i in range(k):
        acc = b[i]
        for j, v in zip(mat.row_cols[i], mat.row_vals[i]):
            if j < i:
                acc ^= mt[v][x[j]]
                muls += 1
                adds += 1
            elif j > i:
                raise ValueError("matrix is not lower triangular")
        x[i] = mt[diag_inv[i]][acc]
        muls += 1
    if profile is not None:
        profile.mul_count += muls
        profile.add_count += adds
    return x


def solve_upper(mat: SparseMatrix, b: Sequence[int], profile: CostProfile | None = None,
                diag_inv: Sequence[int] | None = None) -> list[int]:
    """Backward substitution for upper-triangular ``mat`` with nonzero diagonal."""
    k = mat.m
    if mat.n != k or len(b) != k:
        raise ValueError("dimension mismatch")
    if diag_inv is None:
        diag_inv = _diag_inverses(mat)
    mt = mat.field.mul_rows
    x = [0] * k
    muls = adds = 0
    for i in range(k - 1, -1, -1):
        acc = b[i]
        for j, v in zip(mat.row_cols[i], mat.row_vals[i]):
            if j > i:
                acc ^= mt[v][x[j]]
                muls += 1
                adds += 1
            elif j < i:
                raise ValueError("matrix is not upper triangular")
        x[i] = mt[diag_inv[i]][acc]
        muls += 1
    if profile is not None:
        profile.mul_count += muls
        profile.add_count += adds
    return x
