"""Block-triangular preprocessing and block back-substitution encoding.

``preprocess`` permutes the rows and columns of ``H`` so that

    H' = P H Q = | F1  K12 ... K1l | H'_I1 |
                 | 0   F2  ... K2l | H'_I2 |
                 | ...             |  ...  |
                 | 0   0   ... Fl  | H'_Il |

with square nonsingular diagonal blocks ``F_i`` of three kinds: diagonal,
cycle, or approximate-triangular (solved through ``Phi`` or through LU). The
parity part is then found block by block from the bottom.

The preprocessing works round by round on a window ``W``: the rows ``[f, m)``
and the columns ``[f, n - g)`` of the current order. Each round fixes one block
in front of the window and may push columns to the rear (message part).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

from .atm import ATMForm, ATMSkeleton, RankDeficientError, approximate_triangulate, ru_costs, ru_precompute, ru_solve
from .cyclegraph import (
    CyclePrecomp,
    build_associated_graph,
    cycle_costs,
    cycle_precompute,
    cycle_solve,
    cycle_submatrix_order,
    precompute_from_entries,
    smallest_cycle,
)
from .galois import SingularError
from .lufact import LUForm, lu_costs, lu_factorize, lu_solve
from .sbbd import find_full_rank_split
from .spmat import (
    CostProfile,
    Permutation,
    SparseMatrix,
    format_alist,
    parse_alist,
    permute,
    spmv_counted,
    weight_stats,
)

FORMAT_NAME = "blocktri-form"
FORMAT_VERSION = 1

DIAGONAL, CYCLE, ATM = "diagonal", "cycle", "atm"


@dataclass
class DiagonalBlockDescriptor:
    """One diagonal block ``F_i`` of ``H'`` and the data needed to solve with it.

    ``payload`` is a list of inverse diagonal entries, a :class:`CyclePrecomp`,
    an :class:`ATMForm` or an :class:`LUForm`. Its local row/column order is
    the block's order inside ``H'``.
    """

    kind: str
    offset: int
    size: int
    payload: object = field(repr=False)
    delta: int = 0
    round: int = -1

    def solve(self, b: Sequence[int], profile: CostProfile | None = None) -> list[int]:
        if self.kind == DIAGONAL:
            if profile is not None:
                profile.mul_count += self.size
            gf, inv = self.payload
            mt = gf.mul_rows
            return [mt[d][x] for d, x in zip(inv, b)]
        if self.kind == CYCLE:
            return cycle_solve(self.payload, b, profile)
        if isinstance(self.payload, LUForm):
            return lu_solve(self.payload, b, profile)
        return ru_solve(self.payload, b, profile)

    def costs(self) -> tuple[int, int]:
        if self.kind == DIAGONAL:
            return self.size, 0
        if self.kind == CYCLE:
            return cycle_costs(self.size)
        if isinstance(self.payload, LUForm):
            return lu_costs(self.payload)
        return ru_costs(self.payload)


@dataclass
class PreprocessState:
    """Row and column orders being built, as lists of original ids."""

    h: SparseMatrix
    row_order: list[int]
    col_order: list[int]
    f: int = 0
    g: int = 0
    t: int = 0
    history: list[tuple[int, int]] = field(default_factory=list)  # (f_t, g_t) per round

    @classmethod
    def start(cls, h: SparseMatrix) -> "PreprocessState":
        return cls(h, list(range(h.m)), list(range(h.n)))

    @property
    def window_rows(self) -> list[int]:
        return self.row_order[self.f:]

    @property
    def window_cols(self) -> list[int]:
        return self.col_order[self.f: self.h.n - self.g]

    def window_weights(self) -> dict[int, int]:
        """Column weight inside the window for each window column."""
        live = set(self.window_rows)
        return {c: sum(1 for r in self.h.col_rows[c] if r in live) for c in self.window_cols}

    def permutations(self) -> tuple[Permutation, Permutation]:
        return Permutation.from_order(self.row_order), Permutation.from_order(self.col_order)


# ---------------------------------------------------------------------------
# sub-steps
# ---------------------------------------------------------------------------

def substep_a(state: PreprocessState, weights: dict[int, int] | None = None):
    """Diagonal block from the weight-1 columns of the window.

    Each window row hit by a weight-1 column gets the first such column (in
    window order); any other weight-1 columns on that row go to the rear.
    Returns ``(block_rows, block_cols, rear_cols, payload)``.
    """
    h = state.h
    weights = state.window_weights() if weights is None else weights
    live = set(state.window_rows)
    chosen: dict[int, int] = {}
    surplus = []
    for c in state.window_cols:
        if weights[c] != 1:
            continue
        r = next(r for r in h.col_rows[c] if r in live)
        if r in chosen:
            surplus.append(c)
        else:
            chosen[r] = c
    if not chosen:
        raise ValueError("window has no weight-1 column")
    cols = list(chosen.values())
    rows = list(chosen)
    gf = h.field
    inv = [gf.inv(h.get(r, c)) for r, c in zip(rows, cols)]
    return rows, cols, surplus, (gf, inv)


def substep_b(state: PreprocessState):
    """Cycle block from a shortest nonsingular cycle of the weight-2 columns.

    Returns ``(block_rows, block_cols, [], CyclePrecomp)`` or ``None`` when
    the field is binary or no usable cycle exists.
    """
    h = state.h
    if h.field.is_binary:
        return None
    g = build_associated_graph(h, state.window_rows, state.window_cols)
    if g.num_edges < 2:
        return None
    gf = h.field

    def entries(cyc):
        rows, cols = cycle_submatrix_order(g, cyc)
        k = len(rows)
        gamma = [h.get(rows[i], cols[i]) for i in range(k)]
        beta = [h.get(rows[(i + 1) % k], cols[i]) for i in range(k)]
        return rows, cols, gamma, beta

    def usable(cyc):
        _, _, gamma, beta = entries(cyc)
        try:
            precompute_from_entries(gf, gamma, beta)
        except SingularError:
            return False
        return True

    cyc = smallest_cycle(g, accept=usable)
    if cyc is None:
        return None
    rows, cols, gamma, beta = entries(cyc)
    return rows, cols, [], precompute_from_entries(gf, gamma, beta)


def _atm_payload(sk: ATMSkeleton, solver_mode: str):
    form = ru_precompute(sk)
    if solver_mode == "lu":
        block = sk.source.submatrix(form.rows, form.cols)
        return form.rows, form.cols, lu_factorize(block), form.delta
    return form.rows, form.cols, form, form.delta


def substep_c(state: PreprocessState, solver_mode: str = "ru", start: int | None = None):
    """Triangulated block carved out by a bordered block-diagonal split.

    Looks for the smallest ``m1`` (from half the window rows) whose first
    block ``B1`` is horizontal with full row rank, triangulates ``B1`` and
    sends its unused columns to the rear. Returns ``None`` when no ``m1``
    below the window row count works.
    """
    h = state.h
    res = find_full_rank_split(h, state.window_rows, state.window_cols, start)
    if res is None:
        return None
    sk = approximate_triangulate(h, res.b1_rows, res.b1_cols)
    rows, cols, payload, delta = _atm_payload(sk, solver_mode)
    used = set(cols)
    rear = [c for c in res.b1_cols if c not in used]
    return rows, cols, rear, payload, delta


def substep_d(state: PreprocessState, solver_mode: str = "ru"):
    """The whole remaining window as one triangulated block."""
    h = state.h
    try:
        sk = approximate_triangulate(h, state.window_rows, state.window_cols)
    except RankDeficientError as exc:
        raise RankDeficientError(f"parity-check matrix is rank deficient: {exc}") from exc
    rows, cols, payload, delta = _atm_payload(sk, solver_mode)
    return rows, cols, [], payload, delta


def substep_e(state: PreprocessState, rows: Sequence[int], cols: Sequence[int], rear: Sequence[int]) -> None:
    """Place a new block at the front of the window and move ``rear`` columns back.

    The other window rows and columns keep their relative order; the new rear
    group goes in front of the older rear columns.
    """
    n = state.h.n
    f, g = state.f, state.g
    brows, bcols, rset = set(rows), set(cols), set(rear)
    if len(brows) != len(rows) or len(bcols) != len(cols) or len(rows) != len(cols):
        raise ValueError("block must be square with distinct rows and columns")
    win_r = state.row_order[f:]
    win_c = state.col_order[f: n - g]
    state.row_order[f:] = list(rows) + [r for r in win_r if r not in brows]
    mid = [c for c in win_c if c not in bcols and c not in rset]
    state.col_order[f:] = list(cols) + mid + list(rear) + state.col_order[n - g:]
    state.f = f + len(rows)
    state.g = g + len(rear)
    state.t += 1
    state.history.append((state.f, state.g))


# ---------------------------------------------------------------------------
# the form
# ---------------------------------------------------------------------------

@dataclass
class BlockTriangularForm:
    h: SparseMatrix
    h_prime: SparseMatrix
    P: Permutation
    Q: Permutation
    blocks: list[DiagonalBlockDescriptor]
    solver_mode: str = "ru"
    history: list[tuple[int, int]] = field(default_factory=list)

    @property
    def m(self) -> int:
        return self.h.m

    @property
    def n(self) -> int:
        return self.h.n

    @property
    def q(self) -> int:
        return self.h.q

    @property
    def kinds(self) -> list[str]:
        return [b.kind for b in self.blocks]

    def encode(self, u: Sequence[int], profile: CostProfile | None = None) -> list[int]:
        return encode(self, u, profile)

    def codeword(self, u: Sequence[int], profile: CostProfile | None = None) -> list[int]:
        """Codeword in the column order of the original ``H``."""
        x = encode(self, u, profile)
        return [x[k] for k in self.Q.forward]

    def check_shape(self) -> None:
        """Raise ``AssertionError`` if ``H'`` is not block triangular as recorded."""
        hp = self.h_prime
        total = 0
        for b in self.blocks:
            assert b.offset == total, "blocks must tile the parity part"
            for i in range(b.offset, b.offset + b.size):
                cols = hp.row_cols[i]
                assert not cols or cols[0] >= b.offset, f"row {i} has a nonzero left of its block"
            total += b.size
        assert total == self.m, "block sizes must add up to m"

    def to_json(self) -> str:
        return dumps(self)


def preprocess(h: SparseMatrix, solver_mode: str = "ru") -> BlockTriangularForm:
    """Bring ``h`` (full row rank) into block-triangular form by permutations."""
    if solver_mode not in ("ru", "lu"):
        raise ValueError(f"unknown solver mode {solver_mode!r}")
    state = PreprocessState.start(h)
    m = h.m
    pending = []
    while state.f < m:
        weights = state.window_weights()
        delta = 0
        if any(w == 1 for w in weights.values()):
            rows, cols, rear, payload = substep_a(state, weights)
            kind = DIAGONAL
        else:
            out = substep_b(state)
            if out is not None:
                rows, cols, rear, payload = out
                kind = CYCLE
            else:
                out = substep_c(state, solver_mode) if len(state.window_rows) > 1 else None
                if out is None:
                    out = substep_d(state, solver_mode)
                rows, cols, rear, payload, delta = out
                kind = ATM
        offset = state.f
        substep_e(state, rows, cols, rear)
        pending.append(DiagonalBlockDescriptor(kind, offset, len(rows), payload, delta, state.t - 1))
    P, Q = state.permutations()
    hp = permute(h, P, Q)
    return BlockTriangularForm(h, hp, P, Q, pending, solver_mode, state.history)


def encode(form: BlockTriangularForm, u: Sequence[int], profile: CostProfile | None = None) -> list[int]:
    """Codeword ``x = (p_1, ..., p_l, u)`` in the column order of ``H'``."""
    m, n = form.m, form.n
    if len(u) != n - m:
        raise ValueError(f"message length {len(u)} != {n - m}")
    x = [0] * m + list(u)
    for b in reversed(form.blocks):
        end = b.offset + b.size
        rhs = spmv_counted(form.h_prime, x[end:], profile, (b.offset, end), (end, n))
        x[b.offset:end] = b.solve(rhs, profile)
    return x


def encoding_costs(form: BlockTriangularForm) -> tuple[int, int]:
    """``(mu', alpha')`` of one :func:`encode` call (raw multiplication count)."""
    mu = alpha = 0
    for b in form.blocks:
        end = b.offset + b.size
        st = weight_stats(form.h_prime, (b.offset, end), (end, form.n))
        bm, ba = b.costs()
        mu += bm + st.wt
        alpha += ba + st.s
    return mu, alpha


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------
#
# JSON object:
#   format, version, solver_mode, m, n, q
#   matrix:    alist text of the original H
#   row_order: original row id at each position of H'
#   col_order: original column id at each position of H'
#   blocks:    [{kind, offset, size, delta}]
# Solver payloads are rebuilt from H' on load.

def dumps(form: BlockTriangularForm) -> str:
    doc = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "solver_mode": form.solver_mode,
        "m": form.m,
        "n": form.n,
        "q": form.q,
        "matrix": format_alist(form.h),
        "row_order": form.P.order(),
        "col_order": form.Q.order(),
        "blocks": [
            {"kind": b.kind, "offset": b.offset, "size": b.size, "delta": b.delta} for b in form.blocks
        ],
    }
    return json.dumps(doc)


def _rebuild_payload(hp: SparseMatrix, kind: str, offset: int, size: int, delta: int, mode: str):
    idx = list(range(offset, offset + size))
    gf = hp.field
    if kind == DIAGONAL:
        return gf, [gf.inv(hp.get(i, i)) for i in idx]
    block = hp.submatrix(idx, idx)
    if kind == CYCLE:
        return cycle_precompute(block)
    if kind != ATM:
        raise ValueError(f"unknown block kind {kind!r}")
    if mode == "lu":
        return lu_factorize(block)
    sk = ATMSkeleton(hp, idx, list(idx), [], delta)
    return ru_precompute(sk)


def loads(text: str) -> BlockTriangularForm:
    doc = json.loads(text)
    if doc.get("format") != FORMAT_NAME:
        raise ValueError("not a serialized block-triangular form")
    if doc.get("version") != FORMAT_VERSION:
        raise ValueError(f"unsupported version {doc.get('version')!r}")
    h = parse_alist(doc["matrix"])
    if (h.m, h.n, h.q) != (doc["m"], doc["n"], doc["q"]):
        raise ValueError("header does not match matrix")
    P = Permutation.from_order(doc["row_order"])
    Q = Permutation.from_order(doc["col_order"])
    hp = permute(h, P, Q)
    mode = doc["solver_mode"]
    blocks = [
        DiagonalBlockDescriptor(
            b["kind"], b["offset"], b["size"],
            _rebuild_payload(hp, b["kind"], b["offset"], b["size"], b["delta"], mode),
            b["delta"],
        )
        for b in doc["blocks"]
    ]
    form = BlockTriangularForm(h, hp, P, Q, blocks, mode)
    form.check_shape()
    return form


def save(form: BlockTriangularForm, path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps(form))


def load(path) -> BlockTriangularForm:
    with open(path) as fh:
        return loads(fh.read())
