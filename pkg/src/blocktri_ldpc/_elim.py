"""Sparse Gaussian elimination over GF(2^p) with Markowitz pivoting.

Rows are ``{col: value}`` dicts and are consumed (mutated) by the elimination.
At each step the pivot minimizes ``(r - 1) * (c - 1)`` over the remaining
nonzeros, where ``r`` and ``c`` are the current row and column counts. The
search walks row and column buckets by increasing count and stops once the
bucket lower bound cannot beat the best candidate; among equal costs the first
candidate met in that walk wins.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from math import inf

from .galois import FieldTable


@dataclass
class Elimination:
    pivots: list[tuple[int, int]]
    #: for pivot k: the pivot row at pivot time, ``{col: value}``
    upper: list[dict[int, int]] = dc_field(default_factory=list)
    #: for pivot k: ``{row: multiplier}`` for every row updated by pivot k
    lower: list[dict[int, int]] = dc_field(default_factory=list)


class _Buckets:
    """Items grouped by current count, for cheap minimum-count lookup."""

    def __init__(self):
        self.sets: dict[int, set[int]] = {}
        self.key: dict[int, int] = {}

    def set(self, item: int, count: int) -> None:
        old = self.key.get(item, 0)
        if old == count:
            return
        if old:
            s = self.sets[old]
            s.discard(item)
            if not s:
                del self.sets[old]
        if count:
            self.sets.setdefault(count, set()).add(item)
            self.key[item] = count
        else:
            self.key.pop(item, None)

    def sorted_keys(self) -> list[int]:
        return sorted(self.sets)


def _pick(rows, col_rows, rb: _Buckets, cb: _Buckets, limit: int | None = None):
    s = cb.sets.get(1)
    if s:
        c = next(iter(s))
        return next(iter(col_rows[c])), c
    s = rb.sets.get(1)
    if s:
        r = next(iter(s))
        return r, next(iter(rows[r]))
    ckeys = cb.sorted_keys()
    if not ckeys:
        return None
    rkeys = rb.sorted_keys()
    cmin, rmin = ckeys[0], rkeys[0]
    best = None
    best_cost = inf
    ci = ri = 0
    seen = 0
    while True:
        cbound = (ckeys[ci] - 1) * (rmin - 1) if ci < len(ckeys) else inf
        rbound = (rkeys[ri] - 1) * (cmin - 1) if ri < len(rkeys) else inf
        if min(cbound, rbound) >= best_cost:
            return best
        if cbound <= rbound:
            k = ckeys[ci]
            ci += 1
            for c in cb.sets[k]:
                for r in col_rows[c]:
                    cost = (len(rows[r]) - 1) * (k - 1)
                    if cost < best_cost:
                        best, best_cost = (r, c), cost
                seen += 1
                if best_cost <= cbound or (limit is not None and seen >= limit):
                    break
        else:
            k = rkeys[ri]
            ri += 1
            for r in rb.sets[k]:
                for c in rows[r]:
                    cost = (k - 1) * (len(col_rows[c]) - 1)
                    if cost < best_cost:
                        best, best_cost = (r, c), cost
                seen += 1
                if best_cost <= rbound or (limit is not None and seen >= limit):
                    break
        if limit is not None and seen >= limit and best is not None:
            return best


def eliminate(rows: list[dict[int, int]], ncols: int, gf: FieldTable,
              record: bool = False, max_pivots: int | None = None,
              search_limit: int | None = None) -> Elimination:
    """Eliminate until no nonzero is left (or ``max_pivots`` pivots were taken).

    ``len(result.pivots)`` is the rank of the input. With ``record=True`` the
    pivot rows and multipliers are kept, which is what an LU factorization
    needs. ``search_limit`` caps how many rows/columns the pivot search
    inspects per step; the rank does not depend on it, only the fill does.
    """
    mt = gf.mul_rows
    inv = gf.inv_table
    col_rows: list[set[int]] = [set() for _ in range(ncols)]
    rb, cb = _Buckets(), _Buckets()
    for i, r in enumerate(rows):
        for j in r:
            col_rows[j].add(i)
        rb.set(i, len(r))
    for j in range(ncols):
        cb.set(j, len(col_rows[j]))

    out = Elimination(pivots=[])
    limit = max_pivots if max_pivots is not None else min(len(rows), ncols)
    while len(out.pivots) < limit:
        pick = _pick(rows, col_rows, rb, cb, search_limit)
        if pick is None:
            break
        r, c = pick
        prow = rows[r]
        rows[r] = {}
        rb.set(r, 0)
        touched_cols = set(prow)
        for j in prow:
            col_rows[j].discard(r)
        a_inv = inv[prow[c]]
        others = list(col_rows[c])
        multipliers = {}
        pitems = [(j, v) for j, v in prow.items() if j != c]
        for i in others:
            ri = rows[i]
            f = mt[ri.pop(c)][a_inv]
            multipliers[i] = f
            mf = mt[f]
            for j, v in pitems:
                nv = ri.get(j, 0) ^ mf[v]
                if nv:
                    if j not in ri:
                        col_rows[j].add(i)
                    ri[j] = nv
                elif j in ri:
                    del ri[j]
                    col_rows[j].discard(i)
            rb.set(i, len(ri))
        col_rows[c].clear()
        for j in touched_cols:
            cb.set(j, len(col_rows[j]))
        out.pivots.append((r, c))
        if record:
            out.upper.append(prow)
            out.lower.append(multipliers)
    return out
