"""Associated graphs of weight-2 columns and the cycle-matrix solver.

The associated graph of a matrix window has the window rows as vertices and one
edge per column that has exactly two nonzeros inside the window. A cycle in that
graph picks out a square submatrix of the shape

    g1  0   0  ... b_k
    b1  g2  0  ... 0
    0   b2  g3 ... 0
    ...
    0  ...  0  b_{k-1} g_k

which can be solved with ``3k - 1`` multiplications and ``2k - 2`` additions
once a handful of products are tabulated.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Sequence

from .galois import FieldTable, SingularError
from .spmat import CostProfile, SparseMatrix


@dataclass
class AssociatedGraph:
    vertices: list[int]  # row id of each vertex
    edges: list[tuple[int, int, int]]  # (column id, vertex a, vertex b)
    adj: list[list[tuple[int, int]]]  # per vertex: (edge index, neighbour)

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def num_edges(self) -> int:
        return len(self.edges)


@dataclass
class Cycle:
    """``edges[i]`` joins ``vertices[i]`` and ``vertices[(i + 1) % k]`` (graph indices)."""

    vertices: list[int]
    edges: list[int]

    def __len__(self):
        return len(self.edges)


def build_associated_graph(mat: SparseMatrix, rows: Sequence[int] | None = None,
                           cols: Sequence[int] | None = None) -> AssociatedGraph:
    """Graph of the columns of ``mat[rows, cols]`` that have weight exactly 2."""
    rows = list(range(mat.m)) if rows is None else list(rows)
    cols = range(mat.n) if cols is None else cols
    vidx = {r: k for k, r in enumerate(rows)}
    edges = []
    adj: list[list[tuple[int, int]]] = [[] for _ in rows]
    for c in cols:
        ends = [vidx[r] for r in mat.col_rows[c] if r in vidx]
        if len(ends) == 2:
            a, b = ends
            e = len(edges)
            edges.append((c, a, b))
            adj[a].append((e, b))
            adj[b].append((e, a))
    return AssociatedGraph(rows, edges, adj)


def _two_core(g: AssociatedGraph) -> list[bool]:
    deg = [len(a) for a in g.adj]
    alive = [True] * g.num_vertices
    stack = [v for v, d in enumerate(deg) if d <= 1]
    while stack:
        v = stack.pop()
        if not alive[v]:
            continue
        alive[v] = False
        for _, w in g.adj[v]:
            if alive[w]:
                deg[w] -= 1
                if deg[w] == 1:
                    stack.append(w)
    return alive


def _path(parent, pedge, v):
    verts, edges = [v], []
    while parent[v] is not None:
        edges.append(pedge[v])
        v = parent[v]
        verts.append(v)
    verts.reverse()
    edges.reverse()
    return verts, edges


def smallest_cycle(g: AssociatedGraph, accept: Callable[[Cycle], bool] | None = None) -> Cycle | None:
    """A shortest cycle of ``g`` (parallel edges give 2-cycles), or ``None``.

    Breadth-first search from every vertex of the 2-core, in increasing vertex
    order. With ``accept`` given, cycles it rejects are skipped and the search
    continues with the next candidates, so the result is the shortest accepted
    cycle the searches meet. Ties go to the lowest start vertex, then the
    lexicographically smallest edge sequence.
    """
    alive = _two_core(g)
    best: Cycle | None = None
    best_key = None
    for s in range(g.num_vertices):
        if not alive[s]:
            continue
        if best is not None and len(best) == 2:
            break
        dist = {s: 0}
        parent = {s: None}
        pedge = {s: None}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            du = dist[u]
            if best is not None and 2 * du + 1 > len(best):
                break
            for e, w in g.adj[u]:
                if e == pedge[u] or not alive[w]:
                    continue
                if w not in dist:
                    dist[w] = du + 1
                    parent[w] = u
                    pedge[w] = e
                    queue.append(w)
                    continue
                length = du + dist[w] + 1
                if best is not None and length > len(best):
                    continue
                pu, eu = _path(parent, pedge, u)
                pw, ew = _path(parent, pedge, w)
                if set(pu[1:]) & set(pw[1:]):
                    continue
                verts = pu + pw[:0:-1]
                edges = eu + [e] + ew[::-1]
                cyc = Cycle(verts, edges)
                key = (len(edges), s, tuple(edges))
                if best_key is not None and key >= best_key:
                    continue
                if accept is not None and not accept(cyc):
                    continue
                best, best_key = cyc, key
    return best


def cycle_submatrix_order(g: AssociatedGraph, cyc: Cycle) -> tuple[list[int], list[int]]:
    """Row ids and column ids of the cycle, in cycle-matrix order."""
    return [g.vertices[v] for v in cyc.vertices], [g.edges[e][0] for e in cyc.edges]


# ---------------------------------------------------------------------------
# cycle matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CyclePrecomp:
    field: FieldTable
    k: int
    gamma: tuple
    beta: tuple
    eps: tuple
    ell: int
    eta: tuple  # k - 1 entries
    gamma_inv: tuple
    ell_inv: int


def cycle_entries(c: SparseMatrix) -> tuple[list[int], list[int]]:
    """Diagonal ``gamma`` and off-diagonal ``beta`` of a cycle matrix.

    Raises ``ValueError`` if ``c`` does not have the cycle shape.
    """
    k = c.m
    if c.n != k or k < 2:
        raise ValueError("cycle matrix must be square with k >= 2")
    if c.wt != 2 * k:
        raise ValueError("cycle matrix must have exactly 2k nonzeros")
    gamma = [c.get(i, i) for i in range(k)]
    beta = [c.get((i + 1) % k, i) for i in range(k)]
    if not all(gamma) or not all(beta):
        raise ValueError("matrix does not have the cycle shape")
    return gamma, beta


def cycle_precompute(c: SparseMatrix) -> CyclePrecomp:
    gamma, beta = cycle_entries(c)
    return precompute_from_entries(c.field, gamma, beta)


def precompute_from_entries(gf: FieldTable, gamma: Sequence[int], beta: Sequence[int]) -> CyclePrecomp:
    k = len(gamma)
    if len(beta) != k:
        raise ValueError("gamma and beta must have equal length")
    if not all(gamma) or not all(beta):
        raise ValueError("cycle entries must be nonzero")
    ginv = [gf.inv(g) for g in gamma]
    eps = [gf.mul(b, gi) for b, gi in zip(beta, ginv)]
    prod = 1
    for e in eps:
        prod = gf.mul(prod, e)
    ell = 1 ^ prod
    if ell == 0:
        raise SingularError("cycle matrix is singular (1 + eps_1 ... eps_k = 0)")
    eta = []
    acc = eps[-1]
    for i in range(k - 1):
        eta.append(acc)
        acc = gf.mul(acc, eps[i])
    return CyclePrecomp(
        field=gf, k=k, gamma=tuple(gamma), beta=tuple(beta), eps=tuple(eps),
        ell=ell, eta=tuple(eta), gamma_inv=tuple(ginv), ell_inv=gf.inv(ell),
    )


def cycle_solve(pre: CyclePrecomp, b: Sequence[int], profile: CostProfile | None = None) -> list[int]:
    """Solve ``C w = b`` for a precomputed cycle matrix."""
    k = pre.k
    if len(b) != k:
        raise ValueError(f"right-hand side length {len(b)} != {k}")
    mt = pre.field.mul_rows
    eps, eta, ginv = pre.eps, pre.eta, pre.gamma_inv
    muls = adds = 0
    z = [0] * k
    z[0] = b[0]
    for i in range(1, k):
        z[i] = b[i] ^ mt[eps[i - 1]][z[i - 1]]
        muls += 1
        adds += 1
    y = mt[z[k - 1]][pre.ell_inv]
    w = [0] * k
    w[k - 1] = mt[ginv[k - 1]][y]
    muls += 2
    for i in range(k - 1):
        w[i] = mt[ginv[i]][z[i] ^ mt[y][eta[i]]]
        muls += 2
        adds += 1
    if profile is not None:
        profile.mul_count += muls
        profile.add_count += adds
    return w


def cycle_costs(k: int) -> tuple[int, int]:
    return 3 * k - 1, 2 * (k - 1)


def cycle_matrix(gf: FieldTable, gamma: Sequence[int], beta: Sequence[int]) -> SparseMatrix:
    k = len(gamma)
    entries = [(i, i, gamma[i]) for i in range(k)]
    entries += [((i + 1) % k, i, beta[i]) for i in range(k)]
    return SparseMatrix(k, k, gf, entries)
