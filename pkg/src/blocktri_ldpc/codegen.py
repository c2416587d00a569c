"""Random LDPC parity-check matrices from degree-distribution pairs.

Degree distributions are edge-perspective: ``lambda_i`` is the fraction of
edges attached to variable nodes (columns) of degree ``i``, and likewise
``rho_i`` for check nodes (rows). Sampling uses a configuration model driven
by a SplitMix64 generator, so a seed fixes the matrix on every platform.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .galois import FieldTable, field_for_order
from .spmat import SparseMatrix, gauss_rank

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """SplitMix64 generator (Steele, Lea and Flood); 64-bit state, 64-bit output."""

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        """Uniform integer in ``[0, bound)`` by rejection sampling."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % bound

    def shuffle(self, seq: list) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(seq) - 1, 0, -1):
            j = self.below(i + 1)
            seq[i], seq[j] = seq[j], seq[i]


def derive_seed(seed: int, *tags: int) -> int:
    """Child seed for a (seed, tag...) path, e.g. one per trial."""
    g = SplitMix64(seed)
    out = g.next_u64()
    for t in tags:
        g = SplitMix64(out ^ (t * 0xD1B54A32D192ED03 & _MASK64))
        out = g.next_u64()
    return out


@dataclass(frozen=True)
class DegreeDistribution:
    """Edge-perspective degree distribution ``{degree: fraction}``."""

    fractions: tuple[tuple[int, float], ...]

    def __init__(self, fractions: Mapping[int, float] | Sequence[tuple[int, float]]):
        items = sorted(dict(fractions).items())
        if not items:
            raise ValueError("empty degree distribution")
        for d, f in items:
            if int(d) != d or d < 1:
                raise ValueError(f"invalid degree {d}")
            if f < 0:
                raise ValueError(f"negative fraction for degree {d}")
        total = sum(f for _, f in items)
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"fractions sum to {total!r}, not 1")
        object.__setattr__(self, "fractions", tuple((int(d), float(f)) for d, f in items if f > 0))

    @classmethod
    def from_polynomial(cls, coeffs: Mapping[int, float], normalize: bool = False) -> "DegreeDistribution":
        """From ``{exponent: coefficient}`` of ``sum c x^(d-1)``.

        With ``normalize`` the coefficients are rescaled to sum to 1 first,
        for published lists whose rounding leaves them slightly off.
        """
        total = sum(coeffs.values()) if normalize else 1.0
        return cls({e + 1: c / total for e, c in coeffs.items()})

    @property
    def degrees(self) -> list[int]:
        return [d for d, _ in self.fractions]

    def inverse_mean(self) -> float:
        """``sum f_d / d``, the integral of the polynomial over [0, 1]."""
        return sum(f / d for d, f in self.fractions)

    def node_fractions(self) -> dict[int, float]:
        s = self.inverse_mean()
        return {d: f / d / s for d, f in self.fractions}


# coefficient lists of the two benchmark ensembles, keyed by exponent; the
# printed lambda coefficients sum to 1 only up to rounding
E8_LAMBDA = DegreeDistribution.from_polynomial({1: 0.49978, 2: 0.17434, 3: 0.29967, 4: 0.02622}, normalize=True)
E8_RHO = DegreeDistribution.from_polynomial({4: 0.81315, 5: 0.18685}, normalize=True)
E2_LAMBDA = DegreeDistribution.from_polynomial({1: 0.0739196, 2: 0.657891, 12: 0.268189}, normalize=True)
E2_RHO = DegreeDistribution.from_polynomial({4: 0.390753, 5: 0.361589, 9: 0.247658}, normalize=True)

ENSEMBLES = {
    "e8": (E8_LAMBDA, E8_RHO, 8),
    "e2": (E2_LAMBDA, E2_RHO, 2),
}


def derive_m(n: int, lam: DegreeDistribution, rho: DegreeDistribution) -> int:
    """Number of checks ``round(n * int(rho) / int(lambda))``."""
    m = round(n * rho.inverse_mean() / lam.inverse_mean())
    if not 0 < m < n:
        raise ValueError(f"degenerate number of checks m={m} for n={n}")
    return m


def quantize_counts(total: int, dist: DegreeDistribution) -> dict[int, int]:
    """Node counts per degree summing to ``total`` (largest remainder)."""
    fr = dist.node_fractions()
    exact = {d: total * f for d, f in fr.items()}
    counts = {d: int(x) for d, x in exact.items()}
    left = total - sum(counts.values())
    order = sorted(exact, key=lambda d: (-(exact[d] - counts[d]), d))
    for d in order[:left]:
        counts[d] += 1
    return counts


def _balance(counts: dict[int, int], target_edges: int, exact: dict[int, float]) -> dict[int, int]:
    """Move nodes between degree classes until the edge total is ``target_edges``."""
    counts = dict(counts)
    degs = sorted(counts)
    if len(degs) == 1:
        if target_edges != degs[0] * counts[degs[0]]:
            raise ValueError("edge totals cannot be balanced with a single degree")
        return counts
    while True:
        diff = target_edges - sum(d * c for d, c in counts.items())
        if diff == 0:
            return counts
        best = None
        for a in degs:
            if counts[a] == 0:
                continue
            for b in degs:
                step = b - a
                if step == 0 or (step > 0) != (diff > 0) or abs(step) > abs(diff):
                    continue
                dev = max(abs(counts[a] - 1 - exact[a]), abs(counts[b] + 1 - exact[b]))
                key = (dev, -abs(step), a, b)
                if best is None or key < best[0]:
                    best = (key, a, b)
        if best is None:
            raise ValueError("edge totals cannot be balanced")
        _, a, b = best
        counts[a] -= 1
        counts[b] += 1


@dataclass
class EnsembleConfig:
    n: int
    q: int
    lam: DegreeDistribution
    rho: DegreeDistribution
    seed: int = 0
    max_attempts: int = 50
    m: int = field(init=False)

    def __post_init__(self):
        self.m = derive_m(self.n, self.lam, self.rho)
        field_for_order(self.q)

    @classmethod
    def named(cls, name: str, n: int, seed: int = 0, q: int | None = None, **kw) -> "EnsembleConfig":
        lam, rho, q0 = ENSEMBLES[name]
        return cls(n=n, q=q0 if q is None else q, lam=lam, rho=rho, seed=seed, **kw)


def node_degrees(cfg: EnsembleConfig) -> tuple[list[int], list[int]]:
    """Column and row degree sequences (sorted ascending) with equal edge totals."""
    col_counts = quantize_counts(cfg.n, cfg.lam)
    edges = sum(d * c for d, c in col_counts.items())
    row_counts = quantize_counts(cfg.m, cfg.rho)
    exact = {d: cfg.m * f for d, f in cfg.rho.node_fractions().items()}
    row_counts = _balance(row_counts, edges, exact)
    cols = [d for d in sorted(col_counts) for _ in range(col_counts[d])]
    rows = [d for d in sorted(row_counts) for _ in range(row_counts[d])]
    return cols, rows


def _random_value(rng: SplitMix64, q: int) -> int:
    return 1 if q == 2 else 1 + rng.below(q - 1)


def _match(rng: SplitMix64, col_deg: list[int], row_deg: list[int], tries: int = 20):
    """Configuration-model pairing without repeated (row, col) pairs, or ``None``."""
    col_sock = [c for c, d in enumerate(col_deg) for _ in range(d)]
    row_sock = [r for r, d in enumerate(row_deg) for _ in range(d)]
    rng.shuffle(row_sock)
    seen: set[tuple[int, int]] = set()
    bad = []
    for k, (c, r) in enumerate(zip(col_sock, row_sock)):
        if (r, c) in seen:
            bad.append(k)
        else:
            seen.add((r, c))
    e = len(col_sock)
    badset = set(bad)
    for k in bad:
        c, r = col_sock[k], row_sock[k]
        for _ in range(tries * 10):
            j = rng.below(e)
            c2, r2 = col_sock[j], row_sock[j]
            if j in badset or (r2, c) in seen or (r, c2) in seen or r2 == r:
                continue
            seen.discard((r2, c2))
            seen.add((r2, c))
            seen.add((r, c2))
            row_sock[k], row_sock[j] = r2, r
            break
        else:
            return None
    return list(zip(row_sock, col_sock))


def sample_matrix(cfg: EnsembleConfig) -> SparseMatrix:
    """Full-rank parity-check matrix from the ensemble, deterministic in ``cfg.seed``."""
    gf = field_for_order(cfg.q)
    col_deg, row_deg = node_degrees(cfg)
    if max(col_deg) > cfg.m or max(row_deg) > cfg.n:
        raise ValueError("degrees exceed matrix dimensions")
    rng = SplitMix64(cfg.seed)
    for _ in range(cfg.max_attempts):
        pairs = _match(rng, col_deg, row_deg)
        if pairs is None:
            continue
        entries = [(r, c, _random_value(rng, cfg.q)) for r, c in pairs]
        h = SparseMatrix(cfg.m, cfg.n, gf, entries)
        if gauss_rank(h) == cfg.m:
            return h
    raise RuntimeError(f"no full-rank matrix within {cfg.max_attempts} attempts")


def sample_ensemble(name: str, n: int, seed: int, **kw) -> SparseMatrix:
    return sample_matrix(EnsembleConfig.named(name, n, seed=seed, **kw))


def _connected(m: int, edges: list[tuple[int, int]]) -> bool:
    adj: list[list[int]] = [[] for _ in range(m)]
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    seen = [False] * m
    seen[0] = True
    dq = deque([0])
    cnt = 1
    while dq:
        v = dq.popleft()
        for w in adj[v]:
            if not seen[w]:
                seen[w] = True
                cnt += 1
                dq.append(w)
    return cnt == m


def sample_proper_cycle_code(n: int, m: int, q: int, seed: int, max_attempts: int = 100) -> SparseMatrix:
    """Weight-2-column matrix whose associated graph is connected and rank is ``m``.

    Row degrees are as equal as possible (``2n/m`` rounded both ways); parallel
    edges are allowed, self-loops are not.
    """
    if q <= 2:
        raise ValueError("binary cycle codes are never full rank over their cycles; need q > 2")
    if not n > m >= 2:
        raise ValueError("need n > m >= 2")
    gf: FieldTable = field_for_order(q)
    base, extra = divmod(2 * n, m)
    deg = [base + (1 if r < extra else 0) for r in range(m)]
    rng = SplitMix64(seed)
    for _ in range(max_attempts):
        socks = [r for r, d in enumerate(deg) for _ in range(d)]
        rng.shuffle(socks)
        ok = True
        for k in range(0, len(socks), 2):
            if socks[k] != socks[k + 1]:
                continue
            for _ in range(200):
                j = rng.below(len(socks))
                mate = j ^ 1
                if j // 2 == k // 2:
                    continue
                if socks[j] != socks[k + 1] and socks[mate] != socks[k]:
                    socks[k], socks[j] = socks[j], socks[k]
                    break
            else:
                ok = False
                break
        if not ok:
            continue
        edges = [(socks[k], socks[k + 1]) for k in range(0, len(socks), 2)]
        if not _connected(m, edges):
            continue
        entries = []
        for c, (a, b) in enumerate(edges):
            entries.append((a, c, _random_value(rng, q)))
            entries.append((b, c, _random_value(rng, q)))
        h = SparseMatrix(m, n, gf, entries)
        if gauss_rank(h) == m:
            return h
    raise RuntimeError(f"no proper cycle code within {max_attempts} attempts")
