"""Command-line experiment harness.

Samples parity-check matrices from a named ensemble (or reads one alist file),
builds the selected encoders, runs one instrumented encode per trial and
writes a CSV report with per-trial rows followed by per-(algorithm, n)
averages.

CSV columns: ``algorithm,n,trial,mu,alpha,delta,blocks,kinds,status``, plus
``prep_seconds`` when ``--timing`` is given. ``delta`` is the gap of the
whole-matrix triangulation for ``ru``/``kaji`` and the sum of the block gaps
for the block-triangular encoders; ``kinds`` counts blocks per kind.
"""
from __future__ import annotations

import argparse
import csv
import io
import sys
import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

from .atm import RUEncoder
from .blocktri import preprocess
from .codegen import ENSEMBLES, SplitMix64, derive_seed, sample_ensemble, sample_proper_cycle_code
from .lufact import LUEncoder
from .oracle import syndrome
from .spmat import CostProfile, SparseMatrix, read_alist

ALGORITHMS = ("ru", "kaji", "blocktri", "blocktri-lu")
COLUMNS = ["algorithm", "n", "trial", "mu", "alpha", "delta", "blocks", "kinds", "status"]


@dataclass
class ExperimentConfig:
    ensemble: str = "e8"
    n: list[int] = field(default_factory=lambda: [1000])
    q: int | None = None
    trials: int = 1
    seed: int = 0
    algorithms: list[str] = field(default_factory=lambda: list(ALGORITHMS))
    atm_solver: str = "ru"
    verify: bool = False
    matrix: str | None = None
    timing: bool = False

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if not self.algorithms:
            raise ValueError("no algorithm selected")
        for a in self.algorithms:
            if a not in ALGORITHMS:
                raise ValueError(f"unknown algorithm {a!r}")
        if self.matrix is None and self.ensemble not in ENSEMBLES and self.ensemble != "cycle":
            raise ValueError(f"unknown ensemble {self.ensemble!r}")
        if self.atm_solver not in ("ru", "lu"):
            raise ValueError("atm solver must be 'ru' or 'lu'")


@dataclass
class ReportRow:
    algorithm: str
    n: int
    trial: int | str
    mu: float
    alpha: float
    prep_seconds: float = 0.0
    delta: int | str = ""
    blocks: int | str = ""
    kinds: str = ""
    status: str = "ok"

    @property
    def ok(self) -> bool:
        return self.status == "ok"


def sample_for(cfg: ExperimentConfig, n: int, trial: int) -> SparseMatrix:
    if cfg.matrix is not None:
        return read_alist(cfg.matrix)
    seed = derive_seed(cfg.seed, n, trial)
    if cfg.ensemble == "cycle":
        return sample_proper_cycle_code(n, n // 2, cfg.q or 8, seed)
    return sample_ensemble(cfg.ensemble, n, seed, q=cfg.q)


def _build(algo: str, h: SparseMatrix, atm_solver: str):
    if algo == "ru":
        enc = RUEncoder(h)
        return enc, {"delta": enc.delta}
    if algo == "kaji":
        enc = LUEncoder(h)
        return enc, {"delta": enc.delta}
    mode = "lu" if algo == "blocktri-lu" else atm_solver
    form = preprocess(h, mode)
    kinds = Counter(b.kind for b in form.blocks)
    meta = {
        "delta": sum(b.delta for b in form.blocks),
        "blocks": len(form.blocks),
        "kinds": ";".join(f"{k}:{kinds[k]}" for k in ("diagonal", "cycle", "atm")),
    }
    return form, meta


def run_trial(cfg: ExperimentConfig, n: int, trial: int) -> list[ReportRow]:
    rows = []
    try:
        h = sample_for(cfg, n, trial)
    except Exception as exc:  # recorded, not fatal
        return [ReportRow(a, n, trial, 0, 0, status=f"error: {exc}") for a in cfg.algorithms]
    rng = SplitMix64(derive_seed(cfg.seed, h.n, trial, 1))
    k = h.n - h.m
    u = [rng.below(h.q) for _ in range(k)]
    for algo in cfg.algorithms:
        t0 = time.perf_counter()
        try:
            enc, meta = _build(algo, h, cfg.atm_solver)
        except Exception as exc:
            rows.append(ReportRow(algo, h.n, trial, 0, 0, status=f"error: {exc}"))
            continue
        elapsed = time.perf_counter() - t0
        prof = CostProfile(q=h.q)
        x = enc.codeword(u, prof)
        status = "ok"
        if cfg.verify and syndrome(h, x).any():
            status = "verify-failed"
        rows.append(ReportRow(algo, h.n, trial, prof.mu, prof.alpha, elapsed, status=status, **meta))
    return rows


def averages(report: Sequence[ReportRow]) -> list[ReportRow]:
    """Mean row per (algorithm, n) over the successful trials."""
    groups: dict[tuple[str, int], list[ReportRow]] = {}
    for r in report:
        if r.trial != "avg" and r.ok:
            groups.setdefault((r.algorithm, r.n), []).append(r)
    out = []
    for (algo, n), rs in groups.items():
        k = len(rs)
        deltas = [r.delta for r in rs if isinstance(r.delta, int)]
        out.append(ReportRow(
            algo, n, "avg",
            sum(r.mu for r in rs) / k,
            sum(r.alpha for r in rs) / k,
            sum(r.prep_seconds for r in rs) / k,
            delta=f"{sum(deltas) / len(deltas):.2f}" if deltas else "",
            status=f"ok ({k} trials)",
        ))
    return out


def run_experiment(cfg: ExperimentConfig) -> list[ReportRow]:
    report: list[ReportRow] = []
    ns = cfg.n if cfg.matrix is None else [None]
    for n in ns:
        for t in range(cfg.trials):
            report.extend(run_trial(cfg, n, t))
    return report + averages(report)


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.2f}"
    return str(v)


def write_csv(report: Sequence[ReportRow], fh, timing: bool = False) -> None:
    cols = COLUMNS + (["prep_seconds"] if timing else [])
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(cols)
    for r in report:
        w.writerow([_fmt(getattr(r, c)) for c in cols])


def emit_scatter(report: Sequence[ReportRow], pair: tuple[str, str], metric: str = "mu") -> list[tuple[float, float]]:
    """Per-trial ``(metric under pair[0], metric under pair[1])`` points."""
    if metric not in ("mu", "alpha"):
        raise ValueError("metric must be 'mu' or 'alpha'")
    a, b = pair
    per: dict[str, dict] = {a: {}, b: {}}
    present = set()
    for r in report:
        present.add(r.algorithm)
        if r.trial == "avg" or not r.ok or r.algorithm not in per:
            continue
        per[r.algorithm][(r.n, r.trial)] = getattr(r, metric)
    if report and not {a, b} <= present:
        missing = sorted({a, b} - present)
        raise ValueError(f"algorithm(s) missing from report: {', '.join(missing)}")
    keys = [k for k in per[a] if k in per[b]]
    return [(per[a][k], per[b][k]) for k in keys]


def format_scatter(points, pair, metric) -> str:
    lines = [f"# {metric}: {pair[0]} {pair[1]}"]
    lines += [f"{x:g} {y:g}" for x, y in points]
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="blocktri-ldpc",
        description="Compare LDPC encoder complexities on random ensembles.",
    )
    p.add_argument("--ensemble", default="e8", help="e8, e2 or cycle (rate-1/2 proper cycle codes)")
    p.add_argument("--n", type=int, nargs="+", default=[1000], help="code length(s)")
    p.add_argument("--q", type=int, default=None, help="field order (default: the ensemble's)")
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--algos", default=",".join(ALGORITHMS),
                   help="comma-separated subset of " + ", ".join(ALGORITHMS))
    p.add_argument("--atm-solver", choices=("ru", "lu"), default="ru",
                   help="solver for triangulated blocks of the 'blocktri' encoder")
    p.add_argument("--verify", action="store_true", help="check every codeword against H")
    p.add_argument("--out", default=None, help="output file (default: stdout)")
    p.add_argument("--plot-data", default=None, metavar="A,B",
                   help="write a two-column scatter table of algorithm A vs B instead of CSV")
    p.add_argument("--metric", choices=("mu", "alpha"), default="mu", help="metric for --plot-data")
    p.add_argument("--matrix", default=None, help="alist file to use instead of sampling")
    p.add_argument("--timing", action="store_true", help="add a preprocessing wall-time column")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    algos = [a.strip() for a in args.algos.split(",") if a.strip()]
    try:
        cfg = ExperimentConfig(
            ensemble=args.ensemble, n=args.n, q=args.q, trials=args.trials, seed=args.seed,
            algorithms=algos, atm_solver=args.atm_solver, verify=args.verify,
            matrix=args.matrix, timing=args.timing,
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report = run_experiment(cfg)
    buf = io.StringIO()
    if args.plot_data:
        pair = tuple(s.strip() for s in args.plot_data.split(","))
        if len(pair) != 2:
            print("error: --plot-data expects two algorithms 'A,B'", file=sys.stderr)
            return 2
        try:
            pts = emit_scatter(report, pair, args.metric)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        buf.write(format_scatter(pts, pair, args.metric))
    else:
        write_csv(report, buf, cfg.timing)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    failed = [r for r in report if r.status == "verify-failed"]
    errors = [r for r in report if r.status.startswith("error")]
    for r in failed + errors:
        print(f"{r.algorithm} n={r.n} trial={r.trial}: {r.status}", file=sys.stderr)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
