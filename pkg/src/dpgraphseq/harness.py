"""Experiment harness: error sweeps over mechanisms, budgets, and datasets.

The protocol mirrors a typical utility evaluation: derive public parameters
(degree bounds, thresholds) from the data, run each mechanism over a grid of
privacy budgets for many trials, and score each run by relative L1 error.
Output is deterministic: identical config and seed give byte-identical CSV.
"""
from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import EmptyGraphError, LengthMismatchError
from .graph_core import (
    ArrivalBatch,
    DegreeBounds,
    GraphSequence,
    snapshot,
)
from .mechanisms import MECHANISMS, MechanismConfig, release
from .projection import ProjectionThresholds
from .statistics import StatisticQuery, evaluate

CSV_COLUMNS = (
    "dataset",
    "query",
    "mechanism",
    "epsilon",
    "T",
    "trial",
    "rel_l1_error",
    "skipped_terms",
    "wall_ms",
)


def relative_l1_error(estimates: Sequence[float], truth: Sequence[float]):
    """Sum of |estimate - truth| / truth; zero-truth steps are skipped.

    Returns (error, skipped_terms).  The metric is undefined where the exact
    value is zero, so those steps are omitted and counted instead.
    """
    if len(estimates) != len(truth):
        raise LengthMismatchError(
            f"{len(estimates)} estimates for {len(truth)} exact values"
        )
    err = 0.0
    skipped = 0
    for est, tru in zip(estimates, truth):
        if tru == 0:
            skipped += 1
        else:
            err += abs(est - tru) / tru
    return err, skipped


def _final_degrees(seq: GraphSequence):
    g = snapshot(seq, seq.horizon)
    if not g.nodes:
        raise EmptyGraphError("sequence has no nodes")
    if seq.directed:
        return (
            [g.in_degree(v) for v in g.nodes],
            [g.out_degree(v) for v in g.nodes],
        )
    return ([g.degree(v) for v in g.nodes],)


def derive_tau(seq: GraphSequence, percentile: float) -> int:
    """Nearest-rank percentile of the final (out-)degree multiset, >= 1."""
    if not 0 < percentile < 100:
        raise ValueError("percentile must be in (0, 100)")
    degrees = _final_degrees(seq)[-1]
    value = int(np.percentile(degrees, percentile, method="higher"))
    return max(value, 1)


def derive_bounds(seq: GraphSequence, granularity: int = 5) -> DegreeBounds:
    """Measured max degree rounded up to the next multiple of granularity."""
    if granularity < 1:
        raise ValueError("granularity must be >= 1")

    def up(d):
        return max(granularity, -(-d // granularity) * granularity)

    degrees = _final_degrees(seq)
    if seq.directed:
        return DegreeBounds.directed(up(max(degrees[0])), up(max(degrees[1])))
    return DegreeBounds.undirected(up(max(degrees[0])))


def rebatch(seq: GraphSequence, releases: int) -> GraphSequence:
    """Merge arrival batches into `releases` evenly spaced release windows.

    Window i (1-based) covers original times in ((i-1)*H/R, i*H/R]; a time-0
    batch stays at time 0.  Use this to study how error scales with the
    number of releases over a fixed data span.
    """
    horizon = seq.horizon
    if releases < 1 or horizon < 1:
        raise ValueError("need at least one release and one step")
    merged: dict[int, tuple[list, list]] = {}
    zero: Optional[ArrivalBatch] = None
    for batch in seq.batches:
        if batch.time == 0:
            zero = batch
            continue
        window = max(1, -(-batch.time * releases // horizon))
        window = min(window, releases)
        nodes, edges = merged.setdefault(window, ([], []))
        nodes.extend(batch.nodes)
        edges.extend(batch.edges)
    batches = [] if zero is None else [zero]
    for w in range(1, releases + 1):
        nodes, edges = merged.get(w, ([], []))
        batches.append(ArrivalBatch(time=w, nodes=tuple(nodes), edges=tuple(edges)))
    return GraphSequence(directed=seq.directed, batches=tuple(batches))


def default_projection_grid(seq: GraphSequence, granularity: int = 5):
    """Candidate thresholds: multiples of `granularity` up to measured max."""
    top = derive_bounds(seq, granularity)
    if seq.directed:
        return [
            ProjectionThresholds.directed(i, o)
            for i in range(granularity, top.d_in + 1, granularity)
            for o in range(granularity, top.d_out + 1, granularity)
        ]
    return [
        ProjectionThresholds.undirected(d)
        for d in range(granularity, top.d + 1, granularity)
    ]


@dataclass(frozen=True)
class ExperimentConfig:
    dataset: str
    seq: GraphSequence
    query: StatisticQuery
    epsilons: tuple[float, ...]
    mechanisms: tuple[str, ...] = MECHANISMS
    trials: int = 100
    seed: int = 0
    zero_noise: bool = False
    releases: Optional[int] = None  # rebatch to this horizon when set
    tau: Optional[int] = None
    tau_percentile: float = 90.0
    bounds: Optional[DegreeBounds] = None
    bound_granularity: int = 5
    thresholds: Optional[ProjectionThresholds] = None
    candidates: tuple = ()

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.epsilons or any(e <= 0 for e in self.epsilons):
            raise ValueError("epsilon grid must be positive")
        unknown = set(self.mechanisms) - set(MECHANISMS)
        if unknown:
            raise ValueError(f"unknown mechanisms: {sorted(unknown)}")


@dataclass(frozen=True)
class ResultRow:
    dataset: str
    query: str
    mechanism: str
    epsilon: float
    T: int
    trial: int
    rel_l1_error: float
    skipped_terms: int
    wall_ms: float

    def as_record(self) -> dict:
        return {c: getattr(self, c) for c in CSV_COLUMNS}


@dataclass(frozen=True)
class SummaryRow:
    dataset: str
    query: str
    mechanism: str
    epsilon: float
    T: int
    trials: int
    mean_error: float
    std_error: float


def run_experiment(cfg: ExperimentConfig):
    """Run the sweep; returns (rows, summaries) in deterministic order."""
    seq = cfg.seq
    if cfg.releases is not None and cfg.releases != seq.horizon:
        seq = rebatch(seq, cfg.releases)
    horizon = seq.horizon
    bounds = cfg.bounds or derive_bounds(seq, cfg.bound_granularity)
    query = cfg.query
    if query.kind == "high_degree" and cfg.tau is None:
        query = StatisticQuery.high_degree(derive_tau(seq, cfg.tau_percentile))
    elif query.kind == "high_degree":
        query = StatisticQuery.high_degree(cfg.tau)
    candidates = cfg.candidates
    if (
        "compose_projection" in cfg.mechanisms
        and cfg.thresholds is None
        and not candidates
    ):
        candidates = tuple(default_projection_grid(seq, cfg.bound_granularity))
    truth = [float(evaluate(query, snapshot(seq, t))) for t in range(1, horizon + 1)]

    rows = []
    summaries = []
    for epsilon in cfg.epsilons:
        for mechanism in cfg.mechanisms:
            errors = []
            for trial in range(cfg.trials):
                mc = MechanismConfig(
                    epsilon=epsilon,
                    seed=cfg.seed,
                    trial_id=trial,
                    zero_noise=cfg.zero_noise,
                )
                start = time.perf_counter()
                series = release(
                    mechanism,
                    seq,
                    query,
                    mc,
                    bounds=bounds,
                    thresholds=cfg.thresholds,
                    candidates=candidates,
                )
                wall_ms = (time.perf_counter() - start) * 1000.0
                err, skipped = relative_l1_error(series.estimates, truth)
                errors.append(err)
                rows.append(
                    ResultRow(
                        dataset=cfg.dataset,
                        query=query.label(),
                        mechanism=mechanism,
                        epsilon=epsilon,
                        T=horizon,
                        trial=trial,
                        rel_l1_error=err,
                        skipped_terms=skipped,
                        wall_ms=wall_ms,
                    )
                )
            summaries.append(
                SummaryRow(
                    dataset=cfg.dataset,
                    query=query.label(),
                    mechanism=mechanism,
                    epsilon=epsilon,
                    T=horizon,
                    trials=cfg.trials,
                    mean_error=float(np.mean(errors)),
                    std_error=float(np.std(errors)),
                )
            )
    return rows, summaries


def rows_to_csv(rows: Sequence[ResultRow]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        rec = row.as_record()
        rec["epsilon"] = repr(row.epsilon)
        rec["rel_l1_error"] = repr(row.rel_l1_error)
        rec["wall_ms"] = f"{row.wall_ms:.3f}"
        writer.writerow(rec)
    return buf.getvalue()


def rows_to_json(rows: Sequence[ResultRow]) -> str:
    return json.dumps([row.as_record() for row in rows], indent=2) + "\n"
