"""Greedy degree-bounding projection.

Edges are considered one by one in a fixed ordering that respects edge time
stamps; an edge is admitted only while both endpoint counters sit strictly
below the projection thresholds.  The single-graph and sequence forms share
the admission loop; the sequence form keeps admission state across steps so
projected edge sets are nested over time.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import OrderingMismatchError
from .graph_core import (
    Edge,
    GraphSequence,
    GraphView,
    build_view,
    canonical_edge,
)


@dataclass(frozen=True)
class ProjectionThresholds:
    """Projection parameter: D-tilde, or (in, out) for directed graphs."""

    d: Optional[int] = None
    d_in: Optional[int] = None
    d_out: Optional[int] = None

    def __post_init__(self):
        if self.d is not None:
            if self.d < 1:
                raise ValueError("projection threshold must be >= 1")
        elif self.d_in is None or self.d_out is None:
            raise ValueError("directed projection needs both thresholds")
        elif self.d_in < 1 or self.d_out < 1:
            raise ValueError("projection thresholds must be >= 1")

    @classmethod
    def undirected(cls, d: int) -> "ProjectionThresholds":
        return cls(d=d)

    @classmethod
    def directed(cls, d_in: int, d_out: int) -> "ProjectionThresholds":
        return cls(d_in=d_in, d_out=d_out)

    @property
    def is_directed(self) -> bool:
        return self.d is None


@dataclass(frozen=True)
class EdgeOrdering:
    """Per-step edge lists; concatenation is the total order Lambda.

    Within the list for one step every edge has that step's time stamp, and
    all edges of step t precede all edges of any later step.  Removing the
    edges incident to one node preserves the relative order of the rest,
    which is the stability the projection's privacy argument needs.
    """

    steps: tuple[tuple[int, tuple[Edge, ...]], ...]

    def flat(self) -> tuple[Edge, ...]:
        return tuple(e for _, edges in self.steps for e in edges)

    def rank(self) -> dict[Edge, int]:
        return {e: i for i, e in enumerate(self.flat())}

    def prefix(self, t: int) -> "EdgeOrdering":
        return EdgeOrdering(tuple(s for s in self.steps if s[0] <= t))


def canonical_ordering(seq: GraphSequence) -> EdgeOrdering:
    """Edges sorted by (time, canonical endpoint pair); deterministic."""
    steps = []
    for batch in seq.batches:
        edges = sorted(
            canonical_edge(u, v, seq.directed) for u, v in batch.edges
        )
        steps.append((batch.time, tuple(edges)))
    return EdgeOrdering(steps=tuple(steps))


def _admit(
    edges: tuple[Edge, ...],
    directed: bool,
    th: ProjectionThresholds,
    deg: dict[str, int],
    in_deg: dict[str, int],
) -> list[Edge]:
    kept = []
    if directed:
        for u, v in edges:
            if deg.get(u, 0) < th.d_out and in_deg.get(v, 0) < th.d_in:
                deg[u] = deg.get(u, 0) + 1
                in_deg[v] = in_deg.get(v, 0) + 1
                kept.append((u, v))
    else:
        for u, v in edges:
            if deg.get(u, 0) < th.d and deg.get(v, 0) < th.d:
                deg[u] = deg.get(u, 0) + 1
                deg[v] = deg.get(v, 0) + 1
                kept.append((u, v))
    return kept


def project_graph(
    g: GraphView, ordering: EdgeOrdering, th: ProjectionThresholds
) -> GraphView:
    """Single-graph greedy projection over the given edge ordering."""
    if th.is_directed != g.directed:
        raise OrderingMismatchError("threshold mode does not match the graph")
    flat = ordering.flat()
    if sorted(flat) != sorted(g.edges):
        raise OrderingMismatchError("ordering must cover exactly the graph's edges")
    deg: dict[str, int] = {}
    in_deg: dict[str, int] = {}
    kept = _admit(flat, g.directed, th, deg, in_deg)
    return build_view(g.directed, g.node_time, kept, projected=True)


def project_sequence(
    seq: GraphSequence, ordering: EdgeOrdering, th: ProjectionThresholds
) -> list[GraphView]:
    """Online projection: one projected snapshot per step, shared state.

    Returns views for release steps 1..horizon; a time-0 batch (pre-existing
    nodes) is processed first and folded into the first view.
    """
    if th.is_directed != seq.directed:
        raise OrderingMismatchError("threshold mode does not match the sequence")
    order_by_time = dict(ordering.steps)
    seq_times = [b.time for b in seq.batches]
    if set(order_by_time) != set(seq_times):
        raise OrderingMismatchError("ordering steps must match the sequence's batches")
    for batch in seq.batches:
        if sorted(order_by_time[batch.time]) != sorted(
            canonical_edge(u, v, seq.directed) for u, v in batch.edges
        ):
            raise OrderingMismatchError(
                f"ordering at t={batch.time} must cover exactly that batch's edges"
            )

    deg: dict[str, int] = {}
    in_deg: dict[str, int] = {}
    kept: list[Edge] = []
    node_time: dict[str, int] = {}
    views = []
    for batch in seq.batches:
        for n in batch.nodes:
            node_time[n] = batch.time
        kept.extend(_admit(order_by_time[batch.time], seq.directed, th, deg, in_deg))
        if batch.time >= 1:
            views.append(build_view(seq.directed, node_time, kept, projected=True))
    return views
