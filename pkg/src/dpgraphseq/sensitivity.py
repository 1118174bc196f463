"""Closed-form global sensitivities.

Three regimes:
  * diff_sequence  — L1 sensitivity of the whole difference sequence under a
    public degree bound (what the single-budget mechanism uses);
  * per_release    — bounded sensitivity of one release f(G_t) (composition
    baseline);
  * per_release_projected — sensitivity of one release computed on the
    greedily projected graph.
Binomials use the convention C(n, r) = 0 for r > n, which makes the star
formulas total (a star larger than the degree bound cannot occur).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from .errors import InfeasibleThresholdError, UnsupportedBaselineQueryError
from .graph_core import DegreeBounds
from .projection import ProjectionThresholds
from .statistics import StatisticQuery


def binom(n: int, r: int) -> int:
    """C(n, r), zero when r > n or either argument is negative."""
    if r < 0 or n < 0 or r > n:
        return 0
    return math.comb(n, r)


@dataclass(frozen=True)
class SensitivityReport:
    value: int
    formula_id: str
    regime: str  # "diff_sequence" | "per_release" | "per_release_projected"
    query: StatisticQuery
    bounds: Union[DegreeBounds, ProjectionThresholds]


def _check_tau(tau: int, limit: int, what: str) -> None:
    if tau > limit:
        raise InfeasibleThresholdError(
            f"threshold tau={tau} exceeds the {what} bound {limit}: "
            "no node can reach it"
        )


def diff_sequence_sensitivity(
    query: StatisticQuery, bounds: DegreeBounds
) -> SensitivityReport:
    """Global sensitivity of the difference sequence under `bounds`."""

    def report(value, formula_id):
        return SensitivityReport(value, formula_id, "diff_sequence", query, bounds)

    if query.kind == "high_degree":
        if bounds.is_directed:
            _check_tau(query.tau, bounds.d_out, "out-degree")
            return report(2 * bounds.d_in + 1, "diff/high_out_degree/2Din+1")
        _check_tau(query.tau, bounds.d, "degree")
        return report(2 * bounds.d + 1, "diff/high_degree/2D+1")

    if query.kind == "degree_histogram":
        if bounds.is_directed:
            return report(
                4 * bounds.d_out * bounds.d_in + 2 * bounds.d_out + 1,
                "diff/out_degree_histogram/4DoutDin+2Dout+1",
            )
        return report(
            4 * bounds.d * bounds.d + 2 * bounds.d + 1,
            "diff/degree_histogram/4D^2+2D+1",
        )

    # Subgraph counts: the max number of new copies one extra
    # bound-respecting node can create.
    p, k = query.pattern, query.k
    if bounds.is_directed:
        din, dout = bounds.d_in, bounds.d_out
        if p == "edge":
            return report(din + dout, "diff/edge/Din+Dout")
        if p == "triangle_i":
            return report(din * dout, "diff/triangle_i/DinDout")
        if p == "triangle_ii":
            # Every new copy uses two of the added node's incident edges and
            # one forced base edge -- except that a pair of two in-edges (or
            # two out-edges) admits both base-edge directions, so those pairs
            # count twice.  C(Din+Dout, 2) alone undercounts exactly there.
            return report(
                din * dout + 2 * binom(din, 2) + 2 * binom(dout, 2),
                "diff/triangle_ii/DinDout+2C(Din,2)+2C(Dout,2)",
            )
        if p == "out_k_star":
            return report(
                din * binom(dout - 1, k - 1) + binom(dout, k),
                "diff/out_k_star/DinC(Dout-1,k-1)+C(Dout,k)",
            )
        if p == "in_k_star":
            return report(
                dout * binom(din - 1, k - 1) + binom(din, k),
                "diff/in_k_star/DoutC(Din-1,k-1)+C(Din,k)",
            )
    else:
        d = bounds.d
        if p == "edge":
            return report(d, "diff/edge/D")
        if p == "triangle":
            return report(binom(d, 2), "diff/triangle/C(D,2)")
        if p == "k_star":
            return report(
                d * binom(d - 1, k - 1) + binom(d, k),
                "diff/k_star/DC(D-1,k-1)+C(D,k)",
            )
    raise UnsupportedBaselineQueryError(
        f"pattern {p!r} incompatible with the given bounds"
    )


def per_release_sensitivity(
    query: StatisticQuery, bounds: DegreeBounds
) -> SensitivityReport:
    """Bounded global sensitivity of a single release f(G_t)."""

    def report(value, formula_id):
        return SensitivityReport(value, formula_id, "per_release", query, bounds)

    if query.kind == "high_degree":
        if bounds.is_directed:
            _check_tau(query.tau, bounds.d_out, "out-degree")
            return report(bounds.d_in + 1, "per_release/high_out_degree/Din+1")
        _check_tau(query.tau, bounds.d, "degree")
        return report(bounds.d + 1, "per_release/high_degree/D+1")
    if query.kind == "subgraph" and query.pattern == "edge":
        if bounds.is_directed:
            return report(bounds.d_in + bounds.d_out, "per_release/edge/Din+Dout")
        return report(bounds.d, "per_release/edge/D")
    raise UnsupportedBaselineQueryError(
        f"no per-release sensitivity for {query.label()}"
    )


def projected_sensitivity(
    query: StatisticQuery, thresholds: ProjectionThresholds
) -> SensitivityReport:
    """Global sensitivity of a single release computed on the projection."""

    def report(value, formula_id):
        return SensitivityReport(
            value, formula_id, "per_release_projected", query, thresholds
        )

    if query.kind == "high_degree":
        if thresholds.is_directed:
            _check_tau(query.tau, thresholds.d_out, "projected out-degree")
            return report(
                max(thresholds.d_in + 1, thresholds.d_out - 1),
                "projected/high_out_degree/max(Din~+1,Dout~-1)",
            )
        _check_tau(query.tau, thresholds.d, "projected degree")
        return report(thresholds.d + 1, "projected/high_degree/D~+1")
    if query.kind == "subgraph" and query.pattern == "edge":
        if thresholds.is_directed:
            return report(
                thresholds.d_in + thresholds.d_out, "projected/edge/Din~+Dout~"
            )
        return report(thresholds.d, "projected/edge/D~")
    raise UnsupportedBaselineQueryError(
        f"no projected sensitivity for {query.label()}"
    )
