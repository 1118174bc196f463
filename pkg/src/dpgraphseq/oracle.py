"""Brute-force certification of the difference-sequence sensitivities.

The oracle maximizes, over every bound-respecting base sequence within a
small node/step budget and every legal single-node addition, the L1 distance
between the two exact difference sequences.  Its value never exceeding the
closed-form catalog entry is the certified relationship.

Two search engines are provided:

* ``naive`` — literal enumeration of sequences and additions, evaluating
  statistics snapshot by snapshot.  Transparent but only viable for tiny
  budgets; it is the reference the pruned engine is validated against.
* ``pruned`` — the default.  Degree-determined statistics (threshold counts,
  histograms, edge counts, stars) depend only on per-node degree
  trajectories, so base sequences are deduplicated by their sorted
  trajectory signature (lossless for these statistics) and additions are
  evaluated once per distinct local configuration.  Triangle patterns need
  real structure; for them every capped graph is enumerated and additions
  are scored with vectorized bit arithmetic.  Triangle scoring fixes all
  arrivals at t=1: shifting arrival times only redistributes a copy's
  appearance step, which the naive cross-check confirms at small budgets.
"""
from __future__ import annotations

import itertools
from collections import Counter
from math import comb

import numpy as np

from .errors import BudgetTooLargeError, UnsupportedQueryError
from .graph_core import DegreeBounds, build_view
from .statistics import StatisticQuery, evaluate, histogram_distance

_POP = np.array([bin(i).count("1") for i in range(256)], dtype=np.int64)

_SWEEP_CACHE: dict = {}
_TRIANGLE_CACHE: dict = {}


def _query_key(query: StatisticQuery):
    if query.kind == "high_degree":
        return ("high_degree", query.tau)
    if query.kind == "degree_histogram":
        return ("degree_histogram",)
    if query.pattern in ("k_star", "out_k_star", "in_k_star"):
        return (query.pattern, query.k)
    return (query.pattern,)


def oracle_diff_sensitivity(
    query: StatisticQuery,
    bounds: DegreeBounds,
    n_max: int,
    t_max: int,
    method: str = "pruned",
) -> int:
    """Max difference-sequence L1 distance over the budgeted search space."""
    if n_max > 7:
        raise BudgetTooLargeError(f"n_max={n_max} exceeds the search budget cap")
    if n_max < 1 or t_max < 1:
        raise ValueError("budgets must be >= 1")
    if method == "naive":
        return _naive_oracle(query, bounds, n_max, t_max)
    if method != "pruned":
        raise ValueError(f"unknown oracle method {method!r}")
    key = _query_key(query)
    if key[0] in ("triangle", "triangle_i", "triangle_ii"):
        return _triangle_sweep(bounds, n_max)[key]
    results = _degree_sweep(bounds, n_max, t_max, max_k=max(3, query.k or 0))
    if key not in results:
        raise UnsupportedQueryError(f"oracle does not cover {query.label()}")
    return results[key]


# --- naive engine --------------------------------------------------------


def _cap_limits(bounds: DegreeBounds):
    if bounds.is_directed:
        return bounds.d_in, bounds.d_out
    return bounds.d, bounds.d


def _naive_diff_distance(query, directed, times_a, edges_a, times_b, edges_b, t_max):
    """L1 distance between the two exact difference sequences."""

    def diffs(node_time, edges):
        out = []
        prev = 0 if query.is_scalar else {}
        for t in range(1, t_max + 1):
            present = {n: tt for n, tt in node_time.items() if tt <= t}
            live = [e for e in edges if max(node_time[e[0]], node_time[e[1]]) <= t]
            val = evaluate(query, build_view(directed, present, live))
            if query.is_scalar:
                out.append(val - prev)
            else:
                out.append(
                    {
                        d: val.get(d, 0) - prev.get(d, 0)
                        for d in set(val) | set(prev)
                    }
                )
            prev = val
        return out

    da, db = diffs(times_a, edges_a), diffs(times_b, edges_b)
    if query.is_scalar:
        return sum(abs(x - y) for x, y in zip(da, db))
    return sum(histogram_distance(x, y) for x, y in zip(da, db))


def _naive_bases(directed, bounds, n, t_max):
    """All bound-respecting sequences on exactly n labeled nodes."""
    cap_in, cap_out = _cap_limits(bounds)
    nodes = [f"v{i}" for i in range(n)]
    if directed:
        candidates = [(a, b) for a in nodes for b in nodes if a != b]
    else:
        candidates = [(a, b) for a, b in itertools.combinations(nodes, 2)]
    for times in itertools.combinations_with_replacement(range(1, t_max + 1), n):
        node_time = dict(zip(nodes, times))
        for edges in itertools.chain.from_iterable(
            itertools.combinations(candidates, m) for m in range(len(candidates) + 1)
        ):
            if directed:
                outdeg = Counter(u for u, _ in edges)
                indeg = Counter(v for _, v in edges)
                if any(outdeg[v] > cap_out or indeg[v] > cap_in for v in nodes):
                    continue
            else:
                deg = Counter(itertools.chain.from_iterable(edges))
                if any(deg[v] > bounds.d for v in nodes):
                    continue
            yield node_time, list(edges)


def _naive_oracle(query, bounds, n_max, t_max) -> int:
    directed = bounds.is_directed
    cap_in, cap_out = _cap_limits(bounds)
    best = 0
    for n in range(1, n_max + 1):
        for node_time, edges in _naive_bases(directed, bounds, n, t_max):
            if directed:
                outdeg = Counter(u for u, _ in edges)
                indeg = Counter(v for _, v in edges)
                in_candidates = [v for v in node_time if outdeg[v] < cap_out]
                out_candidates = [v for v in node_time if indeg[v] < cap_in]
            else:
                deg = Counter(itertools.chain.from_iterable(edges))
                in_candidates = [v for v in node_time if deg[v] < bounds.d]
                out_candidates = []
            for tstar in range(1, t_max + 1):
                times_b = dict(node_time, **{"v*": tstar})
                if directed:
                    choices = (
                        (s_in, s_out)
                        for m in range(min(cap_in, len(in_candidates)) + 1)
                        for s_in in itertools.combinations(in_candidates, m)
                        for mo in range(min(cap_out, len(out_candidates)) + 1)
                        for s_out in itertools.combinations(out_candidates, mo)
                    )
                else:
                    choices = (
                        (s, ())
                        for m in range(min(bounds.d, len(in_candidates)) + 1)
                        for s in itertools.combinations(in_candidates, m)
                    )
                for s_in, s_out in choices:
                    extra = [(u, "v*") for u in s_in] + [("v*", w) for w in s_out]
                    dist = _naive_diff_distance(
                        query,
                        directed,
                        node_time,
                        edges,
                        times_b,
                        edges + extra,
                        t_max,
                    )
                    if dist > best:
                        best = dist
    return best


# --- capped graph enumeration (vectorized) -------------------------------


def _directed_graphs(n, cap_in, cap_out):
    """Out-neighbor bitmask matrix of every capped digraph on n nodes."""
    choices = []
    for v in range(n):
        allowed = [
            m
            for m in range(1 << n)
            if not m & (1 << v) and bin(m).count("1") <= cap_out
        ]
        choices.append(np.array(allowed, dtype=np.int64))
    grids = np.meshgrid(*choices, indexing="ij")
    out = np.stack([g.ravel() for g in grids], axis=-1)
    indeg = np.zeros_like(out)
    for v in range(n):
        bit = 0
        for u in range(n):
            bit = bit + ((out[:, u] >> v) & 1)
        indeg[:, v] = bit
    keep = (indeg <= cap_in).all(axis=1)
    out = out[keep]
    inmask = np.zeros_like(out)
    for v in range(n):
        acc = np.zeros(len(out), dtype=np.int64)
        for u in range(n):
            acc |= ((out[:, u] >> v) & 1) << u
        inmask[:, v] = acc
    return out, inmask


def _undirected_graphs(n, cap):
    """Neighbor bitmask matrix of every degree-capped graph on n nodes."""
    pairs = list(itertools.combinations(range(n), 2))
    count = 1 << len(pairs)
    sel = np.arange(count, dtype=np.int64)
    adj = np.zeros((count, n), dtype=np.int64)
    for i, (a, b) in enumerate(pairs):
        present = (sel >> i) & 1
        adj[:, a] |= present << b
        adj[:, b] |= present << a
    keep = (_POP[adj] <= cap).all(axis=1)
    return adj[keep]


# --- pruned engine: degree-determined statistics -------------------------


_SEND_BIT = 1 << 20
_RECV_BIT = 1 << 21


def _decode_profile(code, t_max):
    """Unpack one node's code: arrival, trajectories, spare-capacity flags."""
    code = int(code)
    t_v = code & 3
    out_traj = tuple((code >> (2 + 3 * t)) & 7 for t in range(t_max))
    in_traj = tuple((code >> (11 + 3 * t)) & 7 for t in range(t_max))
    return t_v, out_traj, in_traj, bool(code & _SEND_BIT), bool(code & _RECV_BIT)


def _signature_rows(directed, bounds, n, t_max, side):
    """Unique attachment-relevant signatures over all capped sequences.

    Signatures serve one degree direction at a time (`side`): the out-side
    pass keeps senders' out-degree trajectories and reduces every potential
    receiver to its arrival time; the in-side pass is the mirror image.
    Only nodes with spare capacity can touch the added node, so saturated
    nodes are dropped.  Both reductions are lossless for the per-side maxima.
    """
    cap_in, cap_out = _cap_limits(bounds)
    if directed:
        out, inmask = _directed_graphs(n, cap_in, cap_out)
        can_send = _POP[out] < cap_out       # spare out-degree
        can_recv = _POP[inmask] < cap_in     # spare in-degree
    else:
        out = _undirected_graphs(n, bounds.d)
        inmask = None
        can_send = _POP[out] < bounds.d
        can_recv = can_send
    flags = can_send * np.int64(_SEND_BIT) + can_recv * np.int64(_RECV_BIT)
    mask = out if side == "out" else inmask
    keep = can_send if side == "out" else can_recv
    shift = 2 if side == "out" else 11
    chunks = []
    for times in itertools.combinations_with_replacement(range(1, t_max + 1), n):
        present = [
            sum(1 << v for v in range(n) if times[v] <= t)
            for t in range(1, t_max + 1)
        ]
        arrived = np.array(times)[None, :]
        traj_part = np.zeros(out.shape, dtype=np.int64)
        for t in range(1, t_max + 1):
            deg = np.where(arrived <= t, _POP[mask & present[t - 1]], 0)
            traj_part |= deg.astype(np.int64) << (shift + 3 * (t - 1))
        sig = np.where(
            can_send | can_recv,
            arrived + traj_part * keep + flags,
            0,
        )
        sig.sort(axis=1)
        chunks.append(np.unique(sig, axis=0))
    return np.unique(np.concatenate(chunks, axis=0), axis=0)


def _sub_multiset_closure(rows):
    """Every sub-multiset of every signature row, deduplicated.

    Dropping one element at a time (vectorized: zero it out, re-sort, unique)
    five times reaches all sizes; zeros pad short rows.
    """
    levels = [rows]
    cur = rows
    for _ in range(rows.shape[1]):
        drops = []
        for i in range(cur.shape[1]):
            d = cur.copy()
            d[:, i] = 0
            drops.append(d)
        cur = np.concatenate(drops)
        cur.sort(axis=1)
        cur = np.unique(cur, axis=0)
        levels.append(cur)
    return np.unique(np.concatenate(levels), axis=0)


def _role_assignments(classes, budget_in, budget_out):
    """Assign every node of the multiset a role within the degree budgets.

    Roles: sender (edge to the new node, needs spare out-degree), receiver
    (edge from it, needs spare in-degree), or both.  Senders plus both-role
    nodes occupy the new node's in-degree budget, receivers plus both its
    out-degree budget.  Nodes of one class are interchangeable, so only
    per-class counts are enumerated.
    """
    items = classes  # list of (code, count, can_send, can_recv)

    def rec(i, left_in, left_out, acc):
        if i == len(items):
            yield tuple(acc)
            return
        code, m, can_send, can_recv = items[i]
        for ns in range(m + 1):
            for nr in range(m - ns + 1):
                nb = m - ns - nr
                if (ns or nb) and not can_send:
                    continue
                if (nr or nb) and not can_recv:
                    continue
                ci, co = ns + nb, nr + nb
                if ci > left_in or co > left_out:
                    continue
                acc.append((code, ci, co))
                yield from rec(i + 1, left_in - ci, left_out - co, acc)
                acc.pop()

    yield from rec(0, budget_in, budget_out, [])


def _shift_traj(traj, t_v, s, t_max):
    """Trajectory after one extra incident edge arriving at step s."""
    return tuple(
        traj[t - 1] + (1 if t >= s and t >= t_v else 0) for t in range(1, t_max + 1)
    )


def _star_distance(base, bumped, vstar, k, t_max):
    """Distance for star counts: affected-node contributions only.

    `base` and `bumped` are lists of (arrival, trajectory) for the affected
    nodes before/after the addition; `vstar` is (t*, trajectory).
    """
    prev_b = prev_a = 0
    dist = 0
    for t in range(1, t_max + 1):
        cur_b = sum(comb(traj[t - 1], k) for tv, traj in base if tv <= t)
        cur_a = sum(comb(traj[t - 1], k) for tv, traj in bumped if tv <= t)
        if vstar[0] <= t:
            cur_a += comb(vstar[1][t - 1], k)
        dist += abs((cur_a - prev_a) - (cur_b - prev_b))
        prev_b, prev_a = cur_b, cur_a
    return dist


def _crossing(traj, t_v, tau, t_max):
    for t in range(t_v, t_max + 1):
        if t >= 1 and traj[t - 1] >= tau:
            return t
    return None


def _threshold_distance(base, bumped, vstar, tau, t_max):
    delta = [0] * (t_max + 2)
    for (tv, old), (_, new) in zip(base, bumped):
        c_old = _crossing(old, max(tv, 1), tau, t_max)
        c_new = _crossing(new, max(tv, 1), tau, t_max)
        if c_old != c_new:
            if c_new is not None:
                delta[c_new] += 1
            if c_old is not None:
                delta[c_old] -= 1
    c_star = _crossing(vstar[1], max(vstar[0], 1), tau, t_max)
    if c_star is not None:
        delta[c_star] += 1
    return sum(abs(x) for x in delta[1 : t_max + 1])


def _hist_contribs(tv, traj, t_max, sign, delta):
    if tv > t_max:
        return
    start = max(tv, 1)
    delta[(start, traj[start - 1])] = delta.get((start, traj[start - 1]), 0) + sign
    for t in range(start + 1, t_max + 1):
        a, b = traj[t - 2], traj[t - 1]
        if a != b:
            delta[(t, a)] = delta.get((t, a), 0) - sign
            delta[(t, b)] = delta.get((t, b), 0) + sign


def _histogram_distance_local(base, bumped, vstar, t_max):
    delta: dict = {}
    for (tv, old), (_, new) in zip(base, bumped):
        _hist_contribs(tv, old, t_max, -1, delta)
        _hist_contribs(tv, new, t_max, +1, delta)
    _hist_contribs(vstar[0], vstar[1], t_max, +1, delta)
    return sum(abs(v) for v in delta.values())


def _eval_side(tstar, affected, peer_times, t_max, taus, ks):
    """Distances for one degree direction of an attachment configuration.

    `affected` lists (arrival, trajectory) of existing nodes gaining one
    incident edge at max(tstar, arrival); `peer_times` are the attach times
    of the new node's other-side edges, which fully determine its own
    trajectory in this direction.  Everything a threshold count, histogram,
    or star count of this direction can see is exactly that.
    """
    bumped = [
        (tv, _shift_traj(traj, tv, max(tstar, tv), t_max))
        for tv, traj in affected
    ]
    vstar = (
        tstar,
        tuple(sum(1 for s in peer_times if s <= t) for t in range(1, t_max + 1)),
    )
    results = {}
    for tau in taus:
        results[("threshold", tau)] = _threshold_distance(
            affected, bumped, vstar, tau, t_max
        )
    results[("hist",)] = _histogram_distance_local(affected, bumped, vstar, t_max)
    for k in ks:
        results[("star", k)] = _star_distance(affected, bumped, vstar, k, t_max)
    return results


def _side_pass(bounds, n_max, t_max, taus, ks, side, names, maxima):
    """One degree direction: enumerate configurations, score, track maxima.

    An attachment configuration for, say, the out side is fully described by
    the multiset of affected-node (arrival, out-trajectory) profiles plus the
    arrival times of the new node's own out-edges' endpoints; anything finer
    never changes a score, so configurations are deduplicated at that level
    before the (cheap but repeated) per-step evaluation.
    """
    directed = bounds.is_directed
    cap_in, cap_out = _cap_limits(bounds)
    budget_in = cap_in if directed else bounds.d
    budget_out = cap_out if directed else 0
    if side == "in":
        budget_in, budget_out = budget_out, budget_in
    rows = _sub_multiset_closure(
        _signature_rows(directed, bounds, n_max, t_max, side)
    )
    decoded: dict = {}
    seen: set = set()
    for row in rows:
        counts = Counter(int(c) for c in row if c)
        classes = []
        for code, m in counts.items():
            if code not in decoded:
                decoded[code] = _decode_profile(code, t_max)
            _, _, _, can_send, can_recv = decoded[code]
            if side == "in":
                can_send, can_recv = can_recv, can_send
            classes.append((code, m, can_send, can_recv))
        for picked in _role_assignments(classes, budget_in, budget_out):
            edges = sum(ci + co for _, ci, co in picked)
            if edges > maxima.get(("edge",), 0):
                maxima[("edge",)] = edges
            affected = []
            peer_arrivals = []
            for code, ci, co in picked:
                profile = decoded[code]
                t_v = profile[0]
                traj = profile[1] if side == "out" else profile[2]
                if ci:
                    affected.extend(((t_v, traj),) * ci)
                if co:
                    peer_arrivals.extend((t_v,) * co)
            # Undirected: one attached edge is both the node's extra degree
            # and one unit of the new node's own degree.
            if not directed:
                peer_arrivals = [t_v for t_v, _ in affected]
            config = (tuple(sorted(affected)), tuple(sorted(peer_arrivals)))
            if config in seen:
                continue
            seen.add(config)
            for tstar in range(1, t_max + 1):
                peers = [max(tstar, t_v) for t_v in config[1]]
                for key, val in _eval_side(
                    tstar, config[0], peers, t_max, taus, ks
                ).items():
                    if key[0] not in names:
                        continue
                    named = (names[key[0]],) + key[1:]
                    if val > maxima.get(named, 0):
                        maxima[named] = val


def _degree_sweep(bounds, n_max, t_max, max_k=3):
    """Max distances for every degree-determined query, one pass per side."""
    directed = bounds.is_directed
    cap_in, cap_out = _cap_limits(bounds)
    taus = tuple(range(1, (cap_out if directed else bounds.d) + 1))
    ks = tuple(range(1, max_k + 1))
    cache_key = (directed, cap_in, cap_out, n_max, t_max, max_k)
    if cache_key in _SWEEP_CACHE:
        return _SWEEP_CACHE[cache_key]

    maxima: dict = {}
    out_names = {"threshold": "high_degree", "hist": "degree_histogram"}
    out_names["star"] = "out_k_star" if directed else "k_star"
    _side_pass(bounds, n_max, t_max, taus, ks, "out", out_names, maxima)
    if directed:
        _side_pass(
            bounds, n_max, t_max, taus, ks, "in", {"star": "in_k_star"}, maxima
        )
    for tau in taus:
        maxima.setdefault(("high_degree", tau), 0)
    maxima.setdefault(("degree_histogram",), 0)
    maxima.setdefault(("edge",), 0)
    star_kinds = ("out_k_star", "in_k_star") if directed else ("k_star",)
    for kind in star_kinds:
        for k in ks:
            maxima.setdefault((kind, k), 0)
    _SWEEP_CACHE[cache_key] = maxima
    return maxima


# --- pruned engine: triangle patterns ------------------------------------


def _masks_up_to(n, size):
    out = [m for m in range(1 << n) if bin(m).count("1") <= size]
    return out


def _triangle_sweep(bounds, n_max):
    """Max new-copy counts for triangle patterns over capped graphs.

    Scored on single-batch sequences: every copy a new node creates appears
    in some step's difference entry exactly once, so the distance equals the
    number of new copies regardless of arrival times.
    """
    directed = bounds.is_directed
    cap_in, cap_out = _cap_limits(bounds)
    cache_key = (directed, cap_in, cap_out, n_max)
    if cache_key in _TRIANGLE_CACHE:
        return _TRIANGLE_CACHE[cache_key]
    n = n_max
    if directed:
        out, inmask = _directed_graphs(n, cap_in, cap_out)
        out_ok = np.zeros(len(out), dtype=np.int64)
        in_ok = np.zeros(len(out), dtype=np.int64)
        for v in range(n):
            out_ok |= (_POP[out[:, v]] < cap_out).astype(np.int64) << v
            in_ok |= (_POP[inmask[:, v]] < cap_in).astype(np.int64) << v
        best_i = 0
        best_ii = 0
        for si in _masks_up_to(n, cap_in):
            si_nodes = [v for v in range(n) if si >> v & 1]
            elig_si = (out_ok & si) == si
            for so in _masks_up_to(n, cap_out):
                elig = elig_si & ((in_ok & so) == so)
                if not elig.any():
                    continue
                so_nodes = [v for v in range(n) if so >> v & 1]
                # triangle I: in-edge u->v*, out-edge v*->w, base edge w->u
                score_i = np.zeros(len(out), dtype=np.int64)
                for u in si_nodes:
                    score_i += _POP[inmask[:, u] & so]
                # triangle II: every base edge inside the attached sets
                score_ii = np.zeros(len(out), dtype=np.int64)
                for b in si_nodes:
                    score_ii += _POP[inmask[:, b] & si]
                for b in so_nodes:
                    score_ii += _POP[inmask[:, b] & si] + _POP[inmask[:, b] & so]
                best_i = max(best_i, int(score_i[elig].max(initial=0)))
                best_ii = max(best_ii, int(score_ii[elig].max(initial=0)))
        result = {("triangle_i",): best_i, ("triangle_ii",): best_ii}
    else:
        adj = _undirected_graphs(n, bounds.d)
        cap_mask = np.zeros(len(adj), dtype=np.int64)
        for v in range(n):
            cap_mask |= (_POP[adj[:, v]] < bounds.d).astype(np.int64) << v
        best = 0
        for s in _masks_up_to(n, bounds.d):
            elig = (cap_mask & s) == s
            if not elig.any():
                continue
            s_nodes = [v for v in range(n) if s >> v & 1]
            score = np.zeros(len(adj), dtype=np.int64)
            for v in s_nodes:
                score += _POP[adj[:, v] & s]
            score //= 2  # each inside edge seen from both endpoints
            best = max(best, int(score[elig].max(initial=0)))
        result = {("triangle",): best}
    _TRIANGLE_CACHE[cache_key] = result
    return result
