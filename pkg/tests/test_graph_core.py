"""Sequence ingestion, snapshots, bound checks, and the edge-list format."""
import pytest

from dpgraphseq import (
    DegreeBounds,
    GraphSequence,
    build_sequence,
    dumps_edge_list,
    ingest_step,
    loads_edge_list,
    snapshot,
    truncate,
    verify_bounds,
)
from dpgraphseq.errors import (
    DanglingEdgeError,
    DuplicateEdgeError,
    DuplicateNodeError,
    EdgeToFutureNodeError,
    ModeMismatchError,
    SelfLoopError,
    TimeOutOfRangeError,
)
from dpgraphseq.graph_core import canonical_edge


def small_seq():
    return build_sequence(
        False,
        [
            (1, ["a", "b"], [("a", "b")]),
            (2, ["c"], [("b", "c"), ("a", "c")]),
            (3, ["d"], [("c", "d")]),
        ],
    )


def test_canonical_edge_orients_undirected_pairs():
    assert canonical_edge("b", "a", directed=False) == ("a", "b")
    assert canonical_edge("b", "a", directed=True) == ("b", "a")


def test_ingest_builds_consecutive_batches():
    seq = small_seq()
    assert seq.start_time == 1
    assert seq.horizon == 3
    assert seq.node_time == {"a": 1, "b": 1, "c": 2, "d": 3}
    assert seq.batch_at(2).edges == (("b", "c"), ("a", "c"))


def test_first_batch_may_sit_at_time_zero():
    seq = ingest_step(GraphSequence.empty(False), 0, ["seed"], [])
    seq = ingest_step(seq, 1, ["x"], [("seed", "x")])
    assert seq.start_time == 0
    assert seq.horizon == 1


@pytest.mark.parametrize("t", [2, -1, 5])
def test_first_batch_time_must_be_zero_or_one(t):
    with pytest.raises(TimeOutOfRangeError):
        ingest_step(GraphSequence.empty(False), t, ["a"], [])


def test_batch_times_must_be_consecutive():
    seq = ingest_step(GraphSequence.empty(False), 1, ["a"], [])
    with pytest.raises(TimeOutOfRangeError):
        ingest_step(seq, 3, ["b"], [])


def test_ingest_rejects_duplicate_node():
    seq = ingest_step(GraphSequence.empty(False), 1, ["a"], [])
    with pytest.raises(DuplicateNodeError):
        ingest_step(seq, 2, ["a"], [])
    with pytest.raises(DuplicateNodeError):
        ingest_step(GraphSequence.empty(False), 1, ["x", "x"], [])


def test_ingest_rejects_self_loop_and_dangling_edge():
    with pytest.raises(SelfLoopError):
        ingest_step(GraphSequence.empty(False), 1, ["a"], [("a", "a")])
    with pytest.raises(DanglingEdgeError):
        ingest_step(GraphSequence.empty(False), 1, ["a"], [("a", "ghost")])


def test_edge_must_touch_current_batch():
    seq = ingest_step(GraphSequence.empty(False), 1, ["a", "b"], [])
    with pytest.raises(EdgeToFutureNodeError):
        ingest_step(seq, 2, ["c"], [("a", "b")])


def test_duplicate_edge_rejected_across_batches_and_orientations():
    with pytest.raises(DuplicateEdgeError):
        ingest_step(
            GraphSequence.empty(False), 1, ["a", "b"], [("a", "b"), ("b", "a")]
        )
    # Directed mode treats the two orientations as distinct edges.
    d = ingest_step(GraphSequence.empty(True), 1, ["a", "b"], [("a", "b"), ("b", "a")])
    assert d.batch_at(1).edges == (("a", "b"), ("b", "a"))


def test_snapshot_accumulates_batches():
    seq = small_seq()
    g1 = snapshot(seq, 1)
    g3 = snapshot(seq, 3)
    assert g1.nodes == ("a", "b")
    assert g1.num_edges == 1
    assert g3.num_nodes == 4
    assert g3.num_edges == 4
    assert g3.degree("c") == 3
    with pytest.raises(TimeOutOfRangeError):
        snapshot(seq, 4)


def test_truncate_drops_later_batches():
    seq = truncate(small_seq(), 2)
    assert seq.horizon == 2
    assert "d" not in seq.node_time


def test_directed_snapshot_degrees():
    seq = build_sequence(True, [(1, ["a", "b", "c"], [("a", "b"), ("c", "b")])])
    g = snapshot(seq, 1)
    assert g.out_degree("a") == 1
    assert g.in_degree("b") == 2
    assert g.degree("b") == 2
    und = snapshot(small_seq(), 1)
    with pytest.raises(ModeMismatchError):
        und.in_degree("a")


def test_verify_bounds_finds_first_violation():
    seq = small_seq()
    assert verify_bounds(seq, DegreeBounds.undirected(3)) is None
    v = verify_bounds(seq, DegreeBounds.undirected(2))
    assert (v.time, v.node, v.degree, v.kind) == (3, "c", 3, "degree")
    # Under a bound of 1 the violation already happens at t=2.
    v1 = verify_bounds(seq, DegreeBounds.undirected(1))
    assert v1.time == 2


def test_verify_bounds_directed_modes():
    seq = build_sequence(
        True, [(1, ["a", "b", "c"], [("a", "b"), ("a", "c"), ("c", "b")])]
    )
    assert verify_bounds(seq, DegreeBounds.directed(2, 2)) is None
    v = verify_bounds(seq, DegreeBounds.directed(1, 2))
    assert v.kind == "in" and v.node == "b"
    v = verify_bounds(seq, DegreeBounds.directed(2, 1))
    assert v.kind == "out" and v.node == "a"
    with pytest.raises(ModeMismatchError):
        verify_bounds(seq, DegreeBounds.undirected(2))


def test_degree_bounds_validation():
    with pytest.raises(ValueError):
        DegreeBounds.undirected(0)
    with pytest.raises(ValueError):
        DegreeBounds(d=2, d_in=1, d_out=1)
    with pytest.raises(ValueError):
        DegreeBounds(d_in=2)
    assert DegreeBounds.directed(1, 2).is_directed
    assert not DegreeBounds.undirected(1).is_directed


def test_edge_list_round_trip():
    seq = small_seq()
    text = dumps_edge_list(seq)
    back = loads_edge_list(text)
    assert back == seq


def test_edge_list_shifts_raw_years_and_fills_gaps():
    text = "\n".join(
        [
            "H directed",
            "# infections by year",
            "N a 2001",
            "N b 2001",
            "N c 2004",
            "E a b",
            "E b c",
        ]
    )
    seq = loads_edge_list(text)
    assert seq.start_time == 1
    assert seq.horizon == 4
    assert seq.batch_at(2).nodes == ()
    assert seq.node_time == {"a": 1, "b": 1, "c": 4}
    # Edge time is the max endpoint time.
    assert seq.batch_at(4).edges == (("b", "c"),)


def test_edge_list_parse_errors():
    with pytest.raises(ValueError):
        loads_edge_list("N a 1\n")
    with pytest.raises(ValueError):
        loads_edge_list("H sideways\n")
    with pytest.raises(DanglingEdgeError):
        loads_edge_list("H undirected\nN a 1\nE a b\n")
    with pytest.raises(DuplicateNodeError):
        loads_edge_list("H undirected\nN a 1\nN a 2\n")
