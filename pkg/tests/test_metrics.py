import pytest
from hypothesis import given, settings, strategies as st

from chromaflux.instance import InstanceError
from chromaflux.metrics import conflict_report, validate_assignment, validate_schedule

from conftest import TRIANGLE, chan, mig, star


def _assign(inst, colors):
    return dict(zip(inst.edge_ids, colors))


def test_triangle_single_color():
    inst = chan(3, TRIANGLE, 3)
    assert conflict_report(inst, _assign(inst, [1, 1, 1])).total == 12


def test_triangle_proper():
    inst = chan(3, TRIANGLE, 3)
    rep = conflict_report(inst, _assign(inst, [1, 2, 3]))
    assert rep.total == 6 and rep.excess == 0


def test_per_edge_values_sum_to_eighteen():
    # color-1 triangle A, B, C and a color-2 path B - D - E
    inst = chan(5, [(0, 1), (0, 2), (1, 2), (1, 3), (3, 4)], 2)
    rep = conflict_report(inst, _assign(inst, [1, 1, 1, 2, 2]))
    assert sorted(rep.per_edge.values()) == [3, 3, 4, 4, 4]
    assert rep.total == 18
    assert rep.per_vertex == {"0": 4, "1": 5, "2": 4, "3": 4, "4": 1}


def test_missing_color_is_an_error():
    inst = chan(3, TRIANGLE, 3)
    with pytest.raises(InstanceError, match="uncolored"):
        conflict_report(inst, {"1": 1})


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_metric_routes_agree(data):
    n = data.draw(st.integers(2, 6))
    edges = data.draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))
                               .filter(lambda p: p[0] != p[1]), max_size=20))
    k = data.draw(st.integers(1, 5))
    inst = chan(n, edges, k)
    colors = data.draw(st.lists(st.integers(1, k), min_size=len(edges), max_size=len(edges)))
    rep = conflict_report(inst, _assign(inst, colors))
    assert rep.total == sum(rep.per_edge.values()) == sum(rep.per_vertex.values())
    assert rep.total >= 2 * len(edges)
    assert (rep.total == 2 * len(edges)) == all(
        len({c for e, c in zip(inst.ends, colors) if v in e}) == sum(1 for e in inst.ends if v in e)
        for v in range(n)
    )


def test_validate_assignment_cases():
    tri = chan(3, TRIANGLE, 2, 3)
    assert validate_assignment(tri, _assign(tri, [1, 2, 3])) == []
    s = chan(4, star(3), [2, 3, 3, 3], 3)
    out = validate_assignment(s, _assign(s, [1, 2, 3]))
    assert len(out) == 1 and "node 0" in out[0]
    empty = chan(2, [], 1)
    assert validate_assignment(empty, {}) == []
    assert any("C_G" in v or "outside" in v for v in validate_assignment(tri, _assign(tri, [1, 2, 4])))
    assert validate_assignment(tri, {"1": 1, "2": 1}) == ["edge 3: uncolored"]


def test_validate_schedule_cases():
    inst = mig(2, [(0, 1)] * 4, 2)
    assert validate_schedule(inst, [["1", "2"], ["3", "4"]]) == []
    over = validate_schedule(inst, [["1", "2", "3"], ["4"]])
    assert over and all("3 transfers" in v for v in over)
    twice = validate_schedule(inst, [["1", "2"], ["3", "4", "1"]])
    assert any("rounds 1 and 2" in v for v in twice)
    assert validate_schedule(inst, [["1", "2"], ["3"]]) == ["edge 4 never scheduled"]
    assert validate_schedule(inst, [["1", "9"]])[0] == "round 1: edge 9 not in instance"
