import pytest

from chromaflux.bounds import lb1
from chromaflux.corpus import random_migration_instances
from chromaflux.instance import InstanceError
from chromaflux.metrics import validate_schedule
from chromaflux.migration_even import (
    LOOP,
    PAIRING,
    OrientedBipartite,
    euler_cycle,
    explain_even,
    extract_cv2_matching,
    orient_to_bipartite,
    pad_graph,
    plan_even,
    schedule_even,
)

from conftest import K4, TRIANGLE, mig


def test_padding_triangle_needs_nothing():
    g = pad_graph(mig(3, TRIANGLE, 2))
    assert g.delta == 1 and g.dummies == []


def test_padding_single_edge_pairs_its_ends():
    g = pad_graph(mig(2, [(0, 1)], 2))
    assert [(u, v, kind) for _, u, v, kind in g.dummies] == [(0, 1, PAIRING)]
    assert g.degrees() == [2, 2]


def test_padding_isolated_node_gets_a_loop():
    g = pad_graph(mig(4, TRIANGLE, 2))
    assert g.delta == 1
    assert [(u, v, kind) for _, u, v, kind in g.dummies] == [(3, 3, LOOP)]
    assert g.degrees() == g.targets


def test_dummy_ids_are_distinct_from_real_ones():
    inst = mig(4, [(0, 1), (2, 3), (0, 2)], [2, 4, 6, 2])
    g = pad_graph(inst)
    assert g.degrees() == g.targets
    assert not {d[0] for d in g.dummies} & set(inst.edge_ids)


def test_euler_trails():
    tri = euler_cycle(pad_graph(mig(3, TRIANGLE, 2)))
    assert len(tri) == 3 and tri[0][1] == tri[-1][2]
    assert all(tri[i][2] == tri[i + 1][1] for i in range(2))
    par = euler_cycle(pad_graph(mig(2, [(0, 1)] * 4, 2)))
    assert [(x, y) for _, x, y in par] == [(0, 1), (1, 0), (0, 1), (1, 0)]
    loop = pad_graph(mig(1, [], 2))
    loop.delta = 1
    loop.ends.append((0, 0))
    assert [(x, y) for _, x, y in euler_cycle(loop)] == [(0, 0)]


def test_orientation_is_balanced():
    g = pad_graph(mig(2, [(0, 1)] * 4, 2))
    h = orient_to_bipartite(g, euler_cycle(g))
    assert h.out_degrees() == h.in_degrees() == [2, 2]
    g = pad_graph(mig(3, TRIANGLE, 2))
    h = orient_to_bipartite(g, euler_cycle(g))
    assert sorted(zip(h.tails, h.heads)) == [(0, 1), (1, 2), (2, 0)]


def test_matching_extraction():
    g = pad_graph(mig(3, TRIANGLE, 2))
    h = orient_to_bipartite(g, euler_cycle(g))
    assert extract_cv2_matching(h, [0, 1, 2], [1, 1, 1]) == [0, 1, 2]
    g = pad_graph(mig(2, [(0, 1)] * 4, 2))
    h = orient_to_bipartite(g, euler_cycle(g))
    first = extract_cv2_matching(h, [0, 1, 2, 3], [1, 1])
    assert len(first) == 2 and {h.tails[j] for j in first} == {0, 1}
    assert extract_cv2_matching(OrientedBipartite(2, [], []), [], [0, 0]) == []


def test_matching_shortfall_is_a_contract_error():
    h = OrientedBipartite(2, [0], [1])
    with pytest.raises(AssertionError):
        extract_cv2_matching(h, [0], [1, 1])


@pytest.mark.parametrize("n, edges, c, rounds", [
    (3, TRIANGLE, 2, [["1", "2", "3"]]),
    (2, [(0, 1)] * 4, 2, None),
    (4, K4, 2, None),
])
def test_schedule_examples(n, edges, c, rounds):
    inst = mig(n, edges, c)
    out = schedule_even(inst)
    assert not validate_schedule(inst, out)
    assert len(out) == lb1(inst)
    if rounds is not None:
        assert out == rounds
    if n == 2:
        assert [len(r) for r in out] == [2, 2]
    if n == 4:
        assert len(out) == 2


def test_odd_capacity_is_rejected():
    with pytest.raises(InstanceError, match="even"):
        schedule_even(mig(3, TRIANGLE, [2, 3, 2]))


def test_random_even_instances_are_optimal():
    for inst in random_migration_instances(11, 60, caps=(2, 4, 6), max_edges=120):
        plan = plan_even(inst)
        assert not validate_schedule(inst, plan.rounds)
        assert len(plan.rounds) == lb1(inst)
        real = sorted(e for r in plan.rounds for e in r)
        assert real == sorted(inst.edge_ids)


def test_explain_lists_every_matching():
    plan = plan_even(mig(2, [(0, 1)], 2))
    lines = explain_even(plan)
    assert lines[0].startswith("degree bound 1")
    assert any(line.startswith("dummy ~pair") for line in lines)
    assert sum(line.startswith("matching") for line in lines) == 1
