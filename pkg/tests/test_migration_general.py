import math
from collections import Counter
from fractions import Fraction

import pytest

from chromaflux.balanced import ContractError
from chromaflux.bounds import lb1, migration_lower_bounds
from chromaflux.corpus import random_migration_instances
from chromaflux.metrics import validate_schedule
from chromaflux.migration_even import schedule_even
from chromaflux.migration_general import (
    GeneralTrace,
    MigrationColoring,
    Orbit,
    _fallback,
    _parallel_groups,
    alternating_trail,
    bad_edges,
    classify_witness,
    color_G0,
    initial_palette,
    initial_partial_coloring,
    resolve_balancing_orbit,
    resolve_color_orbit,
    resolve_weak_edge_orbit,
    schedule_general,
    size_bound,
)

from conftest import K4, PATH2, TRIANGLE, mig


def _coloring(inst, q, colors):
    col = MigrationColoring(inst, q)
    for e, c in enumerate(colors):
        if c:
            col.set_color(e, c)
    return col


def test_initial_coloring_examples():
    assert initial_partial_coloring(mig(3, TRIANGLE, 2), 1).colors == [1, 1, 1]
    col = initial_partial_coloring(mig(3, TRIANGLE, 1), 2)
    assert col.colors == [1, 2, 0] and col.uncolored() == [2]
    assert initial_partial_coloring(mig(2, [], 1), 3).colors == []


def test_missing_classes():
    col = _coloring(mig(4, [(0, 1), (0, 2), (0, 3)], [3, 1, 1, 1]), 2, [1, 1, 2])
    assert col.missing(0) == [1, 2]
    assert col.lightly_missing(0) == [1] and col.strongly_missing(0) == [2]
    assert col.missing(1) == [2] and col.lightly_missing(1) == [2]


def test_initial_palette():
    assert initial_palette(0) == 1
    assert initial_palette(1) == 1
    assert initial_palette(4) == 5
    assert initial_palette(100) == 109


def test_alternating_trail_follows_lowest_edges():
    col = _coloring(mig(4, [(0, 1), (1, 2), (2, 3), (1, 3)], 1), 3, [1, 2, 1, 0])
    assert alternating_trail(col, 0, 1, 2) == [0, 1, 2]
    assert alternating_trail(col, 0, 2, 1) == []


def test_balancing_direct():
    col = _coloring(mig(2, [(0, 1)], [3, 1]), 2, [0])
    resolve_balancing_orbit(col, 0, 0, 1)
    assert col.colors == [1]


def test_balancing_with_flip():
    # u strongly misses a=1; v is saturated in a, so an (a, b) trail from v is flipped first
    inst = mig(4, [(0, 1), (1, 2), (2, 3)], [3, 1, 1, 1])
    col = _coloring(inst, 2, [0, 1, 2])
    resolve_balancing_orbit(col, 0, 0, 1)
    assert col.colors == [1, 2, 1]
    assert not col.overloaded() and col.check_recount()


def test_color_orbit_frees_the_middle():
    # uncolored path 0-1-2 whose ends both miss 1; node 1 holds 1 on (1, 3)
    inst = mig(4, [(0, 1), (1, 2), (1, 3)], 1)
    col = _coloring(inst, 2, [0, 0, 1])
    e = resolve_color_orbit(col, [0, 1, 2], [0, 1], 1)
    assert e == 1 and col.colors == [0, 1, 2]
    assert len(col.uncolored()) == 1 and not col.overloaded()


def test_weak_edge_rejects_non_lean_edges():
    inst = mig(2, [(0, 1)] * 2, 1)
    col = _coloring(inst, 1, [0, 0])
    groups = _parallel_groups(inst)
    assert bad_edges(col, groups) == [0, 1]
    with pytest.raises(ValueError):
        resolve_weak_edge_orbit(col, Orbit("edge", {0, 1}, [0, 1], (0, 1)), 0, groups)


def test_witness_classification():
    # triangle c=1 with q=2 and one edge uncolored: no colour is free inside the orbit
    inst = mig(3, TRIANGLE, 1)
    col = _coloring(inst, 2, [1, 2, 0])
    orbit = Orbit("hard", {0, 1, 2}, [2], (2, 2))
    w = classify_witness(col, orbit, lb1(inst))
    assert w.kind == "delta" and w.holds
    assert w.bound == 2 + Fraction(2 * 3 - 4, 1)


def test_size_bound_value():
    assert size_bound(5, 4) == Fraction(7, 3)
    assert size_bound(4, 4) == 3


def test_fallback_is_fatal_when_strict():
    inst = mig(2, [(0, 1)] * 2, 1)
    col = MigrationColoring(inst, 1)
    with pytest.raises(ContractError):
        _fallback(col, (0, 1), _parallel_groups(inst), GeneralTrace(), True, "test")


def test_color_G0_bounds():
    col = MigrationColoring(mig(2, [(0, 1)], 1), 1)
    col.set_color(0, 0)
    assert color_G0(col, GeneralTrace()) == 1
    inst = mig(3, TRIANGLE, 1)
    col = MigrationColoring(inst, 0)
    assert color_G0(col, GeneralTrace()) <= 3
    for inst in random_migration_instances(5, 40, caps=(1, 2, 3), max_nodes=9, max_edges=25):
        keys = {tuple(sorted(e)) for e in inst.ends}
        if len(keys) != inst.n_edges:
            continue
        col = MigrationColoring(inst, 0)
        fresh = color_G0(col, GeneralTrace())
        size, low = inst.n_nodes, min(inst.capacities)
        assert fresh <= math.ceil((size - 1) / low) + 1
        assert not col.overloaded() and not col.uncolored()


@pytest.mark.parametrize("n, edges, c, rounds", [(3, TRIANGLE, 1, 3), (3, TRIANGLE, 2, 1), (3, PATH2, 1, 2), (4, K4, 1, 3)])
def test_schedule_examples(n, edges, c, rounds):
    inst = mig(n, edges, c)
    res = schedule_general(inst, strict=True)
    assert len(res.rounds) == rounds
    assert not validate_schedule(inst, res.rounds)


def test_parallel_bundle_bumps_are_bounded():
    res = schedule_general(mig(2, [(0, 1)] * 4, 1), strict=True, palette=2)
    assert len(res.rounds) == 4
    assert res.trace.events["palette"] <= 2
    assert all(w.holds for w in res.trace.witnesses)


def test_every_palette_growth_is_explained():
    for inst in random_migration_instances(8, 40, caps=(1, 2), max_nodes=5, max_edges=30):
        res = schedule_general(inst, strict=True, palette=lb1(inst))
        grown = res.coloring.q - res.q0
        phase2 = sum(int(line.split("fresh=")[1]) for line in res.trace.lines if line.startswith("phase2"))
        assert res.trace.events.get("palette", 0) + phase2 == grown


def _strict_sweep(instances):
    seen = Counter()
    for inst in instances:
        for palette in (None, lb1(inst)):
            res = schedule_general(inst, strict=True, palette=palette)
            assert not validate_schedule(inst, res.rounds)
            b = migration_lower_bounds(inst)
            assert len(res.rounds) >= max(b.lb1, b.lb2)
            assert res.trace.fallbacks == 0 and res.trace.witness_violations == 0
            assert res.trace.size_violations == 0
            seen.update(res.trace.events)
    return seen


def test_random_instances_strict():
    seen = _strict_sweep(random_migration_instances(21, 150, caps=(1, 2, 3), max_nodes=7, max_edges=40))
    assert seen["balancing"] > 0


def test_parallel_heavy_instances_reach_every_orbit_kind():
    seen = _strict_sweep(random_migration_instances(21, 100, caps=(1,), max_nodes=5, max_edges=40))
    for kind in ("weak-edge", "grow", "witness", "color-orbit"):
        assert seen[kind] > 0, kind


def test_even_instances_agree_with_the_exact_scheduler():
    for inst in random_migration_instances(4, 40, caps=(2, 4), max_edges=50):
        assert len(schedule_general(inst).rounds) >= len(schedule_even(inst)) == lb1(inst)
