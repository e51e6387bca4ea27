from fractions import Fraction

import pytest

from chromaflux.clustered import conflicts_at, extended_greedy, extended_greedy_colors, find_clusters
from chromaflux.corpus import channel_instance, labeled_variants, small_multigraphs
from chromaflux.instance import InstanceError
from chromaflux.metrics import conflicts_from_colors
from chromaflux.oracles import min_conflicts_exact

from conftest import K4, PATH2, TRIANGLE, chan


def test_path_with_two_single_card_ends():
    inst = chan(3, PATH2, [1, 2, 1])
    dec = find_clusters(inst)
    assert dec.clusters == [[0], [2]]
    assert dec.boundary == [[0], [1]] and dec.internal == [[], []] and dec.rest == []
    colors = extended_greedy_colors(inst, 2)
    assert colors == [1, 2] and conflicts_from_colors(inst, colors) == 4
    assert extended_greedy(inst, 2) == {"1": 1, "2": 2}


def test_all_single_card_is_one_cluster():
    inst = chan(4, K4, 1, channels=3)
    dec = find_clusters(inst)
    assert dec.clusters == [[0, 1, 2, 3]] and dec.rest == [] and dec.internal == [list(range(6))]
    assert extended_greedy_colors(inst, 3) == [1] * 6


def test_all_k_cards_is_plain_greedy():
    inst = chan(3, TRIANGLE, 3)
    dec = find_clusters(inst)
    assert dec.clusters == [] and dec.rest == [0, 1, 2]
    assert conflicts_from_colors(inst, extended_greedy_colors(inst)) == 6


def test_isolated_cluster_takes_lowest_color():
    inst = chan(4, [(0, 1), (2, 3)], [1, 1, 2, 2])
    assert extended_greedy_colors(inst, 2)[0] == 1


def test_two_clusters_on_one_hub():
    # hub 0 (two cards); clusters {1, 2} and {3, 4}, each tied to the hub twice
    edges = [(1, 2), (0, 1), (0, 2), (3, 4), (0, 3), (0, 4)]
    inst = chan(5, edges, [2, 1, 1, 1, 1])
    colors = extended_greedy_colors(inst, 2)
    assert colors == [1, 1, 1, 2, 2, 2]
    assert conflicts_at(inst, colors, [0]) == 8
    opt, _ = min_conflicts_exact(inst, 2)
    assert conflicts_from_colors(inst, colors) == opt


def test_rejects_mixed_capacities():
    with pytest.raises(InstanceError):
        find_clusters(chan(3, PATH2, [1, 2, 3]))
    with pytest.raises(InstanceError):
        extended_greedy_colors(chan(3, PATH2, [1, 2, 2]), 3)


def test_ratio_and_forced_conflicts_on_a_corpus_slice():
    for n, edges in small_multigraphs(max_nodes=3, max_edges=6, simple_upto=4):
        for k in (2, 3):
            for caps in labeled_variants(n, edges, (1, k)):
                inst = channel_instance(n, edges, caps, k)
                colors = extended_greedy_colors(inst, k)
                dec = find_clusters(inst)
                for inner, border in zip(dec.internal, dec.boundary):
                    assert len({colors[e] for e in inner + border}) <= 1
                opt, best = min_conflicts_exact(inst, k)
                oracle = [best[e] for e in inst.edge_ids]
                ones = [v for v in range(n) if caps[v] == 1]
                many = [v for v in range(n) if caps[v] != 1]
                assert conflicts_at(inst, colors, ones) == conflicts_at(inst, oracle, ones)
                ratio = 2 - Fraction(1, k)
                assert conflicts_at(inst, colors, many) <= ratio * conflicts_at(inst, oracle, many)
