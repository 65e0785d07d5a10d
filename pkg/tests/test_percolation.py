import random

import pytest

from hexhull.engine import load_system
from hexhull.percolation import (UnionFind, _bfs, belt, canonical_shape, clusters, components,
                                 graph_diameter, growth_curve, island_census, occurs_in,
                                 parity_patch, smallest_island)
from hexhull.systems import colour_swap


def _brute_diameter(cells):
    cells = set(cells)
    return max(max(_bfs(x, cells).values()) for x in cells)


def test_union_find():
    uf = UnionFind(range(6))
    uf.union(0, 1)
    uf.union(2, 3)
    uf.union(1, 3)
    assert uf.find(0) == uf.find(2)
    assert uf.find(4) != uf.find(0)
    assert uf.size[uf.find(0)] == 4


def test_diameter_against_brute_force():
    rng = random.Random(3)
    par = parity_patch("taylor", 4)
    comps = components(par)
    for g in comps:
        assert graph_diameter(g) == _brute_diameter(g)
    # random blobs on the lattice
    from hexhull.lattice import ball
    for _ in range(30):
        cells = {q for q in ball(6) if rng.random() < 0.6}
        blob = {q: 0 for q in cells}
        for g in components(blob):
            assert graph_diameter(g) == _brute_diameter(g)


def test_components_partition():
    par = parity_patch("penrose", 4)
    comps = components(par)
    assert sum(len(g) for g in comps) == len(par)
    for g in comps:
        assert len({par[q] for q in g}) == 1


@pytest.mark.parametrize("name", ["penrose", "taylor"])
def test_growth(name):
    curve = growth_curve(name, 2, 6)
    assert [c[1] for c in curve] == [7, 23, 51, 115, 261]
    assert [c[2] for c in curve] == [6, 14, 40, 96, 224]


def test_colour_swap_equivariance():
    par = parity_patch("taylor", 5)
    a = clusters(par).to_json()["colours"]
    b = clusters(colour_swap(par)).to_json()["colours"]
    assert a["0"] == b["1"] and a["1"] == b["0"]


def test_penrose_is_swapped_taylor():
    # seeds of opposite chirality give colour-swapped patterns
    assert parity_patch("penrose", 5, "1:0:-") == colour_swap(parity_patch("taylor", 5, "C:0:+"))


@pytest.mark.parametrize("k", [5, 6])
def test_smallest_island_stable(k):
    ref = smallest_island(parity_patch("taylor", 5))
    got = smallest_island(parity_patch("taylor", k))
    assert len(ref[0]) == 13
    assert got[0] == ref[0] and got[1] == ref[1]


def test_island_census_counts():
    cen = island_census(parity_patch("taylor", 5))
    assert cen
    assert all(len(sh) >= 13 for sh, _, _ in cen)


def test_belt_recurs_in_every_seed():
    s = load_system("taylor")
    par = parity_patch("taylor", 5)
    shape, colour, _ = smallest_island(par)
    inst = next(g for g in components(par) if canonical_shape(g) == shape)
    b = belt(par, inst)
    assert len(b) > len(shape)
    # the same belt, two levels higher, around an opposite-chirality seed
    opposite = next(i for i in s.seeds if not s.labels[i].chirality)
    assert occurs_in(b, parity_patch("taylor", 7, opposite))
    for seed in s.seeds:
        assert occurs_in(b, parity_patch("taylor", 7, seed))


def test_occurs_in_negative():
    par = parity_patch("taylor", 3)
    assert occurs_in({}, par)
    assert not occurs_in({(0, 0): 0, (1, 0): 0, (0, 1): 0, (5, 5): 7}, par)


def test_report_json():
    js = clusters(parity_patch("penrose", 3)).to_json()
    assert set(js["colours"]) == {"0", "1"}
    assert js["cells"] == 3 * 7 * 8 + 1
