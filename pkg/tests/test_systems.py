import pytest

from hexhull.engine import LabelError, Patch, fixed_point_patch, load_system
from hexhull.lattice import D6Element, d6_elements
from hexhull.systems import (GREY, WHITE, all_hexagons_arrowed, almost_colour_reflection,
                             co_oriented_pairs, colour_swap, derive_arrowed_halfhex,
                             derive_halfhex, double_hexagon, halfhex_diagonal, intertwines,
                             parity, parity_symmetric, transform_parity, underive_double_hexagon)


@pytest.mark.parametrize("name", ["penrose", "taylor"])
@pytest.mark.parametrize("mode", ["sector", "pseudo"])
def test_factor_maps_intertwine(name, mode):
    s = load_system(name)
    for k in range(5):
        assert intertwines(derive_halfhex, s, load_system("halfhex"), k, mode)
        assert intertwines(derive_arrowed_halfhex, s, load_system("arrowed"), k, mode)


def test_arrowed_to_halfhex_intertwines():
    a = load_system("arrowed")
    for k in range(5):
        assert intertwines(derive_halfhex, a, load_system("halfhex"), k, "pseudo")


def test_derivation_composes():
    s = load_system("taylor")
    p = fixed_point_patch(s, s.seeds[0], 3)
    assert derive_halfhex(derive_arrowed_halfhex(p)).cells == derive_halfhex(p).cells


def test_each_arrowed_hexagon_has_one_co_oriented_pair():
    for p in range(6):
        assert len(co_oriented_pairs(p)) == 1
    assert {halfhex_diagonal(p) for p in range(6)} == {0, 1, 2}
    # opposite arrowed hexagons share the diagonal
    assert all(halfhex_diagonal(p) == halfhex_diagonal(p + 3) for p in range(3))


def test_halfhex_patch_is_not_decorated():
    h = load_system("halfhex")
    with pytest.raises(LabelError):
        parity(fixed_point_patch(h, 0, 2))


def test_parity_colours():
    s = load_system("taylor")
    p = fixed_point_patch(s, s.seeds[0], 2)
    par = parity(p)
    assert set(par.values()) <= {WHITE, GREY}
    assert par[(0, 0)] == WHITE


@pytest.mark.parametrize("name", ["penrose", "taylor"])
def test_parity_is_d6_symmetric(name):
    s = load_system(name)
    assert parity_symmetric(fixed_point_patch(s, s.seeds[0], 4, mode="pseudo"))


def test_colour_swap_involution():
    s = load_system("penrose")
    par = parity(fixed_point_patch(s, s.seeds[0], 3))
    assert colour_swap(colour_swap(par)) == par
    refl = D6Element(0, True)
    assert transform_parity(refl, transform_parity(refl, par)) == par


def test_almost_colour_reflection():
    s = load_system("taylor")
    par = parity(fixed_point_patch(s, s.seeds[0], 5, mode="pseudo"))
    res = {g.rotation: almost_colour_reflection(par, g) for g in d6_elements() if g.reflected}
    # two mirror lines fail only on the line itself
    on_line = [r for r in res.values() if r["max_offset"] == 0 and r["cells"]]
    assert len(on_line) == 2
    assert all(r["cells"] for r in res.values())
    with pytest.raises(ValueError):
        almost_colour_reflection(par, D6Element(1, False))


@pytest.mark.parametrize("name", ["penrose", "taylor"])
def test_double_hexagon_roundtrip(name):
    s = load_system(name)
    for seed in s.seeds[:2]:
        p = fixed_point_patch(s, seed, 4, mode="pseudo")
        dh = double_hexagon(p)
        assert all_hexagons_arrowed(dh)
        rec = underive_double_hexagon(dh)
        assert len(rec) == 469  # ball of radius 15 minus a 3-collar
        assert all(rec[q] == p.cells[q] for q in rec)


def test_double_hexagon_vertices():
    s = load_system("penrose")
    dh = double_hexagon(fixed_point_patch(s, s.seeds[0], 3, mode="pseudo"))
    complete = [v for v in dh["vertex"].values() if v is not None]
    assert complete and all(0 <= v < 6 for v in complete)


@pytest.mark.parametrize("name", ["penrose", "taylor"])
def test_derived_patch_is_halfhex_fixed_point(name):
    s, h = load_system(name), load_system("halfhex")
    for seed in s.seeds:
        p = fixed_point_patch(s, seed, 3)
        ell = s.labels[seed].orientation % 3
        assert derive_halfhex(p).cells == fixed_point_patch(h, f"H:{ell}:+", 3).cells


def test_single_hexagon_diagonal():
    s = load_system("penrose")
    for i, lab in enumerate(s.labels):
        one = derive_halfhex(Patch("penrose", {(0, 0): i}))
        ell = load_system("halfhex").labels[one.cells[(0, 0)]].orientation
        # the diagonal joining corners ell and ell+3 is parallel to edges p+1 and p+4
        p = lab.orientation
        assert co_oriented_pairs(p) == [(p + 1) % 3]
        assert ell == p % 3
