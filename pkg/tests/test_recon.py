import json

import pytest

from hexhull.engine import fixed_point_patch, load_system
from hexhull.recon import (AtlasError, corona_atlas, minimal_injective_order, parity_values,
                           reconstruct, save_atlas)
from hexhull.systems import colour_swap, parity


@pytest.mark.parametrize("name", ["penrose", "taylor"])
def test_collisions_by_order(name):
    got = [(len(a.table), a.collisions) for a in (corona_atlas(name, n, 7) for n in range(4))]
    assert got == [(2, 2), (100, 76), (1032, 24), (2160, 0)]


@pytest.mark.parametrize("name", ["penrose", "taylor"])
def test_minimal_order(name):
    assert minimal_injective_order(name, 7) == 3


def test_atlas_stable_in_depth():
    corona_atlas("taylor", 3, 7, check_stable=True)


@pytest.mark.parametrize("name", ["penrose", "taylor"])
def test_reconstruction_roundtrip(name):
    s = load_system(name)
    for seed in s.seeds[:3]:
        p = fixed_point_patch(s, seed, 4, mode="pseudo")
        rec = reconstruct(parity(p), s)
        assert rec and all(rec[q] == p.cells[q] for q in rec)


def test_non_injective_order_refused():
    s = load_system("taylor")
    p = fixed_point_patch(s, s.seeds[0], 3, mode="pseudo")
    with pytest.raises(AtlasError):
        reconstruct(parity(p), s, atlas=corona_atlas(s, 2, 7))


def test_foreign_corona_rejected():
    s = load_system("taylor")
    par = {q: 0 for q in parity(fixed_point_patch(s, s.seeds[0], 3, mode="pseudo"))}
    with pytest.raises(AtlasError):
        reconstruct(par, s)


def test_swapped_colours_reconstruct_in_other_ensemble():
    # Penrose parity is the Taylor parity with the colours exchanged
    t = load_system("taylor")
    par = parity(fixed_point_patch(t, t.seeds[0], 4, mode="pseudo"))
    rec = reconstruct(colour_swap(par), "penrose")
    assert len(rec) > 0


def test_depth_too_small():
    with pytest.raises(AtlasError):
        corona_atlas("taylor", 3, 2)


def test_atlas_json(tmp_path):
    a = corona_atlas("penrose", 1, 5)
    path = tmp_path / "atlas.json"
    save_atlas(a, path)
    d = json.loads(path.read_text())
    assert d["order"] == 1 and len(d["coronae"]) == len(a.table)
    assert len(d["cells"]) == 7
    assert sorted(set(parity_values(load_system("penrose")))) == [0, 1]
