import json

import numpy as np
import pytest

from hexhull.engine import (ConsistencyError, LabelError, Patch, SubstitutionSystem, TileLabel,
                            adjacent_pairs, all_pairs_closure, border_forcing_order,
                            check_d6_covariance, fixed_point_grid, fixed_point_patch, inflate,
                            legal_patches, load_system, preferred_sublattice, pseudo_inflate,
                            scanned_patches, seed_index, system_from_json, system_to_json,
                            verify_border_forcing, verify_pseudo_consistency)
from hexhull.lattice import ball

SYSTEMS = ("halfhex", "arrowed", "penrose", "taylor")


def test_label_parse_roundtrip():
    lab = TileLabel.parse("C:3:-")
    assert lab == TileLabel("C", 3, False)
    assert str(lab) == "C:3:-"
    with pytest.raises(LabelError):
        TileLabel.parse("C:3")


@pytest.mark.parametrize("name,n", [("halfhex", 3), ("arrowed", 6), ("penrose", 84), ("taylor", 84)])
def test_alphabet_sizes(name, n):
    assert len(load_system(name)) == n


def test_unknown_system():
    with pytest.raises(KeyError):
        load_system("ammann")


def test_aliases():
    assert load_system("hh") is load_system("halfhex")
    assert load_system("ahh").name == "arrowed"


def test_seed_errors_list_valid_seeds():
    s = load_system("taylor")
    non_seed = next(i for i in range(len(s)) if i not in s.seeds)
    with pytest.raises(LabelError, match="valid seeds: " + s.label_str(s.seeds[0]).replace("+", "\\+")):
        seed_index(s, s.label_str(non_seed))
    with pytest.raises(LabelError, match="unknown label"):
        seed_index(s, "Z:0:+")


@pytest.mark.parametrize("name", SYSTEMS)
def test_system_json_roundtrip(name):
    s = load_system(name)
    t = system_from_json(json.loads(json.dumps(system_to_json(s))))
    assert t.labels == s.labels
    assert np.array_equal(t.pseudo, s.pseudo)


@pytest.mark.parametrize("name", SYSTEMS)
def test_sector_patch_sizes(name):
    s = load_system(name)
    for k in range(5):
        assert len(fixed_point_patch(s, s.seeds[0], k)) == 4 ** k


@pytest.mark.parametrize("name", SYSTEMS)
def test_sector_is_pseudo_restriction(name):
    s = load_system(name)
    seed = {(0, 0): s.seeds[0]}
    sec = inflate(s, seed, 3).cells
    ps = pseudo_inflate(s, seed, 3).cells
    assert all(ps[q] == l for q, l in sec.items())


@pytest.mark.parametrize("name", SYSTEMS)
def test_pseudo_fixed_point_is_ball(name):
    s = load_system(name)
    g = fixed_point_grid(s, s.seeds[0], 4)
    assert set(g.cells()) == set(ball(15))


def test_patch_json_roundtrip():
    s = load_system("penrose")
    p = fixed_point_patch(s, s.seeds[0], 3)
    q = Patch.from_json(json.loads(json.dumps(p.to_json())))
    assert q.system == "penrose" and q.cells == p.cells


def test_patch_rejects_unknown_label():
    with pytest.raises(LabelError):
        Patch.from_json({"system": "halfhex", "cells": [[0, 0, "H:7:+"]]})


@pytest.mark.parametrize("name", SYSTEMS)
def test_pseudo_consistency(name):
    rep = verify_pseudo_consistency(load_system(name))
    assert rep["ok"] and not rep["conflicts"]


def test_mutated_halfhex_is_inconsistent():
    s = load_system("halfhex")
    pseudo = s.pseudo.copy()
    pseudo[0, 1] = (pseudo[0, 1] + 1) % 3
    bad = SubstitutionSystem("halfhex", s.kind, list(s.labels), pseudo, list(s.bases))
    rep = verify_pseudo_consistency(bad, all_pairs_closure(bad))
    assert not rep["ok"]
    assert rep["conflicts"]


@pytest.mark.parametrize("name,sizes", [("halfhex", (3, 24, 60)), ("arrowed", (6, 60, 168)),
                                        ("penrose", (84, 552, 1416)), ("taylor", (84, 552, 1416))])
def test_atlas_sizes(name, sizes):
    s = load_system(name)
    assert tuple(len(legal_patches(s, r)) for r in range(3)) == sizes


@pytest.mark.parametrize("name", ["halfhex", "arrowed"])
def test_scanned_atlas_matches_closure(name):
    s = load_system(name)
    assert scanned_patches(s, 2, 6) == legal_patches(s, 2)


@pytest.mark.parametrize("name,n", [("halfhex", 42), ("arrowed", 108), ("penrose", 1200), ("taylor", 1200)])
def test_adjacent_pairs(name, n):
    assert len(adjacent_pairs(load_system(name))) == n


@pytest.mark.parametrize("name", SYSTEMS)
def test_border_forcing(name):
    s = load_system(name)
    assert border_forcing_order(s) == 2
    assert verify_border_forcing(s, 2)
    assert not verify_border_forcing(s, 1)


@pytest.mark.parametrize("name", SYSTEMS)
def test_d6_covariance(name):
    assert check_d6_covariance(load_system(name)) == []


@pytest.mark.parametrize("name,index", [("halfhex", 1), ("arrowed", 1), ("penrose", 4), ("taylor", 4)])
def test_preferred_sublattice(name, index):
    res = preferred_sublattice(load_system(name))
    assert res["index"] == index
    assert res["full"]


def test_consistency_error_type():
    assert issubclass(ConsistencyError, ValueError)
