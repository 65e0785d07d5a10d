from functools import lru_cache

import pytest

from hexhull.engine import load_system
from hexhull.periodic import CLOSED_FORMS
from hexhull.topology import (EXPECTED_GROUPS, ComplexError, build_complex, check_chain_complex,
                              cohomology, direct_limit_invariants, integer_cohomology,
                              matches_expected, zeta_from_cohomology)

SYSTEMS = ("halfhex", "arrowed", "penrose", "taylor")


@lru_cache(maxsize=None)
def coh(name):
    return cohomology(name)


@pytest.mark.parametrize("name,sizes", [("halfhex", (5, 21, 18)), ("arrowed", (8, 42, 36)),
                                        ("taylor", (132, 624, 504))])
def test_complex_sizes(name, sizes):
    cx = build_complex(name)
    assert cx.sizes == sizes
    chk = check_chain_complex(cx)
    assert chk["dd_zero"] and chk["chain_map"]


def test_decorated_complex_has_84_face_labels():
    assert build_complex("taylor").n_faces == 84


@pytest.mark.parametrize("name", SYSTEMS)
def test_euler_characteristic(name):
    cx = build_complex(name)
    n0, n1, n2 = cx.sizes
    h = integer_cohomology(cx)
    assert n0 - n1 + n2 == h[0]["rank"] - h[1]["rank"] + h[2]["rank"]


@pytest.mark.parametrize("name", ["halfhex", "arrowed", "taylor"])
def test_groups(name):
    ok, diffs = matches_expected(coh(name))
    assert ok, diffs


def test_group_strings():
    assert coh("halfhex").to_json()["groups"] == {"0": "Z", "1": "Z[1/2]^2", "2": "Z[1/4] + Z^2"}
    assert coh("taylor").to_json()["groups"]["2"] == "Z[1/4] + Z[1/2]^6 + Z^7"


@pytest.mark.parametrize("name", SYSTEMS)
def test_zeta_from_cohomology(name):
    z = zeta_from_cohomology(coh(name), 6)
    assert z["a"] == [CLOSED_FORMS[name](m) for m in range(1, 7)]


def test_direct_limit_of_nilpotent_part():
    # the nilpotent block drops out of the limit
    A = [[2, 0, 0], [0, 0, 1], [0, 0, 0]]
    inv = direct_limit_invariants(A)
    assert inv["eventual_rank"] == 1 and inv["roots"] == {2: 1}


def test_torsion_only_in_top_degree():
    with pytest.raises(ComplexError):
        direct_limit_invariants([[1]], torsion_primes=(3,), top_degree=False)


def test_expected_table_covers_all_systems():
    assert set(EXPECTED_GROUPS) == set(SYSTEMS)
    for name in SYSTEMS:
        assert sum(EXPECTED_GROUPS[name][0][0].values()) == 1


def test_build_complex_without_border_forcing(monkeypatch):
    import hexhull.topology as top
    monkeypatch.setattr(top, "border_forcing_order", lambda s, m: None)
    with pytest.raises(ComplexError):
        top.build_complex(load_system("halfhex"))


def _fixture():
    import json
    from pathlib import Path
    return json.loads((Path(__file__).parent / "fixtures" / "cohomology_expected.json").read_text())


def test_fixture_agrees_with_expected_table():
    fx = _fixture()
    for name in SYSTEMS:
        for k in range(3):
            roots, torsion = EXPECTED_GROUPS[name][k]
            entry = fx[name][f"H{k}"]
            assert {int(r): e for r, e in entry["eigenvalues"].items()} == roots
            assert entry["rank"] == sum(roots.values())
            assert entry["torsion"] == torsion


@pytest.mark.parametrize("name", ["halfhex", "arrowed", "taylor"])
def test_groups_match_fixture(name):
    fx = _fixture()[name]
    js = coh(name).to_json()
    assert [js["groups"][str(k)] for k in range(3)] == fx["groups"]
    for k in range(3):
        assert js["limit"][str(k)]["eventual_rank"] == fx[f"H{k}"]["rank"]
