import pytest

from hexhull.engine import load_system
from hexhull.periodic import (CLOSED_FORMS, RATIONAL_ZETA, ZetaMismatch, count_periodic,
                              counts_from_decomposition, counts_from_rational, is_corner,
                              orbit_structure, periodic_points, zeta_series)
from hexhull.polys import exp_series, log_series_counts, poly_mul, series_div

SYSTEMS = ("halfhex", "arrowed", "penrose", "taylor")


def test_fixed_points_m1():
    assert [count_periodic(n, 1) for n in SYSTEMS] == [3, 6, 12, 12]


@pytest.mark.parametrize("name", SYSTEMS)
def test_counts_match_closed_form(name):
    for m in range(1, 5):
        assert count_periodic(name, m) == CLOSED_FORMS[name](m)


def test_penrose_taylor_counts():
    assert [CLOSED_FORMS["taylor"](m) for m in range(1, 7)] == [12, 36, 96, 324, 1152, 4356]


@pytest.mark.parametrize("name", SYSTEMS)
def test_rational_forms_agree(name):
    num, den = RATIONAL_ZETA[name]
    a = counts_from_rational(num, den, 8)
    assert a == [CLOSED_FORMS[name](m) for m in range(1, 9)]
    assert a == counts_from_decomposition(name, 8)


def test_penrose_and_taylor_share_zeta():
    np_, dp = RATIONAL_ZETA["penrose"]
    nt, dt = RATIONAL_ZETA["taylor"]
    # equal as rational functions: cross products agree
    assert poly_mul(np_, dt) == poly_mul(nt, dp)


def test_series_helpers():
    # 1/(1-z) = 1 + z + z^2 + ...
    assert series_div([1], [1, -1], 5) == [1, 1, 1, 1, 1]
    # the 2d solenoid: (1-2z)^2 / ((1-z)(1-4z)) gives (2^m-1)^2
    a = log_series_counts([1, -4, 4], [1, -5, 4], 5)
    assert a == [(2 ** m - 1) ** 2 for m in range(1, 6)]
    # exp of log series returns the quotient
    z = exp_series(a, 5)
    assert z == series_div([1, -4, 4], [1, -5, 4], 6)


def test_zeta_series_report():
    rep = zeta_series("arrowed", 3)
    assert rep.ok and rep.a == [6, 20, 72]
    js = rep.to_json()
    assert js["first_mismatch"] is None


def test_zeta_mismatch_detected(monkeypatch):
    import hexhull.periodic as per
    monkeypatch.setitem(per.RATIONAL_ZETA, "halfhex", ([1], [1, -3]))
    with pytest.raises(ZetaMismatch):
        zeta_series("halfhex", 2)
    rep = zeta_series("halfhex", 2, strict=False)
    assert not rep.ok and rep.first_mismatch == 2  # 1/(1-3z) agrees at m=1


def test_penrose_fixed_points_form_one_orbit():
    orb = orbit_structure("penrose", 1)
    assert len(orb) == 12
    assert {o[2] for o in orb} == {12}


def test_penrose_period_two_points():
    orb = orbit_structure("penrose", 2)
    least2 = [o for o in orb if o[1] == 2]
    assert len(least2) == 24
    assert all(o[2] == 12 for o in least2)
    pts = periodic_points(load_system("penrose"), 2)
    fixed = {p.key() for p in periodic_points(load_system("penrose"), 1)}
    assert all(is_corner(p) for p in pts if p.key() not in fixed)


def test_halfhex_orbits():
    orb = orbit_structure("halfhex", 2)
    assert len(orb) == 11
    assert sorted(o[2] for o in orb if o[1] == 1) == [3, 3, 3]
