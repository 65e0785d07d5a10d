import math

from hexhull.lattice import (NB, D6Element, ball, ball_size, d6_elements, hex_dist, hex_norm,
                             hexagon_corners, to_float, sublattice_index)


def test_neighbour_directions():
    for k, d in enumerate(NB):
        x, y = to_float(d)
        assert math.isclose(math.hypot(x, y), math.sqrt(3))
        ang = math.degrees(math.atan2(y, x)) % 360
        assert math.isclose(ang, (30 + 60 * k) % 360, abs_tol=1e-9)


def test_ball_sizes():
    for r in range(6):
        b = ball(r)
        assert len(b) == ball_size(r) == 3 * r * (r + 1) + 1
        assert all(hex_norm(p) <= r for p in b)


def test_distance_symmetric():
    pts = ball(3)
    for p in pts[::5]:
        for q in pts[::7]:
            assert hex_dist(p, q) == hex_dist(q, p)


def test_corners_are_shared():
    c0 = {tuple(round(v, 9) for v in c) for c in hexagon_corners((0, 0))}
    for d in NB:
        c1 = {tuple(round(v, 9) for v in c) for c in hexagon_corners(d)}
        assert len(c0 & c1) == 2


def test_d6_group():
    els = d6_elements()
    assert len(els) == 12
    for g in els:
        assert (g * g.inverse()).act((2, -1)) == (2, -1)
        # rotations and reflections preserve the hex norm
        for p in ball(2):
            assert hex_norm(g.act(p)) == hex_norm(p)
    r = D6Element(1, False)
    assert r.act((1, 0)) == (0, 1)


def test_sublattice_index():
    assert sublattice_index(2) == 4
    assert sublattice_index(4) == 16
