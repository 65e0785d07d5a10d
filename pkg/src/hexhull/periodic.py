"""Periodic points of the inflation action and the dynamical zeta function.

A tiling fixed by the m-fold inflation is self-similar about a centre
x* = v / (2**m - 1), v a lattice vector.  With tiles placed at lattice
points q, the map q -> sector parent^m(q + v) contracts towards x*, so the
labels on a ball around x* are determined by the labels on the cycles of
that map.  Every choice of cycle labels that closes up and produces a
legal ball patch is one periodic point.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .engine import SECTOR_POSITIONS, SubstitutionSystem, legal_patches, load_system, sector_split
from .lattice import D6Element, ball, d6_elements, hex_dist
from .polys import log_series_counts, poly_mul, poly_pow


class StabilisationError(RuntimeError):
    """The count did not settle before the radius cap."""


def _nearest_point(v, n):
    x = (Fraction(v[0], n), Fraction(v[1], n))
    q0 = (round(x[0]), round(x[1]))
    best = None
    for c in ball(1, q0):
        d = (c[0] - x[0], c[1] - x[1])
        n2 = d[0] * d[0] + d[0] * d[1] + d[1] * d[1]
        if best is None or n2 < best[0]:
            best = (n2, c)
    return best[1]


def _contraction(q, v, m):
    p = (q[0] + v[0], q[1] + v[1])
    digits = []
    for _ in range(m):
        p, d = sector_split(p)
        digits.append(SECTOR_POSITIONS.index(d))
    return p, digits


@dataclass
class PeriodicPoint:
    centre: tuple  # exact centre (Fraction, Fraction) in lattice coordinates
    cells: dict  # q -> label index on a ball around the centre

    def key(self, rho: int = 4) -> frozenset:
        """Labels at offsets q - centre with squared norm <= rho (translation invariant)."""
        c = self.centre
        out = []
        for q, l in self.cells.items():
            d = (q[0] - c[0], q[1] - c[1])
            if d[0] * d[0] + d[0] * d[1] + d[1] * d[1] <= rho:
                out.append((d, l))
        return frozenset(out)


def _fixed_patches(s: SubstitutionSystem, m: int, radius: int, keep: bool = False,
                   extra: int = 0):
    n = (1 << m) - 1
    atlas = legal_patches(s, radius)
    bo = ball(radius)
    sector = s.sector
    count = 0
    found = []
    for i in range(n):
        for j in range(n):
            v = (i, j)
            q0 = _nearest_point(v, n)
            cells = ball(radius + extra, q0)
            amap = {}
            for q in cells:
                p, digits = _contraction(q, v, m)
                if hex_dist(p, q0) > radius + extra:
                    raise RuntimeError("contraction leaves the ball")
                amap[q] = (p, digits)
            cycles = _cycles(amap)
            options = []
            for cyc in cycles:
                ok = []
                for lab in range(len(s)):
                    cur = lab
                    for q in reversed(cyc):
                        cur = _chain(sector, cur, amap[q][1])
                    if cur == lab:
                        ok.append(lab)
                options.append(ok)
            for choice in itertools.product(*options):
                f = {}
                for cyc, lab in zip(cycles, choice):
                    f[cyc[0]] = lab
                    _fill_cycle(f, cyc, amap, sector)
                for q in cells:
                    _resolve(f, q, amap, sector)
                pt = tuple(f[(q0[0] + d[0], q0[1] + d[1])] for d in bo)
                if pt in atlas:
                    count += 1
                    if keep:
                        centre = (Fraction(i, n), Fraction(j, n))
                        found.append(PeriodicPoint(centre, dict(f)))
    return count, found


def _chain(sector, lab, digits):
    for d in reversed(digits):
        lab = int(sector[lab, d])
    return lab


def _cycles(amap):
    on_cycle = set()
    for q in amap:
        seen = {}
        x = q
        while x not in seen:
            seen[x] = len(seen)
            x = amap[x][0]
        start = seen[x]
        on_cycle.update(k for k, i in seen.items() if i >= start)
    cycles = []
    done = set()
    for q in sorted(on_cycle):
        if q in done:
            continue
        cyc = [q]
        x = amap[q][0]
        while x != q:
            cyc.append(x)
            x = amap[x][0]
        done.update(cyc)
        cycles.append(cyc)
    return cycles


def _fill_cycle(f, cyc, amap, sector):
    # f(q) = chain(f(parent(q))); parent(cyc[i]) = cyc[i+1]
    for idx in range(len(cyc) - 1, 0, -1):
        q = cyc[idx]
        p, digits = amap[q]
        f[q] = _chain(sector, f[p], digits)


def _resolve(f, q, amap, sector):
    path = []
    while q not in f:
        path.append(q)
        q = amap[q][0]
    for x in reversed(path):
        p, digits = amap[x]
        f[x] = _chain(sector, f[p], digits)
    return f[path[0]] if path else f[q]


def count_periodic(s: SubstitutionSystem | str, m: int, radius: int = 2, radius_cap: int = 64) -> int:
    """Number of hull elements fixed by the m-fold inflation.

    The count is repeated with doubled ball radius until two consecutive
    radii agree.
    """
    if isinstance(s, str):
        s = load_system(s)
    if m < 1:
        raise ValueError("m must be at least 1")
    prev = _fixed_patches(s, m, radius)[0]
    while True:
        radius *= 2
        if radius > radius_cap:
            raise StabilisationError(f"a_{m} did not stabilise below radius {radius_cap}")
        cur = _fixed_patches(s, m, radius)[0]
        if cur == prev:
            return cur
        prev = cur


def periodic_points(s: SubstitutionSystem, m: int, radius: int = 2) -> list:
    return _fixed_patches(s, m, radius, keep=True, extra=1)[1]


# ----------------------------------------------------------- closed forms

CLOSED_FORMS = {
    "halfhex": lambda m: (2 ** m - 1) ** 2 + 2,
    "arrowed": lambda m: (2 ** m - 1) ** 2 + 3 * (2 ** m - 1) + 2,
    "penrose": lambda m: (2 ** m - 1) ** 2 + 6 * (2 ** m - 1) + 5 + 2 * (1 + (-1) ** m),
    "taylor": lambda m: (2 ** m - 1) ** 2 + 6 * (2 ** m - 1) + 5 + 2 * (1 + (-1) ** m),
}

ONE_MINUS = {c: [1, -c] for c in (1, 2, 4, -1)}  # 1 - c z


def _factor(*parts):
    out = [1]
    for c, e in parts:
        out = poly_mul(out, poly_pow(ONE_MINUS[c], e))
    return out


# numerator and denominator of the zeta functions as integer polynomials in z
RATIONAL_ZETA = {
    "halfhex": (_factor((2, 2)), _factor((1, 1), (4, 1), (1, 2))),
    "arrowed": (_factor((2, 2), (1, 1)), _factor((1, 1), (4, 1), (2, 3))),
    "penrose": (_factor((2, 2), (1, 2)), _factor((1, 1), (4, 1), (2, 6), (1, 3), (-1, 2))),
    "taylor": (_factor((2, 2), (1, 4)), _factor((1, 1), (4, 1), (2, 6), (1, 5), (-1, 2))),
}

# factors of the zeta function: (kind, multiplicity)
DECOMPOSITION = {
    "halfhex": [("2d solenoid", 1), ("extra fixed points", 2)],
    "arrowed": [("2d solenoid", 1), ("1d solenoids", 3), ("extra fixed points", 2)],
    "penrose": [("2d solenoid", 1), ("1d solenoids", 6), ("extra fixed points", 5),
                ("extra 2-cycles", 2)],
    "taylor": [("2d solenoid", 1), ("1d solenoids", 6), ("extra fixed points", 5),
               ("extra 2-cycles", 2)],
}


def counts_from_rational(num, den, M: int) -> list:
    """a_1..a_M with exp(sum a_m z^m / m) = num / den."""
    return log_series_counts(num, den, M)


def counts_from_decomposition(name: str, M: int) -> list:
    out = []
    for m in range(1, M + 1):
        a = 0
        for tag, mult in DECOMPOSITION[name]:
            if tag == "2d solenoid":
                a += mult * (2 ** m - 1) ** 2
            elif tag == "1d solenoids":
                a += mult * (2 ** m - 1)
            elif tag == "extra fixed points":
                a += mult
            else:
                a += mult * (2 if m % 2 == 0 else 0)
        out.append(a)
    return out


@dataclass
class ZetaReport:
    system: str
    a: list
    numerator: list
    denominator: list
    decomposition: list = field(default_factory=list)
    ok: bool = True
    first_mismatch: int | None = None

    def to_json(self) -> dict:
        return {"system": self.system, "a": self.a, "numerator": self.numerator,
                "denominator": self.denominator,
                "decomposition": [{"factor": t, "multiplicity": k} for t, k in self.decomposition],
                "ok": self.ok, "first_mismatch": self.first_mismatch}


class ZetaMismatch(AssertionError):
    pass


def zeta_series(s: SubstitutionSystem | str, M: int, strict: bool = True,
                radius_cap: int = 64) -> ZetaReport:
    if isinstance(s, str):
        s = load_system(s)
    if M < 1:
        raise ValueError("M must be at least 1")
    num, den = RATIONAL_ZETA[s.name]
    expect = counts_from_rational(num, den, M)
    a = [count_periodic(s, m, radius_cap=radius_cap) for m in range(1, M + 1)]
    bad = next((m for m in range(1, M + 1) if a[m - 1] != expect[m - 1]), None)
    rep = ZetaReport(s.name, a, num, den, DECOMPOSITION[s.name], bad is None, bad)
    if strict and bad is not None:
        raise ZetaMismatch(f"{s.name}: a_{bad} = {a[bad - 1]}, closed form gives {expect[bad - 1]}")
    return rep


# ------------------------------------------------------------ orbits

def _act_key(g: D6Element, key, perm) -> frozenset:
    return frozenset((g.act(d), int(perm[l])) for d, l in key)


def orbit_structure(s: SubstitutionSystem | str, m: int) -> list:
    """(point id, least period, D6 orbit size) for every point fixed by the m-fold inflation."""
    if isinstance(s, str):
        s = load_system(s)
    if m > 3:
        raise ValueError("orbit_structure is meant for m <= 3")
    keys_by_period = {}
    for d in range(1, m + 1):
        if m % d == 0:
            keys_by_period[d] = [p.key() for p in periodic_points(s, d)]
    keys = keys_by_period[m]
    if len(set(keys)) != len(keys):
        raise RuntimeError("periodic points not separated by their keys")
    kset = set(keys)
    perms = [(g, s.permutation(g)) for g in d6_elements()]
    out = []
    for i, k in enumerate(keys):
        period = min(d for d, ks in keys_by_period.items() if k in set(ks))
        orbit = {_act_key(g, k, perm) for g, perm in perms}
        if not orbit <= kset:
            raise RuntimeError("D6 image of a periodic point is not periodic")
        out.append((i, period, len(orbit)))
    return out


def is_corner(p: PeriodicPoint) -> bool:
    """Centre at a hexagon corner, i.e. in (1/3) lattice but not a lattice point."""
    return any(x.denominator == 3 for x in p.centre)
