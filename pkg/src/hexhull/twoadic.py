"""2-adic construction of the hexagon inflation tables.

Every tile label of the half-hex family is a function of the 2-adic
expansion of the tile position.  This module rebuilds the rule tables from
that description, independently of the frozen JSON asset, and is used as an
oracle for it:

* the half-hex type follows from the sector digits of the position,
* the arrowed label comes from running the arrowed half-hex table down the
  digit expansion,
* the red decoration bit of the line-decorated systems is read off the
  expansion in the index-3 sublattice spanned by S1 = (1,1), S2 = (2,-1).

Decorated labels are then built as local recodings ("fine" labels): a tile
together with its first-level children.
"""
from __future__ import annotations

import random
from typing import Callable, Hashable

from .lattice import NB, ball

NBITS = 90
MOD = 1 << NBITS
INV3 = pow(3, -1, MOD)

# sector digits: z = 2*parent + digit
SECTOR_DIGITS = ((0, 0), (0, 1), (-1, 0), (1, -1))
_DIGIT_OF_CLASS = {(d[0] % 2, d[1] % 2): d for d in SECTOR_DIGITS}


def sector_split(z):
    """Return (parent, digit) with z = 2*parent + digit."""
    d = _DIGIT_OF_CLASS[(z[0] % 2, z[1] % 2)]
    return ((z[0] - d[0]) // 2, (z[1] - d[1]) // 2), d


def sector_digits(z, n: int) -> list:
    out = []
    for _ in range(n):
        z, d = sector_split(z)
        out.append(d)
    return out


# -------------------------------------------------------- half-hex family

def halfhex_child(ell: int, o) -> int:
    if o == (0, 0):
        return ell
    return (NB.index(o) + 2) % 3


def arrow_head_ccw(p: int, k: int) -> bool:
    """Edge k of an arrowed hexagon with label p carries its head at the ccw end."""
    return (k - p) % 6 in (2, 4, 5)


def arrowed_child(p: int, o) -> int:
    if o == (0, 0):
        return p
    k = NB.index(o)
    return (k + 2) % 6 if arrow_head_ccw(p, k) else (k + 5) % 6


def _run_down(z, child: Callable, starts, n: int = 80):
    ds = sector_digits(z, n)
    out = set()
    for s in starts:
        lab = s
        for o in reversed(ds):
            lab = child(lab, o)
        out.add(lab)
    return out


def halfhex_label(z) -> int:
    res = _run_down(z, halfhex_child, range(3))
    if len(res) != 1:
        raise ValueError(f"position {z} is not generic")
    return res.pop()


def arrowed_label(z) -> int:
    res = _run_down(z, arrowed_child, range(6))
    if len(res) != 1:
        raise ValueError(f"position {z} is not generic")
    return res.pop()


# ------------------------------------------------------- red decoration

# digit set for the index-3 sublattice, in (alpha, beta) coordinates w.r.t. (S1, S2)
_RED_DIGITS = {(0, 0): (0, 0), (1, 0): (1, 0), (0, 1): (0, -1), (1, 1): (-1, 1)}
# residue class of the line direction parallel to the diagonal of type ell
_LINE_CLASS = {0: (0, 1), 1: (1, 0), 2: (1, 1)}


def _red_coords(y):
    be = ((y[0] - y[1]) * INV3) % MOD
    al = (y[1] + be) % MOD
    return al, be


def red_class(z, ell: int, n: int = 80):
    """First residue class of the S-expansion that is neither 0 nor the line class."""
    al, be = _red_coords(z)
    skip = ((0, 0), _LINE_CLASS[ell])
    for _ in range(n):
        c = (al % 2, be % 2)
        if c not in skip:
            return c
        d = _RED_DIGITS[c]
        al = ((al - d[0]) // 2) % MOD
        be = ((be - d[1]) // 2) % MOD
    raise ValueError(f"position {z} is not generic")


def red_classes(ell: int):
    """The two possible red classes of a tile of half-hex type ell."""
    return tuple(c for c in ((1, 0), (0, 1), (1, 1)) if c != _LINE_CLASS[ell])


# Decorated tile (p, red class) -> (orientation, chirality).  The positive
# chirality orbit under rotation, and its mirror image.
PLUS = ((0, (1, 0)), (1, (0, 1)), (2, (0, 1)), (3, (1, 1)), (4, (1, 1)), (5, (1, 0)))
MINUS = ((0, (1, 1)), (1, (1, 1)), (2, (1, 0)), (3, (1, 0)), (4, (0, 1)), (5, (0, 1)))


def llama_tile(z, flip: bool = False) -> tuple[int, int]:
    """Decorated-llama tile at z as (orientation, chirality bit); 0 = positive."""
    p = arrowed_label(z)
    c = red_class(z, p % 3)
    w = (p, c)
    chi = 0 if w in PLUS else 1
    if flip:
        chi ^= 1
    return (p, chi)


def llama_act(g, t):
    """D6 action on decorated tiles (orientation, chirality)."""
    p, chi = t
    if g.reflected:
        p, chi = -p, chi ^ 1
    return ((p + g.rotation) % 6, chi)


# --------------------------------------------------------- fine labels

_B1 = ball(1)


def build_fine_system(tile: Callable, act: Callable, n_samples: int = 4000, seed: int = 11,
                      bits: int = 44) -> dict:
    """Recode `tile` into labels carrying their first-level children.

    The label of z is (tile(z), tile(2z+q) for q in the radius-1 ball).  The
    pseudo inflation is read off at sample points; the run fails if a label
    shows two different images or if a child label was never seen as parent.
    """
    cache: dict = {}

    def t(z):
        v = cache.get(z)
        if v is None:
            v = cache[z] = tile(z)
        return v

    def fine(z):
        b = (2 * z[0], 2 * z[1])
        return (t(z),) + tuple(t((b[0] + q[0], b[1] + q[1])) for q in _B1)

    rng = random.Random(seed)
    table: dict[Hashable, tuple] = {}
    for _ in range(n_samples):
        z = (rng.getrandbits(bits) + 1, rng.getrandbits(bits) + 1)
        f = fine(z)
        b = (2 * z[0], 2 * z[1])
        kids = tuple(fine((b[0] + o[0], b[1] + o[1])) for o in ((0, 0),) + NB)
        old = table.get(f)
        if old is not None and old != kids:
            raise RuntimeError("fine labels do not determine their images")
        table[f] = kids
    missing = {k for v in table.values() for k in v} - set(table)
    if missing:
        raise RuntimeError(f"{len(missing)} child labels never sampled as parents")

    def act_fine(g, f):
        # (g.T) at g.z: tile g.t(z); at 2 g.z + q it is g.t(2z + g^-1 q)
        gi = g.inverse()
        return (act(g, f[0]),) + tuple(act(g, f[1 + _B1.index(gi.act(q))]) for q in _B1)

    return {"table": table, "act": act_fine}


def decorated_system(name: str, flip: bool = False, **kw) -> dict:
    """Build the 84-label line-decorated table as plain data.

    Returns a dict with the label names (base, orientation, chirality), the
    pseudo-inflation table in terms of label indices and the fine recoding.
    """
    from .lattice import d6_elements, D6Element

    res = build_fine_system(lambda z: llama_tile(z, flip), llama_act, **kw)
    table, act_fine = res["table"], res["act"]
    labels = sorted(table)
    # sanity: D6 must act on the table by automorphisms
    for g in d6_elements():
        for f in labels:
            gf = act_fine(g, f)
            if gf not in table:
                raise RuntimeError("D6 does not preserve the label set")
            kids = table[f]
            gk = table[gf]
            if act_fine(g, kids[0]) != gk[0]:
                raise RuntimeError("D6 does not commute with the centre child")
            for k in range(6):
                if act_fine(g, kids[1 + k]) != gk[1 + g.act_direction(k)]:
                    raise RuntimeError("D6 does not commute with the ring children")
    # orbits, each with the representative of orientation 0 and positive chirality
    reps = sorted(f for f in labels if f[0] == (0, 0))
    seeds = {f for f in labels if table[f][0] == f}
    preferred = [r for r in reps if any(act_fine(g, r) in seeds for g in d6_elements())]
    if len(preferred) != 1:
        raise RuntimeError("seeds do not form a single orbit")
    others = [r for r in reps if r != preferred[0]]
    order = preferred + others
    names = {}
    for base, r in enumerate(order):
        for g in d6_elements():
            f = act_fine(g, r)
            p, chi = f[0]
            names[f] = (base, p, chi)
    if len(names) != len(labels):
        raise RuntimeError("D6 does not act freely")
    canon = sorted(names.values())
    index = {names[f]: i for i, f in enumerate(sorted(labels, key=lambda f: names[f]))}
    fine_of = {index[names[f]]: f for f in labels}
    pseudo = {}
    for f in labels:
        pseudo[index[names[f]]] = [index[names[c]] for c in table[f]]
    return {"name": name, "labels": canon, "pseudo": [pseudo[i] for i in range(len(canon))],
            "fine": fine_of, "n_orbits": len(order), "rotation": D6Element(1, False)}
