"""The four systems and the local derivations between them.

All maps here are sliding block maps on the hexagon packing: the output at
q depends only on the labels in a ball of fixed radius around q.  They are
evaluated only where that ball lies inside the input patch.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .engine import (Patch, SubstitutionSystem, LabelError, load_system,
                     inflate, pseudo_inflate)
from .lattice import NB, D6Element, ball, d6_elements
from .twoadic import arrow_head_ccw

WHITE, GREY = 0, 1


def get_system(name: str) -> SubstitutionSystem:
    return load_system(name)


def _cells(patch) -> dict:
    return patch.cells if isinstance(patch, Patch) else patch


@dataclass
class FactorMap:
    source: str
    target: str
    radius: int
    rule: Callable  # tuple of source labels in ball order -> target value

    def __call__(self, patch) -> dict:
        cells = _cells(patch)
        offs = ball(self.radius)
        out = {}
        for q in cells:
            try:
                nb = tuple(cells[(q[0] + d[0], q[1] + d[1])] for d in offs)
            except KeyError:
                continue
            out[q] = self.rule(nb)
        return out


def _decorated(patch, name: str | None):
    if isinstance(patch, Patch):
        s = load_system(patch.system)
    else:
        s = load_system(name or "taylor")
    if s.kind != "decorated":
        raise LabelError(f"{s.name} is not a decorated system")
    return s, _cells(patch)


def _to_target(s: SubstitutionSystem, target: SubstitutionSystem, key) -> list:
    return [target.label_index(key(lab)) for lab in s.labels]


def arrowed_table(s: SubstitutionSystem) -> list:
    a = load_system("arrowed")
    return _to_target(s, a, lambda lab: f"A:{lab.orientation}:+")


def halfhex_table(s: SubstitutionSystem) -> list:
    h = load_system("halfhex")
    if s.kind == "arrowed" or s.kind == "decorated":
        return _to_target(s, h, lambda lab: f"H:{lab.orientation % 3}:+")
    if s.kind == "halfhex":
        return list(range(len(s)))
    raise LabelError(s.name)


def derive_arrowed_halfhex(patch, system: str | None = None) -> Patch:
    """Keep the arrow pattern of each decorated hexagon (radius 0)."""
    s, cells = _decorated(patch, system)
    tab = arrowed_table(s)
    return Patch("arrowed", {q: tab[l] for q, l in cells.items()})


def derive_halfhex(patch, system: str | None = None) -> Patch:
    """Cut each hexagon along the diagonal parallel to its co-oriented edge pair."""
    if isinstance(patch, Patch) and load_system(patch.system).kind == "arrowed":
        s, cells = load_system("arrowed"), patch.cells
    else:
        s, cells = _decorated(patch, system)
    tab = halfhex_table(s)
    return Patch("halfhex", {q: tab[l] for q, l in cells.items()})


def co_oriented_pairs(p: int) -> list:
    """Parallel edge pairs (k, k+3) of an arrowed hexagon whose arrows point the same way."""
    out = []
    for k in range(3):
        # edges k and k+3 are traversed in opposite senses by the ccw boundary walk,
        # so equal direction means opposite ccw flags
        if arrow_head_ccw(p, k) != arrow_head_ccw(p, k + 3):
            out.append(k)
    return out


def halfhex_diagonal(p: int) -> int:
    """Direction class (mod 3) of the half-hex diagonal, parallel to the co-oriented pair."""
    pairs = co_oriented_pairs(p)
    if len(pairs) != 1:
        raise ValueError(f"arrowed hexagon {p} has {len(pairs)} co-oriented pairs")
    return pairs[0]


def parity(patch, system: str | None = None) -> dict:
    """Chirality colouring: white for positive, grey for negative chirality."""
    s, cells = _decorated(patch, system)
    col = [WHITE if lab.chirality else GREY for lab in s.labels]
    return {q: col[l] for q, l in cells.items()}


def colour_swap(par: dict) -> dict:
    return {q: 1 - c for q, c in par.items()}


def transform_parity(g: D6Element, par: dict) -> dict:
    """g acting on a parity pattern; a reflection also swaps the chiralities."""
    sw = 1 if g.reflected else 0
    return {g.act(q): c ^ sw for q, c in par.items()}


# ------------------------------------------------------------ checks

def intertwines(deriv: Callable, s: SubstitutionSystem, target: SubstitutionSystem, k: int,
                mode: str = "sector") -> bool:
    """F(sigma^k(seed)) == sigma^k(F(seed)) for every seed of s."""
    step = inflate if mode == "sector" else pseudo_inflate
    for seed in s.seeds:
        p = Patch(s.name, {(0, 0): seed})
        lhs = deriv(step(s, p, k))
        rhs = step(target, deriv(p), k)
        if lhs.cells != rhs.cells:
            return False
    return True


def commutes_with_translation(fmap: FactorMap, patch, v) -> bool:
    cells = _cells(patch)
    moved = {(q[0] + v[0], q[1] + v[1]): l for q, l in cells.items()}
    a = fmap(moved)
    b = {(q[0] + v[0], q[1] + v[1]): x for q, x in fmap(cells).items()}
    return a == b


def parity_symmetric(patch: Patch) -> bool:
    """parity(g.P) == g.parity(P) for all of D6."""
    s = load_system(patch.system)
    base = parity(patch)
    for g in d6_elements():
        if parity(patch.transform(g, s)) != transform_parity(g, base):
            return False
    return True


def almost_colour_reflection(par: dict, g: D6Element) -> dict:
    """Cells where the reflection g composed with colour swap fails.

    Returns the failing cells and their lattice distance to the mirror line
    (the fixed cells of g have distance 0).
    """
    if not g.reflected:
        raise ValueError("g must be a reflection")
    bad = []
    for q, c in par.items():
        r = g.act(q)
        if r in par and par[r] != 1 - c:
            bad.append(q)
    dist = {}
    for q in bad:
        r = g.act(q)
        # q and g.q are symmetric about the line; half their distance measures the offset
        d = (q[0] - r[0], q[1] - r[1])
        dist[q] = max(abs(d[0]), abs(d[1]), abs(d[0] + d[1]))
    return {"cells": sorted(bad), "offset": dist, "max_offset": max(dist.values(), default=0)}


# ----------------------------------------------------------- double hexagon

def vertex_key(q, j: int) -> tuple:
    """Vertex j of hexagon q as an integer point of 3*Gamma."""
    a, b = NB[(j - 1) % 6], NB[j]
    return (3 * q[0] + a[0] + b[0], 3 * q[1] + a[1] + b[1])


def double_hexagon(patch, system: str = "penrose") -> dict:
    """Replace each hexagon by a large arrowed hexagon with an inscribed oriented hexagon.

    Small hexagons centred at the vertices of the large ones take their
    orientation from the three corner flags meeting there: one flag differs
    from the other two, and the direction of its tile together with its value
    fixes one of six orientations.  Vertices without all three tiles are
    marked incomplete (None).
    """
    from .rules import decoration, llama_flag

    s, cells = _decorated(patch, system)
    table = decoration(s.name)["flags"]
    large, inner, vert = {}, {}, {}
    for q, l in cells.items():
        lab = s.labels[l]
        large[q] = lab.orientation
        inner[q] = (lab.orientation + (0 if lab.chirality else 3)) % 6
    for q in cells:
        for k in range(6):
            key = vertex_key(q, k)
            if key in vert and vert[key] is not None:
                continue
            a = NB[(k - 1) % 6]
            qa = (q[0] + a[0], q[1] + a[1])
            qb = (q[0] + NB[k][0], q[1] + NB[k][1])
            if qa not in cells or qb not in cells:
                vert.setdefault(key, None)
                continue
            tiles = ((q, k, (k + 3) % 6), (qa, (k + 2) % 6, (k + 5) % 6), (qb, (k + 4) % 6, (k + 1) % 6))
            flags = []
            for r, v, direction in tiles:
                lab = s.labels[cells[r]]
                flags.append((llama_flag((lab.orientation, lab.chirality), v, table), direction))
            vals = [f for f, _ in flags]
            odd = [(f, d) for f, d in flags if vals.count(f) == 1]
            if len(odd) != 1:
                vert[key] = None  # threefold vertex: cannot occur in legal patches
                continue
            f, d = odd[0]
            vert[key] = (d + 3 * f) % 6
    return {"system": s.name, "large": large, "inner": inner, "vertex": vert}


def all_hexagons_arrowed(dh: dict) -> bool:
    """Every completed hexagon, on both scales, has exactly one co-oriented parallel pair."""
    vals = list(dh["large"].values()) + list(dh["inner"].values()) + \
        [v for v in dh["vertex"].values() if v is not None]
    return all(len(co_oriented_pairs(o)) == 1 for o in vals)


def underive_double_hexagon(dh: dict, atlas=None) -> dict:
    """Recover the decorated hexagons on the interior.

    Orientation and chirality are read off the large and inner hexagons;
    the remaining decoration is reconstructed from order-3 parity coronae.
    """
    from .recon import reconstruct

    par = {}
    for q, p in dh["large"].items():
        o = dh["inner"][q]
        par[q] = WHITE if o == p else GREY
    rec = reconstruct(par, dh["system"], atlas=atlas)
    s = load_system(dh["system"])
    for q, l in rec.items():
        if s.labels[l].orientation != dh["large"][q]:
            raise ValueError(f"reconstruction disagrees with the large hexagon at {q}")
    return rec
