"""Labelled lattice (pseudo-)inflations with linear multiplier 2.

A label is stored as a small integer index into the system alphabet.  The
pseudo inflation sends the tile at x to seven tiles: 2x and the ring 2x+NB[k].
Ring cells are shared between the images of two neighbours, so a pseudo
inflation must agree on them.  Keeping only the four sector positions
(centre plus NB[1], NB[3], NB[5]) gives an ordinary stone inflation whose
supertiles fill a 120 degree wedge when iterated on a single seed.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Iterable, NamedTuple

import numpy as np

from .lattice import NB, D6Element, ball, d6_elements, hex_norm

OFFSETS = ((0, 0),) + NB
SECTOR_POSITIONS = ((0, 0), (0, 1), (-1, 0), (1, -1))
_DIGIT_OF_CLASS = {(d[0] % 2, d[1] % 2): d for d in SECTOR_POSITIONS}


class TileLabel(NamedTuple):
    base: str
    orientation: int
    chirality: bool  # True for the positive (or only) chirality

    def __str__(self) -> str:
        return f"{self.base}:{self.orientation}:{'+' if self.chirality else '-'}"

    @staticmethod
    def parse(s: str) -> "TileLabel":
        try:
            base, o, c = s.split(":")
            if c not in "+-" or len(c) != 1:
                raise ValueError
            return TileLabel(base, int(o), c == "+")
        except ValueError:
            raise LabelError(f"malformed label {s!r}, expected base:orientation:chirality") from None


class LabelError(ValueError):
    """A label outside the alphabet of a system."""


class ConsistencyError(ValueError):
    """Overlapping pseudo-inflation images disagree."""


def sector_split(q):
    """q = 2*parent + digit with digit one of the four sector positions."""
    d = _DIGIT_OF_CLASS[(q[0] % 2, q[1] % 2)]
    return ((q[0] - d[0]) // 2, (q[1] - d[1]) // 2), d


@dataclass(eq=False)
class SubstitutionSystem:
    name: str
    kind: str  # halfhex | arrowed | decorated
    labels: list[TileLabel]
    pseudo: np.ndarray  # (n, 7) child indices for OFFSETS
    bases: list[str] = field(default_factory=list)
    index: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.index = {lab: i for i, lab in enumerate(self.labels)}
        self._by_str = {str(lab): i for i, lab in enumerate(self.labels)}
        self.pseudo = np.asarray(self.pseudo, dtype=np.int32)
        self.sector = self.pseudo[:, [0, 2, 4, 6]]
        self._perm: dict = {}

    # ------------------------------------------------------------ labels
    def __len__(self) -> int:
        return len(self.labels)

    def label_index(self, lab) -> int:
        if isinstance(lab, (int, np.integer)):
            if 0 <= lab < len(self.labels):
                return int(lab)
            raise LabelError(f"label index {lab} out of range for {self.name}")
        if isinstance(lab, str):
            i = self._by_str.get(lab)
        else:
            i = self.index.get(TileLabel(*lab))
        if i is None:
            raise LabelError(f"unknown label {lab!s} for system {self.name}")
        return i

    def label_str(self, i: int) -> str:
        return str(self.labels[i])

    def child(self, i: int, offset) -> int:
        return int(self.pseudo[i, OFFSETS.index(tuple(offset))])

    @property
    def seeds(self) -> list[int]:
        return [i for i in range(len(self)) if self.pseudo[i, 0] == i]

    @property
    def preferred_base(self) -> str:
        return self.labels[self.seeds[0]].base

    # -------------------------------------------------------------- D6
    def act_label(self, g: D6Element, i: int) -> int:
        return int(self.permutation(g)[i])

    def permutation(self, g: D6Element) -> np.ndarray:
        key = (g.rotation, g.reflected)
        perm = self._perm.get(key)
        if perm is None:
            perm = np.array([self.label_index(_act_name(self.kind, g, lab)) for lab in self.labels],
                            dtype=np.int32)
            self._perm[key] = perm
        return perm

    def substitution_matrix(self) -> np.ndarray:
        """M[i, j] = number of tiles j in the sector image of i."""
        n = len(self)
        m = np.zeros((n, n), dtype=np.int64)
        for i in range(n):
            for j in self.sector[i]:
                m[i, j] += 1
        return m


def _act_name(kind: str, g: D6Element, lab: TileLabel) -> TileLabel:
    o = lab.orientation
    if kind == "halfhex":
        return TileLabel(lab.base, (g.rotation + (-o if g.reflected else o)) % 3, lab.chirality)
    chi = lab.chirality
    if g.reflected:
        o = -o
        if kind == "decorated":
            chi = not chi
    return TileLabel(lab.base, (o + g.rotation) % 6, chi)


# --------------------------------------------------------------- loading

def system_from_json(d: dict) -> SubstitutionSystem:
    labels = [TileLabel(a["base"], int(a["orientation"]), a["chirality"] == "+")
              for a in d["alphabet"]]
    by = {str(lab): i for i, lab in enumerate(labels)}
    if [tuple(p) for p in d.get("sector_positions", SECTOR_POSITIONS)] != list(SECTOR_POSITIONS):
        raise ValueError("unsupported sector positions")
    pseudo = np.zeros((len(labels), 7), dtype=np.int32)
    for key, img in d["pseudo_rule"].items():
        if len(img) != 7:
            raise ValueError(f"pseudo image of {key} must have 7 cells")
        row = by[key]
        for a, b, lab in img:
            pseudo[row, OFFSETS.index((a, b))] = by[lab]
    return SubstitutionSystem(d["name"], d.get("kind", "decorated"), labels, pseudo,
                              list(d.get("bases", [])))


def system_to_json(s: SubstitutionSystem) -> dict:
    return {
        "name": s.name, "kind": s.kind, "bases": s.bases,
        "alphabet": [{"base": l.base, "orientation": l.orientation,
                      "chirality": "+" if l.chirality else "-"} for l in s.labels],
        "pseudo_rule": {str(l): [[o[0], o[1], str(s.labels[c])] for o, c in zip(OFFSETS, s.pseudo[i])]
                        for i, l in enumerate(s.labels)},
        "sector_positions": [list(p) for p in SECTOR_POSITIONS],
    }


@lru_cache(maxsize=None)
def _asset() -> dict:
    txt = resources.files("hexhull").joinpath("data/rules.json").read_text()
    return json.loads(txt)


SYSTEM_NAMES = ("halfhex", "arrowed", "penrose", "taylor")
_ALIASES = {"hh": "halfhex", "half-hex": "halfhex", "ahh": "arrowed", "arrowed-halfhex": "arrowed",
            "arrowed_halfhex": "arrowed", "pen": "penrose"}


def load_system(name: str) -> SubstitutionSystem:
    key = _ALIASES.get(name.lower(), name.lower())
    if key not in SYSTEM_NAMES:
        raise KeyError(f"unknown system {name!r}; known: {', '.join(SYSTEM_NAMES)}")
    return _load(key)


@lru_cache(maxsize=None)
def _load(key: str) -> SubstitutionSystem:
    return system_from_json(_asset()["systems"][key])


# ---------------------------------------------------------------- patches

@dataclass
class Patch:
    system: str
    cells: dict  # (a, b) -> label index

    def __len__(self) -> int:
        return len(self.cells)

    def to_json(self, sysobj: SubstitutionSystem | None = None) -> dict:
        s = sysobj or load_system(self.system)
        return {"system": s.name,
                "cells": [[a, b, s.label_str(i)] for (a, b), i in sorted(self.cells.items())]}

    @staticmethod
    def from_json(d: dict) -> "Patch":
        s = load_system(d["system"])
        cells = {}
        for a, b, lab in d["cells"]:
            cells[(int(a), int(b))] = s.label_index(lab)
        return Patch(s.name, cells)

    def translate(self, v) -> "Patch":
        return Patch(self.system, {(p[0] + v[0], p[1] + v[1]): l for p, l in self.cells.items()})

    def transform(self, g: D6Element, sysobj: SubstitutionSystem | None = None) -> "Patch":
        s = sysobj or load_system(self.system)
        perm = s.permutation(g)
        return Patch(self.system, {g.act(p): int(perm[l]) for p, l in self.cells.items()})


def _check_labels(s: SubstitutionSystem, cells: dict):
    n = len(s)
    for p, l in cells.items():
        if not (0 <= l < n):
            raise LabelError(f"unknown label {l} at {p} for system {s.name}")


def inflate(s: SubstitutionSystem, patch: Patch | dict, m: int = 1) -> Patch:
    """m-fold sector inflation; each cell becomes exactly 4**m cells."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    cells = patch.cells if isinstance(patch, Patch) else patch
    _check_labels(s, cells)
    sec = s.sector
    for _ in range(m):
        out = {}
        for (a, b), l in cells.items():
            row = sec[l]
            for j, d in enumerate(SECTOR_POSITIONS):
                out[(2 * a + d[0], 2 * b + d[1])] = int(row[j])
        cells = out
    return Patch(s.name, cells)


def supertile_parent(q, m: int = 1):
    """Sector ancestor of q after m deflation steps, and the digit path (low first)."""
    path = []
    for _ in range(m):
        q, d = sector_split(q)
        path.append(d)
    return q, path


def pseudo_inflate(s: SubstitutionSystem, patch: Patch | dict, m: int = 1) -> Patch:
    """m-fold pseudo inflation; raises ConsistencyError on disagreeing overlaps."""
    cells = patch.cells if isinstance(patch, Patch) else patch
    _check_labels(s, cells)
    ps = s.pseudo
    for _ in range(m):
        out: dict = {}
        for (a, b), l in cells.items():
            row = ps[l]
            for j, d in enumerate(OFFSETS):
                q = (2 * a + d[0], 2 * b + d[1])
                v = int(row[j])
                old = out.get(q)
                if old is not None and old != v:
                    raise ConsistencyError(f"conflict at {q}: {s.label_str(old)} vs {s.label_str(v)}")
                out[q] = v
        cells = out
    return Patch(s.name, cells)


def seed_index(s: SubstitutionSystem, seed) -> int:
    valid = ", ".join(s.label_str(j) for j in s.seeds)
    try:
        i = s.label_index(seed)
    except (LabelError, ValueError) as e:
        raise LabelError(f"{e}; valid seeds: {valid}") from None
    if s.pseudo[i, 0] != i:
        raise LabelError(f"{s.label_str(i)} does not reproduce itself; valid seeds: {valid}")
    return i


def fixed_point_patch(s: SubstitutionSystem, seed, k: int, mode: str = "sector") -> Patch:
    """sigma^k(seed) about the origin.  Successive k are nested."""
    i = seed_index(s, seed)
    start = Patch(s.name, {(0, 0): i})
    if mode == "sector":
        return inflate(s, start, k)
    if mode == "pseudo":
        return pseudo_inflate(s, start, k)
    raise ValueError(f"unknown mode {mode!r}")


# ------------------------------------------------------------- array form

class HexGrid:
    """Dense storage of a patch inside a hexagonal ball, -1 marking empty cells."""

    def __init__(self, radius: int, data: np.ndarray | None = None):
        self.radius = radius
        n = 2 * radius + 1
        self.data = np.full((n, n), -1, dtype=np.int32) if data is None else data

    @property
    def mask(self) -> np.ndarray:
        return self.data >= 0

    def get(self, p, default=-1):
        a, b = p[0] + self.radius, p[1] + self.radius
        n = self.data.shape[0]
        if 0 <= a < n and 0 <= b < n:
            return int(self.data[a, b])
        return default

    def cells(self) -> dict:
        r = self.radius
        idx = np.argwhere(self.data >= 0)
        return {(int(a) - r, int(b) - r): int(self.data[a, b]) for a, b in idx}

    @staticmethod
    def from_cells(cells: dict, radius: int | None = None) -> "HexGrid":
        if radius is None:
            radius = max((max(abs(a), abs(b)) for a, b in cells), default=0)
        g = HexGrid(radius)
        for (a, b), l in cells.items():
            g.data[a + radius, b + radius] = l
        return g

    def restrict_ball(self, r: int) -> "HexGrid":
        out = HexGrid(r)
        a, b = np.mgrid[-r:r + 1, -r:r + 1]
        inside = np.maximum(np.maximum(np.abs(a), np.abs(b)), np.abs(a + b)) <= r
        o = self.radius
        sub = self.data[o - r:o + r + 1, o - r:o + r + 1]
        out.data = np.where(inside, sub, -1).astype(np.int32)
        return out

    def shifted(self, d) -> np.ndarray:
        """Array whose entry at p is the value at p + d (-1 outside)."""
        n = self.data.shape[0]
        out = np.full_like(self.data, -1)
        da, db = d
        sa = slice(max(0, -da), min(n, n - da))
        sb = slice(max(0, -db), min(n, n - db))
        ta = slice(max(0, da), min(n, n + da))
        tb = slice(max(0, db), min(n, n + db))
        out[sa, sb] = self.data[ta, tb]
        return out


def pseudo_inflate_grid(s: SubstitutionSystem, g: HexGrid) -> HexGrid:
    r2 = 2 * g.radius + 1
    out = HexGrid(r2)
    idx = np.argwhere(g.data >= 0)
    labs = g.data[idx[:, 0], idx[:, 1]]
    a = idx[:, 0] - g.radius
    b = idx[:, 1] - g.radius
    for j, d in enumerate(OFFSETS):
        qa = 2 * a + d[0] + r2
        qb = 2 * b + d[1] + r2
        v = s.pseudo[labs, j]
        old = out.data[qa, qb]
        bad = (old >= 0) & (old != v)
        if bad.any():
            k = int(np.argmax(bad))
            raise ConsistencyError(f"conflict at {(int(qa[k]) - r2, int(qb[k]) - r2)}")
        out.data[qa, qb] = v
    return out


@lru_cache(maxsize=64)
def _fixed_grid_cached(name: str, seed: int, k: int) -> HexGrid:
    s = load_system(name)
    g = HexGrid(0)
    g.data[0, 0] = seed
    for _ in range(k):
        g = pseudo_inflate_grid(s, g)
    return g


def fixed_point_grid(s: SubstitutionSystem, seed, k: int) -> HexGrid:
    """Pseudo fixed-point patch sigma^k(seed): the full ball of radius 2**k - 1."""
    i = seed_index(s, seed)
    if s is load_system(s.name):
        g = _fixed_grid_cached(s.name, i, k)
        return HexGrid(g.radius, g.data.copy())
    g = HexGrid(0)
    g.data[0, 0] = i
    for _ in range(k):
        g = pseudo_inflate_grid(s, g)
    return g


def ball_codes(g: HexGrid, r: int, values: np.ndarray | None = None, base: int | None = None):
    """Encode the radius-r ball around every cell as rows of a 2D array.

    Returns (codes, centres) where codes[i] lists the (optionally mapped)
    labels of the ball around centres[i], in lattice.ball order; only cells
    whose whole ball lies in the patch are returned.
    """
    data = g.data if values is None else np.where(g.data >= 0, values[np.maximum(g.data, 0)], -1)
    h = HexGrid(g.radius, data)
    offs = ball(r)
    stack = np.stack([h.shifted(d) for d in offs], axis=-1)
    full = (stack >= 0).all(axis=-1)
    idx = np.argwhere(full)
    codes = stack[idx[:, 0], idx[:, 1]]
    centres = idx - g.radius
    return codes, centres


# ------------------------------------------------------------------ atlas

def _atlas_b1(s: SubstitutionSystem) -> set:
    b1 = ball(1)
    b2 = ball(2)
    found: set = set()
    todo = []
    for seed in s.seeds:
        p = pseudo_inflate(s, {(0, 0): seed}, 2).cells
        for q in b2:
            t = tuple(p[(q[0] + d[0], q[1] + d[1])] for d in b1)
            if t not in found:
                found.add(t)
                todo.append(t)
    while todo:
        t = todo.pop()
        img = pseudo_inflate(s, dict(zip(b1, t))).cells
        for q in b2:
            u = tuple(img[(q[0] + d[0], q[1] + d[1])] for d in b1)
            if u not in found:
                found.add(u)
                todo.append(u)
    return found


_ATLAS: dict = {}


def legal_patches(s: SubstitutionSystem, radius: int) -> set:
    """All radius-`radius` ball patches of the hull, as label tuples in ball order.

    Radius 1 is the closure of the patches around the seeds under pseudo
    inflation; larger radii are cut out of pseudo images of smaller balls.
    """
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    key = (id(s), s.name, radius)
    hit = _ATLAS.get(key)
    if hit is not None and hit[0] is s:
        return hit[1]
    if radius == 0:
        res = {(t[ball(1).index((0, 0))],) for t in legal_patches(s, 1)}
    elif radius == 1:
        res = _atlas_b1(s)
    else:
        rp = (radius + 1) // 2
        sub = legal_patches(s, rp)
        bp = ball(rp)
        br = ball(radius)
        res = set()
        for t in sub:
            img = pseudo_inflate(s, dict(zip(bp, t))).cells
            for q in ball(1):
                try:
                    res.add(tuple(img[(q[0] + d[0], q[1] + d[1])] for d in br))
                except KeyError:
                    pass
    _ATLAS[key] = (s, res)
    return res


def scanned_patches(s: SubstitutionSystem, radius: int, depth: int) -> set:
    """Radius-r patches seen inside the depth-`depth` pseudo fixed points of all seeds."""
    out: set = set()
    for seed in s.seeds:
        g = fixed_point_grid(s, seed, depth)
        codes, _ = ball_codes(g, radius)
        out.update(map(tuple, codes.tolist()))
    return out


def adjacent_pairs(s: SubstitutionSystem) -> set:
    """Legal (L, k, M): label M sits at NB[k] from label L."""
    b1 = ball(1)
    c = b1.index((0, 0))
    out = set()
    for t in legal_patches(s, 1):
        for k, d in enumerate(NB):
            out.add((t[c], k, t[b1.index(d)]))
    return out


# ------------------------------------------------------------ verification

def verify_pseudo_consistency(s: SubstitutionSystem, pairs: Iterable | None = None) -> dict:
    """Check that images of legal neighbours agree on their shared ring cell."""
    if pairs is None:
        pairs = adjacent_pairs(s)
    conflicts = []
    ps = s.pseudo
    for l, k, m in sorted(pairs):
        a = int(ps[l, 1 + k])
        b = int(ps[m, 1 + (k + 3) % 6])
        if a != b:
            conflicts.append({"left": s.label_str(l), "direction": k, "right": s.label_str(m),
                              "left_image": s.label_str(a), "right_image": s.label_str(b)})
    return {"system": s.name, "pairs_checked": len(set(pairs)), "conflicts": conflicts,
            "ok": not conflicts}


def all_pairs_closure(s: SubstitutionSystem) -> set:
    """Adjacent pairs reachable from the seeds without trusting consistency.

    Used for mutated systems, where the atlas closure itself may fail.
    """
    found = set()
    todo = []
    for seed in s.seeds:
        img = {(d[0], d[1]): int(s.pseudo[seed, i]) for i, d in enumerate(OFFSETS)}
        for p, l in img.items():
            for k, d in enumerate(NB):
                q = (p[0] + d[0], p[1] + d[1])
                if q in img:
                    t = (l, k, img[q])
                    if t not in found:
                        found.add(t)
                        todo.append(t)
    while todo:
        l, k, m = todo.pop()
        # images of l at 0 and m at NB[k], overlapping cell taken from l
        img = {}
        for i, d in enumerate(OFFSETS):
            img[d] = int(s.pseudo[l, i])
        e = (2 * NB[k][0], 2 * NB[k][1])
        for i, d in enumerate(OFFSETS):
            q = (e[0] + d[0], e[1] + d[1])
            img.setdefault(q, int(s.pseudo[m, i]))
        for p, a in img.items():
            for j, d in enumerate(NB):
                q = (p[0] + d[0], p[1] + d[1])
                if q in img:
                    t = (a, j, img[q])
                    if t not in found:
                        found.add(t)
                        todo.append(t)
    return found


def _norm2(a: int, b: int) -> int:
    return a * a + a * b + b * b


def supertile_cells(m: int) -> list:
    """Cells whose closed hexagon meets the Voronoi cell of 0 in the lattice 2**m Z^2.

    This is the geometric order-m supertile of the tile at the origin;
    cells on the boundary are shared with the neighbouring supertiles.
    """
    s = 1 << m
    centres = [(s * d[0], s * d[1]) for d in NB]
    return [q for q in ball(s)
            if all(_norm2(*q) <= _norm2(q[0] - c[0], q[1] - c[1]) for c in centres)]


def supertile_corona(m: int) -> list:
    reg = supertile_cells(m)
    rs = set(reg)
    return sorted({(p[0] + d[0], p[1] + d[1]) for p in reg for d in NB} - rs)


def border_forcing_order(s: SubstitutionSystem, max_order: int = 4) -> int | None:
    """Smallest m <= max_order such that each order-m supertile forces its 1-corona.

    Occurrences are the pseudo images of every legal radius-1 patch, which
    covers all neighbourhoods an order-m supertile can have in the hull.
    """
    b1 = ball(1)
    centre = b1.index((0, 0))
    atlas = legal_patches(s, 1)
    for m in range(1, max_order + 1):
        cells = supertile_cells(m) + supertile_corona(m)
        seen: dict = {}
        forced = True
        for t in atlas:
            img = pseudo_inflate(s, dict(zip(b1, t)), m).cells
            v = tuple(img[q] for q in cells)
            if seen.setdefault(t[centre], v) != v:
                forced = False
                break
        if forced:
            return m
    return None


def verify_border_forcing(s: SubstitutionSystem, order: int) -> bool:
    if order < 1:
        raise ValueError("order must be at least 1")
    return border_forcing_order(s, order) is not None


def check_d6_covariance(s: SubstitutionSystem) -> list:
    """Labels whose pseudo image is not carried along by the D6 action."""
    bad = []
    for g in d6_elements():
        perm = s.permutation(g)
        for i in range(len(s)):
            gi = perm[i]
            if perm[s.pseudo[i, 0]] != s.pseudo[gi, 0]:
                bad.append((str(g), s.label_str(i), 0))
            for k in range(6):
                if perm[s.pseudo[i, 1 + k]] != s.pseudo[gi, 1 + g.act_direction(k)]:
                    bad.append((str(g), s.label_str(i), 1 + k))
    return bad


def lattice_basis(vectors) -> tuple:
    """Hermite basis ((a, b), (0, c)) of the sublattice of Z^2 spanned by vectors."""
    rows = [list(v) for v in vectors if v[0] or v[1]]
    a = b = 0
    c = 0
    # gcd on the first coordinate, carrying the second
    for x, y in rows:
        while x:
            if a == 0:
                a, b, x, y = x, y, 0, 0
                break
            q = a // x
            a, b, x, y = x, y, a - q * x, b - q * y
        if y:
            c = abs(y) if c == 0 else _gcd(c, y)
    if a < 0:
        a, b = -a, -b
    if c:
        b %= c
    return (a, b), (0, c)


def _gcd(x: int, y: int) -> int:
    while y:
        x, y = y, x % y
    return abs(x)


def in_lattice(v, basis) -> bool:
    (a, b), (_, c) = basis
    if a == 0:
        return v[0] == 0 and (v[1] == 0 if c == 0 else v[1] % c == 0)
    if v[0] % a:
        return False
    y = v[1] - (v[0] // a) * b
    return y == 0 if c == 0 else y % c == 0


def preferred_sublattice(s: SubstitutionSystem, k: int = 5) -> dict:
    """Positions of the preferred base in a large patch: spanned sublattice and its index.

    `full` says whether every patch cell of that coset carries the preferred base.
    """
    g = fixed_point_grid(s, s.seeds[0], k)
    cells = g.cells()
    pref = sorted(q for q, l in cells.items() if s.labels[l].base == s.preferred_base)
    p0 = pref[0]
    basis = lattice_basis([(q[0] - p0[0], q[1] - p0[1]) for q in pref])
    index = basis[0][0] * basis[1][1]
    coset = [q for q in cells if in_lattice((q[0] - p0[0], q[1] - p0[1]), basis)]
    return {"index": index, "basis": basis, "full": len(coset) == len(pref), "count": len(pref)}


def hex_radius_of(cells: dict) -> int:
    return max((hex_norm(p) for p in cells), default=0)
