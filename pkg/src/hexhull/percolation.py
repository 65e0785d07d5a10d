"""Clusters of the two colours in hexagonal parity patterns.

Two hexagons are connected when they share an edge.  Cluster diameters are
graph diameters inside the cluster.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .engine import fixed_point_grid, load_system
from .lattice import NB
from .recon import parity_values


class UnionFind:
    """Union by size, ties broken towards the smaller element, path halving."""

    def __init__(self, items):
        self.parent = {x: x for x in items}
        self.size = {x: 1 for x in items}

    def find(self, x):
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        if (self.size[ra], rb) < (self.size[rb], ra):
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return ra


def _neighbours(q):
    return [(q[0] + d[0], q[1] + d[1]) for d in NB]


def components(par: dict) -> list:
    """Clusters as sorted cell lists, ordered by (colour, first cell)."""
    uf = UnionFind(sorted(par))
    for q, c in par.items():
        for r in _neighbours(q)[:3]:
            if par.get(r) == c:
                uf.union(q, r)
    groups: dict = {}
    for q in sorted(par):
        groups.setdefault(uf.find(q), []).append(q)
    out = [sorted(g) for g in groups.values()]
    out.sort(key=lambda g: (par[g[0]], g[0]))
    return out


def _bfs(start, cells: set):
    dist = {start: 0}
    dq = deque([start])
    while dq:
        x = dq.popleft()
        for y in _neighbours(x):
            if y in cells and y not in dist:
                dist[y] = dist[x] + 1
                dq.append(y)
    return dist


def graph_diameter(cells) -> int:
    """Exact diameter of a connected cell set (iFUB with a double-sweep start)."""
    cells = set(cells)
    if len(cells) <= 1:
        return 0
    a = min(cells)
    da = _bfs(a, cells)
    b = max(da, key=lambda x: (da[x], x))
    db = _bfs(b, cells)
    c = max(db, key=lambda x: (db[x], x))
    dc = _bfs(c, cells)
    # middle of the b-c path as root
    ecc = db[c]
    mid = min((x for x in cells if db[x] + dc[x] == ecc and db[x] == ecc // 2), default=b)
    dm = _bfs(mid, cells)
    levels: dict = {}
    for x, d in dm.items():
        levels.setdefault(d, []).append(x)
    lb = max(ecc, max(dm.values()))
    i = max(levels)
    while i > 0 and lb <= 2 * (i - 1):
        i -= 1
    i = max(levels)
    ub = 2 * i
    while ub > lb:
        bi = max(max(_bfs(x, cells).values()) for x in levels[i])
        lb = max(lb, bi)
        if lb > 2 * (i - 1):
            break
        i -= 1
        ub = 2 * i
    return lb


def boundary_cells(par: dict) -> set:
    return {q for q in par if any(r not in par for r in _neighbours(q))}


def canonical_shape(cells) -> tuple:
    m = min(cells)
    return tuple(sorted((q[0] - m[0], q[1] - m[1]) for q in cells))


@dataclass
class ColourReport:
    colour: int
    cluster_count: int
    sizes: dict  # size -> multiplicity
    max_size: int
    max_diameter: int
    islands: list = field(default_factory=list)  # (shape, count)


@dataclass
class ClusterReport:
    cells: int
    colours: dict  # colour -> ColourReport

    def to_json(self) -> dict:
        out = {"cells": self.cells, "colours": {}}
        for c, r in sorted(self.colours.items()):
            out["colours"][str(c)] = {
                "cluster_count": r.cluster_count,
                "sizes": {str(k): v for k, v in sorted(r.sizes.items())},
                "max_size": r.max_size, "max_diameter": r.max_diameter,
                "islands": [{"shape": [list(p) for p in sh], "size": len(sh), "count": n}
                            for sh, n in r.islands]}
        return out


def clusters(par: dict, diameters: bool = True) -> ClusterReport:
    comps = components(par)
    bnd = boundary_cells(par)
    reports = {}
    for colour in (0, 1):
        cs = [g for g in comps if par[g[0]] == colour]
        sizes: dict = {}
        for g in cs:
            sizes[len(g)] = sizes.get(len(g), 0) + 1
        isl: dict = {}
        for g in cs:
            if not any(q in bnd for q in g):
                sh = canonical_shape(g)
                isl[sh] = isl.get(sh, 0) + 1
        islands = sorted(isl.items(), key=lambda t: (len(t[0]), t[0]))
        dmax = 0
        if diameters and cs:
            # a cluster of n cells has diameter < n, so skip the hopeless ones
            for g in sorted(cs, key=len, reverse=True):
                if len(g) - 1 <= dmax:
                    break
                dmax = max(dmax, graph_diameter(g))
        reports[colour] = ColourReport(colour, len(cs), sizes, max((len(g) for g in cs), default=0),
                                       dmax, islands)
    return ClusterReport(len(par), reports)


def island_census(par: dict) -> list:
    """(shape, colour, count) for clusters not touching the patch boundary, smallest first."""
    rep = clusters(par, diameters=False)
    out = []
    for c, r in rep.colours.items():
        out += [(sh, c, n) for sh, n in r.islands]
    out.sort(key=lambda t: (len(t[0]), t[0], t[1]))
    return out


def smallest_island(par: dict, colour: int | None = None):
    cen = island_census(par)
    if colour is not None:
        cen = [t for t in cen if t[1] == colour]
    return cen[0] if cen else None


def parity_patch(system: str, k: int, seed=None) -> dict:
    """Parity colouring of the pseudo fixed point of order k (a full ball of radius 2**k - 1)."""
    s = load_system(system)
    seed = s.seeds[0] if seed is None else s.label_index(seed)
    g = fixed_point_grid(s, seed, k)
    vals = parity_values(s)
    idx = np.argwhere(g.data >= 0)
    r = g.radius
    return {(int(a) - r, int(b) - r): int(vals[g.data[a, b]]) for a, b in idx}


def growth_curve(system: str, k_min: int, k_max: int, seed=None) -> list:
    out = []
    for k in range(k_min, k_max + 1):
        rep = clusters(parity_patch(system, k, seed))
        out.append((k, rep.colours[0].max_diameter, rep.colours[1].max_diameter))
    return out


def belt(par: dict, island) -> dict:
    """The island together with its surrounding ring of opposite colour."""
    cells = set(island)
    ring = {r for q in island for r in _neighbours(q)} - cells
    return {q: par[q] for q in cells | ring if q in par}


def occurs_in(pattern: dict, par: dict) -> bool:
    """Does the coloured pattern occur, up to translation, inside par?"""
    if not pattern:
        return True
    items = sorted(pattern.items())
    (a0, b0), c0 = items[0]
    rel = [((q[0] - a0, q[1] - b0), c) for q, c in items]
    for q, c in par.items():
        if c != c0:
            continue
        if all(par.get((q[0] + d[0], q[1] + d[1])) == cc for d, cc in rel):
            return True
    return False
