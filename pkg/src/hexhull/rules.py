"""Local rules for decorated hexagons.

Decorated llama tiles are the twelve hexagons (orientation p, chirality)
carrying a blue arrow line and point markers ("flags").  Each corner of a
tile carries a flag on its clockwise (0) or counterclockwise (1) side.  The
flag pattern of a tile is one of two base patterns, rotated by p.

R1  arrows on a shared edge agree (blue lines do not jump);
R2  for hexagons separated by a single edge, the two corner points at the
    ends of that edge sit on the same side of it;
R3  the three flags around a vertex are never all the same.

For the Penrose hexagons the decoration of an edge is summarised by an
integer mark; blue and red lines continue across an edge exactly when the
marks of both sides agree.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .engine import SubstitutionSystem, adjacent_pairs, legal_patches, load_system, _asset
from .lattice import NB, ball
from .twoadic import arrow_head_ccw

LLAMA_TILES = [(p, chi) for chi in (True, False) for p in range(6)]


class AlphabetError(ValueError):
    pass


@dataclass(frozen=True)
class Violation:
    rule: str  # R1 | R2 | R3 | edge-mismatch
    location: tuple  # lattice point, or (point, vertex index) for R3
    description: str

    def to_json(self) -> dict:
        return {"rule": self.rule, "location": list(self.location), "description": self.description}


# ------------------------------------------------------------ decorations

def _nn_pairs(s: SubstitutionSystem):
    """(L, k, M): M at NB[k] + NB[k+1] from L, from the radius-2 atlas."""
    b2 = ball(2)
    pos = {p: i for i, p in enumerate(b2)}
    c = pos[(0, 0)]
    out = set()
    for t in legal_patches(s, 2):
        for k in range(6):
            d = (NB[k][0] + NB[(k + 1) % 6][0], NB[k][1] + NB[(k + 1) % 6][1])
            out.add((t[c], k, t[pos[d]]))
    return out


def _vertex_triples(s: SubstitutionSystem):
    b1 = ball(1)
    pos = {p: i for i, p in enumerate(b1)}
    c = pos[(0, 0)]
    out = set()
    for t in legal_patches(s, 1):
        for k in range(6):
            out.add((t[c], k, t[pos[NB[(k - 1) % 6]]], t[pos[NB[k]]]))
    return out


def _tile(s: SubstitutionSystem, i: int):
    lab = s.labels[i]
    return lab.orientation, lab.chirality


def derive_flag_table(s: SubstitutionSystem) -> dict:
    """All flag tables compatible with R2 and R3 on the hull.

    A table assigns a bit to each (chirality, corner relative to p).  It must
    make R2 hold on every next-nearest pair and R3 on every vertex of the
    atlas.  Returns {"solutions": [...], "table": canonical choice}.
    """
    nn = {(_tile(s, l), k, _tile(s, m)) for l, k, m in _nn_pairs(s)}
    tri = {(_tile(s, a), k, _tile(s, b), _tile(s, c)) for a, k, b, c in _vertex_triples(s)}

    def fl(bits, t, v):
        p, chi = t
        return bits[(0 if chi else 6) + (v - p) % 6]

    sols = []
    for bits in itertools.product((0, 1), repeat=12):
        if any(fl(bits, a, k + 1) == fl(bits, b, k + 4) for a, k, b in nn):
            continue
        if any(fl(bits, a, k) == fl(bits, b, k + 2) == fl(bits, c, k + 4) for a, k, b, c in tri):
            continue
        sols.append(bits)
    if not sols:
        raise RuntimeError(f"{s.name}: no flag table satisfies R2 and R3")
    best = min(sols)
    return {"solutions": sols, "table": {"+": list(best[:6]), "-": list(best[6:])}}


def derive_edge_marks(s: SubstitutionSystem) -> dict:
    """Finest edge marking with matching marks across every legal adjacency."""
    parent: dict = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for l, k, m in adjacent_pairs(s):
        a, b = find((l, k)), find((m, (k + 3) % 6))
        if a != b:
            parent[max(a, b)] = min(a, b)
    roots = sorted({find((i, k)) for i in range(len(s)) for k in range(6)})
    ids = {r: n for n, r in enumerate(roots)}
    return {s.label_str(i): [ids[find((i, k))] for k in range(6)] for i in range(len(s))}


def decoration(name: str) -> dict:
    d = _asset()["systems"][name].get("decoration")
    if d is None:
        raise KeyError(f"system {name} carries no decoration data")
    return d


# ---------------------------------------------------------------- llama

def llama_image(patch_cells: dict, s: SubstitutionSystem) -> dict:
    """Forget everything but orientation and chirality: cells -> (p, chirality)."""
    return {q: _tile(s, i) for q, i in patch_cells.items()}


def _check_llama(cells: dict):
    for q, t in cells.items():
        if tuple(t) not in LLAMA_TILES:
            raise AlphabetError(f"tile {t!r} at {q} is not a decorated llama tile")


def llama_flag(t, v: int, table: dict | None = None) -> int:
    table = table or decoration("taylor")["flags"]
    p, chi = t
    return table["+" if chi else "-"][(v - p) % 6]


def check_taylor_rules(cells: dict, table: dict | None = None) -> list:
    """R1-R3 on a patch of llama tiles {point: (orientation, chirality)}."""
    cells = {tuple(q): (int(t[0]), bool(t[1])) for q, t in cells.items()}
    _check_llama(cells)
    table = table or decoration("taylor")["flags"]
    out = []
    for q in sorted(cells):
        t = cells[q]
        for k in range(6):
            d = NB[k]
            r = (q[0] + d[0], q[1] + d[1])
            if k < 3 and r in cells:
                u = cells[r]
                if arrow_head_ccw(t[0], k) == arrow_head_ccw(u[0], (k + 3) % 6):
                    out.append(Violation("R1", q, f"arrow clash with {r} across edge {k}"))
            e = NB[(k + 1) % 6]
            r2 = (q[0] + d[0] + e[0], q[1] + d[1] + e[1])
            if k < 3 and r2 in cells:
                if llama_flag(t, k + 1, table) == llama_flag(cells[r2], k + 4, table):
                    out.append(Violation("R2", q, f"edge transfer fails towards {r2}"))
            # vertex k is shared with NB[k-1] and NB[k]
            a = NB[(k - 1) % 6]
            qa = (q[0] + a[0], q[1] + a[1])
            if qa in cells and r in cells and q == min(q, qa, r):
                f = (llama_flag(t, k, table), llama_flag(cells[qa], k + 2, table),
                     llama_flag(cells[r], k + 4, table))
                if f[0] == f[1] == f[2]:
                    out.append(Violation("R3", (q[0], q[1], k), "threefold vertex"))
    return out


def threefold_seed(table: dict | None = None) -> dict:
    """Three llama tiles around a vertex, arrows matching, all flags equal."""
    table = table or decoration("taylor")["flags"]
    k = 0
    a, b = NB[5], NB[0]
    for t0, t1, t2 in itertools.product(LLAMA_TILES, repeat=3):
        cells = {(0, 0): t0, a: t1, b: t2}
        if not any(v.rule in ("R1", "R2") for v in check_taylor_rules(cells, table)):
            f = (llama_flag(t0, k, table), llama_flag(t1, k + 2, table), llama_flag(t2, k + 4, table))
            if f[0] == f[1] == f[2]:
                return cells
    raise RuntimeError("no threefold seed exists")


# -------------------------------------------------------------- Penrose

def check_edge_matching(cells: dict, s: SubstitutionSystem | None = None) -> list:
    """Blue arrows and edge marks must agree across every interior edge."""
    s = s or load_system("penrose")
    marks = decoration(s.name)["edge_marks"]
    cells = {tuple(q): s.label_index(l) for q, l in cells.items()}
    out = []
    for q in sorted(cells):
        i = cells[q]
        li = s.labels[i]
        for k in range(3):
            d = NB[k]
            r = (q[0] + d[0], q[1] + d[1])
            if r not in cells:
                continue
            j = cells[r]
            lj = s.labels[j]
            if arrow_head_ccw(li.orientation, k) == arrow_head_ccw(lj.orientation, k + 3):
                out.append(Violation("edge-mismatch", q, f"blue arrow clash with {r}"))
            elif marks[str(li)][k] != marks[str(lj)][(k + 3) % 6]:
                out.append(Violation("edge-mismatch", q, f"red line jumps across the edge to {r}"))
    return out
