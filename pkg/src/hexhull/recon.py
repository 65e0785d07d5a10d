"""Reconstruction of decorated hexagons from their parity coronae.

The corona of order n around a cell is the colouring of the hexagonal ball
of radius n.  The atlas maps every corona seen in the hull to the set of
decorated labels found beneath it; reconstruction is possible at order n
when every such set is a singleton.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .engine import SubstitutionSystem, ball_codes, fixed_point_grid, load_system
from .lattice import ball, ball_size


class AtlasError(RuntimeError):
    pass


@dataclass
class CoronaAtlas:
    system: str
    order: int
    depth: int
    table: dict  # corona bytes -> frozenset of label indices

    @property
    def collisions(self) -> int:
        return sum(1 for v in self.table.values() if len(v) > 1)

    @property
    def injective(self) -> bool:
        return self.collisions == 0

    def to_json(self) -> dict:
        s = load_system(self.system)
        n = ball_size(self.order)
        rows = []
        for key in sorted(self.table):
            bits = np.unpackbits(np.frombuffer(key, dtype=np.uint8))[:n]
            rows.append(["".join(map(str, bits)), sorted(s.label_str(l) for l in self.table[key])])
        return {"system": self.system, "order": self.order, "depth": self.depth,
                "cells": [list(p) for p in ball(self.order)], "coronae": rows}


def parity_values(s: SubstitutionSystem) -> np.ndarray:
    return np.array([0 if lab.chirality else 1 for lab in s.labels], dtype=np.int32)


def _pack(codes: np.ndarray) -> np.ndarray:
    return np.packbits(codes.astype(np.uint8), axis=1)


def corona_atlas(system: SubstitutionSystem | str, order: int, depth: int,
                 check_stable: bool = False) -> CoronaAtlas:
    s = load_system(system) if isinstance(system, str) else system
    if order < 0:
        raise ValueError("order must be nonnegative")
    if (1 << depth) - 1 < 2 * order:
        raise AtlasError(f"depth {depth} too small for order {order}")
    vals = parity_values(s)
    table: dict = {}
    for seed in s.seeds:
        g = fixed_point_grid(s, seed, depth)
        codes, centres = ball_codes(g, order, values=vals)
        packed = _pack(codes)
        labs = g.data[centres[:, 0] + g.radius, centres[:, 1] + g.radius].astype(np.uint16)
        both = np.concatenate([packed, labs.view(np.uint8).reshape(len(labs), 2)], axis=1)
        uniq = np.unique(both, axis=0)
        nb = packed.shape[1]
        for row in uniq:
            key = row[:nb].tobytes()
            lab = int(row[nb:].view(np.uint16)[0])
            table.setdefault(key, set()).add(lab)
    atlas = CoronaAtlas(s.name, order, depth, {k: frozenset(v) for k, v in table.items()})
    if check_stable:
        nxt = corona_atlas(s, order, depth + 1)
        if nxt.table != atlas.table:
            raise AtlasError(f"atlas at depth {depth} not stable")
    return atlas


def minimal_injective_order(system, depth: int = 7, max_order: int = 5) -> int | None:
    for n in range(max_order + 1):
        if corona_atlas(system, n, depth).injective:
            return n
    return None


def reconstruct(par: dict, system: SubstitutionSystem | str, atlas: CoronaAtlas | None = None,
                order: int = 3, depth: int = 7) -> dict:
    """Decorated labels on every cell whose full order-n corona lies in the parity patch."""
    s = load_system(system) if isinstance(system, str) else system
    if atlas is None:
        atlas = _default_atlas(s.name, order, depth)
    if not atlas.injective:
        raise AtlasError(f"order {atlas.order} coronae do not determine the centre")
    offs = ball(atlas.order)
    out = {}
    for q in par:
        try:
            bits = [par[(q[0] + d[0], q[1] + d[1])] for d in offs]
        except KeyError:
            continue
        key = np.packbits(np.array(bits, dtype=np.uint8)).tobytes()
        labs = atlas.table.get(key)
        if labs is None:
            raise AtlasError(f"corona at {q} does not occur in the {s.name} hull")
        out[q] = next(iter(labs))
    return out


_CACHE: dict = {}


def _default_atlas(name: str, order: int, depth: int) -> CoronaAtlas:
    key = (name, order, depth)
    if key not in _CACHE:
        _CACHE[key] = corona_atlas(name, order, depth)
    return _CACHE[key]


def save_atlas(atlas: CoronaAtlas, path) -> None:
    with open(path, "w") as fh:
        json.dump(atlas.to_json(), fh, indent=0)
