"""Toeplitz structure of the half-hex fixed points.

The centres of type-ell hexagons in a half-hex fixed point are

    H_ell = A_ell  u  union_{n >= 0} 2^n (2 Gamma + t_ell),

where t_ell is the lattice vector sqrt(3) xi^(3 + 2 ell) and A_ell is {0}
for the seed type and empty otherwise.  A point p != 0 has a unique address
(n, t_ell): n is the 2-adic valuation of p in Gamma, and p / 2^n mod 2Gamma
picks the type.
"""
from __future__ import annotations

from dataclasses import dataclass

from .engine import (SubstitutionSystem, fixed_point_grid, in_lattice, lattice_basis, load_system,
                     pseudo_inflate)
from .lattice import ball

# sqrt(3) xi^(3 + 2 ell) in lattice coordinates
T_ELL = {0: (0, 1), 1: (-1, 1), 2: (-1, 0)}
_CLASS_TYPE = {((t[0] % 2), (t[1] % 2)): ell for ell, t in T_ELL.items()}


@dataclass(frozen=True)
class ToeplitzAddress:
    level: int | None  # None marks the limit point 0
    ell: int
    residue: tuple  # t_ell, or (0, 0) for the limit point

    @property
    def is_limit(self) -> bool:
        return self.level is None

    def to_json(self) -> dict:
        return {"level": "limit point" if self.level is None else self.level,
                "type": self.ell, "residue": list(self.residue)}


class AddressError(ValueError):
    pass


def in_term(p, ell: int, n: int) -> bool:
    """p in 2^n (2 Gamma + t_ell)."""
    s = 1 << n
    if p[0] % s or p[1] % s:
        return False
    q = (p[0] // s - T_ELL[ell][0], p[1] // s - T_ELL[ell][1])
    return q[0] % 2 == 0 and q[1] % 2 == 0


def toeplitz_points(ell: int, seed_type: int, n_max: int, R: int) -> set:
    if ell not in T_ELL or seed_type not in T_ELL:
        raise ValueError("types are 0, 1, 2")
    if R <= 0:
        raise ValueError("R must be positive")
    out = {(0, 0)} if ell == seed_type else set()
    for p in ball(R):
        if any(in_term(p, ell, n) for n in range(n_max + 1)):
            out.add(p)
    return out


def two_adic_address(p, seed_type: int, n_cap: int = 64) -> ToeplitzAddress:
    if tuple(p) == (0, 0):
        return ToeplitzAddress(None, seed_type, (0, 0))
    a, b = p
    n = 0
    while a % 2 == 0 and b % 2 == 0:
        a //= 2
        b //= 2
        n += 1
        if n > n_cap:
            raise AddressError(f"no address for {p} below level {n_cap}")
    ell = _CLASS_TYPE[(a % 2, b % 2)]
    return ToeplitzAddress(n, ell, T_ELL[ell])


def all_addresses(p, seed_type: int, n_max: int) -> list:
    """Every (level, type) whose term contains p; used for the uniqueness check."""
    out = []
    if tuple(p) == (0, 0):
        out.append((None, seed_type))
    for ell in T_ELL:
        for n in range(n_max + 1):
            if in_term(p, ell, n):
                out.append((n, ell))
    return out


def halfhex_types(seed, R: int) -> dict:
    """Types of the half-hex fixed point grown from `seed`, on the radius-R ball."""
    s = load_system("halfhex")
    k = 1
    while (1 << k) - 1 < R:
        k += 1
    g = fixed_point_grid(s, seed, k)
    i = s.label_index(seed)
    return {p: s.labels[g.get(p)].orientation for p in ball(R)}, s.labels[i].orientation


def verify_against_inflation(seed, R: int, types: dict | None = None) -> dict:
    """Compare the inflation fixed point with the Toeplitz sets on the radius-R ball."""
    if types is None:
        types, ell0 = halfhex_types(seed, R)
    else:
        s = load_system("halfhex")
        ell0 = s.labels[s.label_index(seed)].orientation
    n_max = max(1, R.bit_length() + 1)
    sets = {ell: toeplitz_points(ell, ell0, n_max, R) for ell in T_ELL}
    disc = []
    for p in sorted(types):
        inside = [ell for ell in T_ELL if p in sets[ell]]
        if inside != [types[p]]:
            disc.append({"point": list(p), "inflation": types[p], "toeplitz": inside})
    return {"seed_type": ell0, "radius": R, "cells": len(types), "discrepancies": disc,
            "ok": not disc}


def address_report(seed_type: int, R: int) -> dict:
    n_max = R.bit_length() + 1
    dup, missing = [], []
    for p in ball(R):
        addr = all_addresses(p, seed_type, n_max)
        if not addr:
            missing.append(p)
        elif len(addr) > 1:
            dup.append(p)
    return {"unique": not dup, "complete": not missing, "duplicates": dup, "missing": missing}


def lattice_periodic_subset(system: SubstitutionSystem | str, k_max: int = 6) -> dict:
    """Find the least order k at which all order-k supertiles share some tiles.

    Returns offsets d (relative to the supertile centre) where every label's
    k-fold pseudo image carries the same tile; those tiles then repeat along
    the lattice 2^k Gamma + d in every tiling of the hull.
    """
    s = load_system(system) if isinstance(system, str) else system
    labels = list(range(len(s)))
    for k in range(1, k_max + 1):
        imgs = [pseudo_inflate(s, {(0, 0): l}, k).cells for l in labels]
        first = imgs[0]
        const = sorted(d for d in first if all(im[d] == first[d] for im in imgs))
        if const:
            return {"order": k, "offsets": const,
                    "labels": {d: s.label_str(first[d]) for d in const},
                    "period_basis": lattice_basis([(1 << k, 0), (0, 1 << k)])}
    return {"order": None, "offsets": [], "labels": {}, "period_basis": None}


def check_periodic_subset(system, k: int, depth: int) -> bool:
    """Verify on a fixed point of the given depth that the subset is really periodic."""
    s = load_system(system) if isinstance(system, str) else system
    res = lattice_periodic_subset(s, k)
    if res["order"] is None:
        return False
    basis = res["period_basis"]
    for seed in s.seeds:
        g = fixed_point_grid(s, seed, depth)
        for q, l in g.cells().items():
            for d in res["offsets"]:
                if in_lattice((q[0] - d[0], q[1] - d[1]), basis):
                    if s.label_str(l) != res["labels"][d]:
                        return False
    return True
