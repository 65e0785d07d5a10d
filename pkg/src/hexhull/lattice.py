"""Triangular lattice of hexagon centres, exact geometry and the D6 action.

A lattice point (a, b) stands for a*u + b*w, where u has length sqrt(3) at
30 degrees and w has length sqrt(3) at 90 degrees.  Hexagons have edge
length 1 and are flat-topped: vertex j sits at angle 60*j degrees and edge k
joins vertices k and k+1, facing the neighbour NB[k].
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, NamedTuple

# neighbour directions; NB[k] points at angle 30 + 60*k degrees
NB = ((1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1))

# density of hexagon centres (edge length 1)
DENSITY = Fraction(2, 9)  # times sqrt(3)
DENSITY_FLOAT = 2.0 * math.sqrt(3.0) / 9.0


class LatticePoint(NamedTuple):
    a: int
    b: int

    def __add__(self, other):  # type: ignore[override]
        return LatticePoint(self.a + other[0], self.b + other[1])

    def __sub__(self, other):
        return LatticePoint(self.a - other[0], self.b - other[1])

    def __neg__(self):
        return LatticePoint(-self.a, -self.b)

    def scale(self, c: int) -> "LatticePoint":
        return LatticePoint(c * self.a, c * self.b)


def add(p, q):
    return (p[0] + q[0], p[1] + q[1])


def sub(p, q):
    return (p[0] - q[0], p[1] - q[1])


def mul(c: int, p):
    return (c * p[0], c * p[1])


def hex_norm(p) -> int:
    """Graph distance from the origin in the hexagonal packing."""
    a, b = p
    return max(abs(a), abs(b), abs(a + b))


def hex_dist(p, q) -> int:
    return hex_norm(sub(p, q))


def ball(radius: int, centre=(0, 0)) -> list[tuple[int, int]]:
    """All lattice points within graph distance `radius`, in a fixed order."""
    c0, c1 = centre
    r = radius
    return [(c0 + a, c1 + b) for a in range(-r, r + 1) for b in range(-r, r + 1)
            if max(abs(a), abs(b), abs(a + b)) <= r]


def ball_size(radius: int) -> int:
    return 1 + 3 * radius * (radius + 1)


def neighbours(p) -> Iterator[tuple[int, int]]:
    for d in NB:
        yield (p[0] + d[0], p[1] + d[1])


# ---------------------------------------------------------------- geometry

@dataclass(frozen=True)
class ExactPoint:
    """Planar point x + y*sqrt(3)*i with rational x and y."""
    x: Fraction
    y: Fraction

    def __add__(self, o: "ExactPoint") -> "ExactPoint":
        return ExactPoint(self.x + o.x, self.y + o.y)

    def norm2(self) -> Fraction:
        return self.x * self.x + 3 * self.y * self.y

    def to_float(self) -> tuple[float, float]:
        return (float(self.x), float(self.y) * math.sqrt(3.0))


def to_cartesian(p) -> ExactPoint:
    """Exact embedding: u = (3/2, sqrt3/2), w = (0, sqrt3)."""
    a, b = p
    return ExactPoint(Fraction(3 * a, 2), Fraction(a + 2 * b, 2))


def to_float(p) -> tuple[float, float]:
    a, b = p
    return (1.5 * a, (a + 2 * b) * math.sqrt(3.0) / 2.0)


# vertex j of the hexagon at the origin, as a point of (1/3)Gamma
_VX = (Fraction(1), Fraction(1, 2), Fraction(-1, 2), Fraction(-1), Fraction(-1, 2), Fraction(1, 2))
_VY = (Fraction(0), Fraction(1, 2), Fraction(1, 2), Fraction(0), Fraction(-1, 2), Fraction(-1, 2))


@dataclass(frozen=True, order=True)
class ScaledPoint:
    """The point (a, b)/den of the scaled lattice (1/den)Gamma, kept reduced."""
    a: int
    b: int
    den: int = 1

    @staticmethod
    def make(a: int, b: int, den: int) -> "ScaledPoint":
        g = math.gcd(math.gcd(a, b), den)
        return ScaledPoint(a // g, b // g, den // g)

    def to_float(self) -> tuple[float, float]:
        x, y = to_float((self.a, self.b))
        return (x / self.den, y / self.den)


def vertex(p, j: int) -> ScaledPoint:
    """Vertex j of hexagon p: (3p + NB[j-1] + NB[j]) / 3."""
    d1, d2 = NB[(j - 1) % 6], NB[j % 6]
    return ScaledPoint.make(3 * p[0] + d1[0] + d2[0], 3 * p[1] + d1[1] + d2[1], 3)


def edge_midpoint(p, k: int) -> ScaledPoint:
    d = NB[k % 6]
    return ScaledPoint.make(2 * p[0] + d[0], 2 * p[1] + d[1], 2)


def hexagon_corners(p) -> list[tuple[float, float]]:
    cx, cy = to_float(p)
    return [(cx + float(_VX[j]), cy + float(_VY[j]) * math.sqrt(3.0)) for j in range(6)]


def exact_vertex(p, j: int) -> ExactPoint:
    return to_cartesian(p) + ExactPoint(_VX[j % 6], _VY[j % 6])


def sublattice_index(scale: int) -> int:
    """Index of scale*Gamma in Gamma."""
    if scale <= 0:
        raise ValueError("scale must be a positive integer")
    return scale * scale


# ------------------------------------------------------------------- D6

def _rot(p):
    a, b = p
    return (-b, a + b)


def _ref(p):
    a, b = p
    return (a, -a - b)


@dataclass(frozen=True, order=True)
class D6Element:
    """x -> R^rotation (S^reflected x); R = rotation by 60 deg, S = mirror in the x-axis."""
    rotation: int = 0
    reflected: bool = False

    def __post_init__(self):
        object.__setattr__(self, "rotation", self.rotation % 6)

    def __mul__(self, other: "D6Element") -> "D6Element":
        r = self.rotation + (-other.rotation if self.reflected else other.rotation)
        return D6Element(r, self.reflected != other.reflected)

    def inverse(self) -> "D6Element":
        if self.reflected:
            return self
        return D6Element(-self.rotation, False)

    def act(self, p):
        q = _ref(p) if self.reflected else p
        for _ in range(self.rotation):
            q = _rot(q)
        return q

    def act_direction(self, k: int) -> int:
        """Index of g.NB[k] in NB."""
        return (self.rotation + (-1 - k if self.reflected else k)) % 6

    def act_vertex(self, j: int) -> int:
        """Vertex j of a hexagon goes to vertex act_vertex(j) of the image hexagon."""
        return (self.rotation + (-j if self.reflected else j)) % 6

    def act_exact(self, z: ExactPoint) -> ExactPoint:
        x, y = z.x, z.y
        if self.reflected:
            y = -y
        for _ in range(self.rotation):
            # (x + y sqrt3 i) * (1/2 + sqrt3/2 i)
            x, y = x / 2 - 3 * y / 2, x / 2 + y / 2
        return ExactPoint(x, y)

    def __str__(self) -> str:
        return f"r{self.rotation}{'s' if self.reflected else ''}"


IDENTITY = D6Element(0, False)
ROTATION = D6Element(1, False)
REFLECTION = D6Element(0, True)


def d6_elements() -> list[D6Element]:
    return [D6Element(r, s) for s in (False, True) for r in range(6)]


def act(g: D6Element, p):
    return g.act(p)


def lattice_points(points: Iterable) -> list[LatticePoint]:
    return [LatticePoint(*p) for p in points]
