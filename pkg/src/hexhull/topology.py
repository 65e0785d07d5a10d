"""Anderson-Putnam approximant complex and the cohomology of the hull.

Each hexagon label L gives six triangles (centre, vertex k, vertex k+1).
Centres and spokes belong to a single label; hexagon vertices and edges are
glued along every legal adjacency.  Since the inflation forces the border,
uncollared labels suffice.  The inflation acts through the pseudo image:
the doubled hexagon of L is covered by its central child and parts of the
six ring children.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .engine import SubstitutionSystem, adjacent_pairs, border_forcing_order, load_system
from .linalg import (QQ, Field, charpoly, dense_rank, factor_integer_roots, matmul, nullspace,
                     pullback, reduce_vec, rref, smith_invariants)
from .polys import poly_mul


class ComplexError(RuntimeError):
    pass


class _ParityUF:
    """Union-find carrying a Z/2 orientation offset to the root."""

    def __init__(self):
        self.parent: dict = {}
        self.par: dict = {}

    def find(self, x):
        if x not in self.parent:
            self.parent[x] = x
            self.par[x] = 0
            return x, 0
        path = []
        while self.parent[x] != x:
            path.append(x)
            x = self.parent[x]
        root = x
        acc = 0
        for y in reversed(path):
            acc ^= self.par[y]
            self.par[y] = acc
            self.parent[y] = root
        return (root, self.par[path[0]]) if path else (root, 0)

    def union(self, a, b, parity: int):
        ra, pa = self.find(a)
        rb, pb = self.find(b)
        if ra == rb:
            if pa ^ pb != parity:
                raise ComplexError("inconsistent edge orientation")
            return
        if rb < ra:
            ra, rb, pa, pb = rb, ra, pb, pa
        self.parent[rb] = ra
        self.par[rb] = pa ^ pb ^ parity


@dataclass
class ApproximantComplex:
    system: str
    cells: tuple  # (cells0, cells1, cells2)
    d1: dict  # boundary C1 -> C0 as col -> {row: coef}
    d2: dict
    f: tuple  # chain map (f0, f1, f2), same format
    n_faces: int = 0

    @property
    def sizes(self) -> tuple:
        return tuple(len(c) for c in self.cells)

    def boundary_matrix(self, k: int) -> list:
        d = self.d1 if k == 1 else self.d2
        rows, cols = len(self.cells[k - 1]), len(self.cells[k])
        M = [[0] * cols for _ in range(rows)]
        for c, col in d.items():
            for r, v in col.items():
                M[r][c] += v
        return M


def build_complex(s: SubstitutionSystem | str, check_border: bool = True) -> ApproximantComplex:
    if isinstance(s, str):
        s = load_system(s)
    if check_border and border_forcing_order(s, 4) is None:
        raise ComplexError(f"{s.name}: border forcing not established, collared tiles unsupported")
    pairs = adjacent_pairs(s)
    labels = sorted({l for l, _, _ in pairs})
    ue = _ParityUF()
    uv = _ParityUF()
    for l in labels:
        for k in range(6):
            ue.find((l, k))
            uv.find((l, k))
    for l, k, m in pairs:
        ue.union((l, k), (m, (k + 3) % 6), 1)
        uv.union((l, k), (m, (k + 4) % 6), 0)
        uv.union((l, (k + 1) % 6), (m, (k + 3) % 6), 0)
    V = sorted({uv.find((l, j))[0] for l in labels for j in range(6)})
    E = sorted({ue.find((l, k))[0] for l in labels for k in range(6)})
    cells0 = [("C", l) for l in labels] + [("V", v) for v in V]
    cells1 = [("S", l, j) for l in labels for j in range(6)] + [("E", e) for e in E]
    cells2 = [("T", l, k) for l in labels for k in range(6)]
    i0 = {c: i for i, c in enumerate(cells0)}
    i1 = {c: i for i, c in enumerate(cells1)}
    i2 = {c: i for i, c in enumerate(cells2)}

    def vcell(l, j):
        return i0[("V", uv.find((l, j % 6))[0])]

    def ecell(l, k):
        r, p = ue.find((l, k % 6))
        return i1[("E", r)], (-1 if p else 1)

    def scell(l, j):
        return i1[("S", l, j % 6)]

    def addc(d, i, c):
        v = d.get(i, 0) + c
        if v:
            d[i] = v
        else:
            d.pop(i, None)

    # spokes run from the centre to vertex j, edge k from vertex k to k+1
    d1: dict = {}
    for l in labels:
        for j in range(6):
            col = {}
            addc(col, vcell(l, j), 1)
            addc(col, i0[("C", l)], -1)
            d1[scell(l, j)] = col
    erep: dict = {}
    for l in labels:
        for k in range(6):
            r, p = ue.find((l, k))
            erep.setdefault(r, (l, k, p))
    for r, (l, k, p) in erep.items():
        sg = -1 if p else 1
        col = {}
        addc(col, vcell(l, k + 1), sg)
        addc(col, vcell(l, k), -sg)
        d1[i1[("E", r)]] = col
    d2: dict = {}
    for l in labels:
        for k in range(6):
            col = {}
            addc(col, scell(l, k), 1)
            ec, es = ecell(l, k)
            addc(col, ec, es)
            addc(col, scell(l, k + 1), -1)
            d2[i2[("T", l, k)]] = col

    ps = s.pseudo
    f0: dict = {}
    f1: dict = {}
    f2: dict = {}
    for l in labels:
        c = int(ps[l, 0])
        f0[i0[("C", l)]] = {i0[("C", c)]: 1}
        for k in range(6):
            r = int(ps[l, 1 + k])
            col = {}
            addc(col, i2[("T", c, k)], 1)
            for t in (2, 3, 4):
                addc(col, i2[("T", r, (k + t) % 6)], 1)
            f2[i2[("T", l, k)]] = col
            col = {}
            addc(col, scell(c, k), 1)
            ec, es = ecell(r, k + 4)
            addc(col, ec, es)
            f1[scell(l, k)] = col
    for r_, (l, k, p) in erep.items():
        r = int(ps[l, 1 + k])
        sg = -1 if p else 1
        col = {}
        addc(col, scell(r, k + 5), -sg)
        addc(col, scell(r, k + 2), sg)
        f1[i1[("E", r_)]] = col
    vrep: dict = {}
    for l in labels:
        for j in range(6):
            vrep.setdefault(uv.find((l, j))[0], (l, j))
    for v, (l, j) in vrep.items():
        r = int(ps[l, 1 + j])
        f0[i0[("V", v)]] = {vcell(r, j + 5): 1}
    cx = ApproximantComplex(s.name, (cells0, cells1, cells2), d1, d2, (f0, f1, f2), len(labels))
    return cx


def _compose(a: dict, b: dict) -> dict:
    """(a o b) for maps in col -> {row: coef} form."""
    out = {}
    for c, col in b.items():
        acc: dict = {}
        for r, v in col.items():
            for r2, w in a.get(r, {}).items():
                acc[r2] = acc.get(r2, 0) + v * w
        out[c] = {r: v for r, v in acc.items() if v}
    return out


def check_chain_complex(cx: ApproximantComplex) -> dict:
    dd = _compose(cx.d1, cx.d2)
    f0, f1, f2 = cx.f
    chain1 = _compose(cx.d1, f1) == _compose(f0, cx.d1)
    chain2 = _compose(cx.d2, f2) == _compose(f1, cx.d2)
    return {"dd_zero": all(not col for col in dd.values()), "chain_map": chain1 and chain2}


# --------------------------------------------------------------- cohomology

def _rows(d: dict, nrows: int) -> list:
    rows = [dict() for _ in range(nrows)]
    for c, col in d.items():
        for r, v in col.items():
            rows[r][c] = v
    return rows


def _cols(d: dict) -> list:
    return [dict(col) for _, col in sorted(d.items())]


def cohomology_with_action(cx: ApproximantComplex, K: Field = QQ) -> dict:
    """Dimensions of H^k(approximant; K) and the matrices of the inflation action."""
    n0, n1, n2 = cx.sizes
    f0, f1, f2 = cx.f
    # cochains are functions on cells; delta^{k-1} has rows = k-cells
    # B^k = span of delta(e_i); Z^k = cochains vanishing on all boundaries of (k+1)-cells
    setup = {
        0: ([], _cols(cx.d1), n0, f0),
        1: (_rows(cx.d1, n0), _cols(cx.d2), n1, f1),
        2: (_rows(cx.d2, n1), [], n2, f2),
    }
    out = {}
    for k, (brows, zcons, n, F) in setup.items():
        RB, pB = rref(brows, K)
        Z = nullspace(zcons, n, K) if zcons else [{i: K.coerce(1)} for i in range(n)]
        Zr = [reduce_vec(z, RB, pB, K) for z in Z]
        RH, pH = rref(Zr, K)
        h = len(pH)
        A = [[K.zero()] * h for _ in range(h)]
        for i, hv in enumerate(RH):
            w = reduce_vec(pullback(F, hv, K), RB, pB, K)
            if reduce_vec(w, RH, pH, K):
                raise ComplexError("pullback does not preserve cocycles")
            for j, p in enumerate(pH):
                A[j][i] = w.get(p, K.zero())
        out[k] = {"dim": h, "action": A}
    return out


def integer_cohomology(cx: ApproximantComplex) -> dict:
    """Free ranks and torsion invariant factors of H^k of the approximant."""
    n0, n1, n2 = cx.sizes
    delta0 = [list(r) for r in zip(*cx.boundary_matrix(1))]  # n1 x n0
    delta1 = [list(r) for r in zip(*cx.boundary_matrix(2))]  # n2 x n1
    inv0 = smith_invariants(delta0)
    inv1 = smith_invariants(delta1)
    r0, r1 = len(inv0), len(inv1)
    return {
        0: {"rank": n0 - r0, "torsion": []},
        1: {"rank": n1 - r1 - r0, "torsion": [d for d in inv0 if d > 1]},
        2: {"rank": n2 - r1, "torsion": [d for d in inv1 if d > 1]},
    }


def _eventual_rank(A, K: Field) -> int:
    n = len(A)
    if n == 0:
        return 0
    P = A
    r = dense_rank(P, K)
    while True:
        P2 = matmul(P, A, K)
        r2 = dense_rank(P2, K)
        if r2 == r:
            return r
        P, r = P2, r2


def direct_limit_invariants(A, torsion_primes=(), top_degree: bool = False, cx=None, k=None) -> dict:
    """Eventual rank, characteristic polynomial on the eventual image, stable torsion.

    Stable p-torsion is only determined here for the top degree, where
    H^top(C; F_p) = H^top(C) (x) F_p; lower degrees are reported torsion-free
    whenever the approximant group is.
    """
    cp = charpoly(A)
    roots, rest = factor_integer_roots(cp, candidates=(0,))
    zero_mult = roots.get(0, 0)
    ev = len(cp) - 1 - zero_mult
    if _eventual_rank(A, QQ) != ev:
        raise ComplexError("eventual rank disagrees with the characteristic polynomial")
    eroots, erest = factor_integer_roots(rest, candidates=(1, -1, 2, -2, 4, -4, 3, -3))
    torsion = []
    for p in sorted(set(torsion_primes)):
        if not top_degree:
            raise ComplexError("stable torsion is only computed in the top degree")
        Kp = Field(p)
        Ap = cohomology_with_action(cx, Kp)[k]["action"]
        dim_p = _eventual_rank(Ap, Kp)
        units = sum(e for r, e in eroots.items() if r % p)
        if len(erest) > 1:
            raise ComplexError("non-integral eigenvalues, cannot separate the free part mod p")
        t = dim_p - units
        torsion += [p] * t
    return {"eventual_rank": ev, "charpoly": rest, "roots": eroots,
            "unfactored": erest if len(erest) > 1 else None, "stable_torsion": torsion}


def _prime_factors(n: int) -> set:
    out, d = set(), 2
    while d * d <= n:
        while n % d == 0:
            out.add(d)
            n //= d
        d += 1
    if n > 1:
        out.add(n)
    return out


@dataclass
class CohomologyReport:
    system: str
    cell_counts: tuple
    face_labels: int
    approximant: dict
    limit: dict
    actions: dict = field(default_factory=dict, repr=False)

    def to_json(self) -> dict:
        lim = {}
        for k, v in self.limit.items():
            lim[str(k)] = {"eventual_rank": v["eventual_rank"],
                           "charpoly": v["charpoly"],
                           "factors": {str(r): e for r, e in sorted(v["roots"].items())},
                           "stable_torsion": v["stable_torsion"]}
        return {"system": self.system, "cell_counts": list(self.cell_counts),
                "face_labels": self.face_labels,
                "approximant": {str(k): v for k, v in self.approximant.items()},
                "limit": lim,
                "groups": {str(k): group_string(v) for k, v in self.limit.items()}}


def group_string(inv: dict) -> str:
    parts = []
    r = inv["roots"]
    for lam, name in ((4, "Z[1/4]"), (2, "Z[1/2]"), (-2, "Z[1/2]"), (-4, "Z[1/4]")):
        if r.get(lam):
            parts.append(name + (f"^{r[lam]}" if r[lam] > 1 else ""))
    z = r.get(1, 0) + r.get(-1, 0)
    if z:
        parts.append("Z" + (f"^{z}" if z > 1 else ""))
    for t in inv["stable_torsion"]:
        parts.append(f"Z_{t}")
    return " + ".join(parts) if parts else "0"


def cohomology(s: SubstitutionSystem | str) -> CohomologyReport:
    if isinstance(s, str):
        s = load_system(s)
    cx = build_complex(s)
    chk = check_chain_complex(cx)
    if not (chk["dd_zero"] and chk["chain_map"]):
        raise ComplexError(f"{s.name}: invalid complex {chk}")
    approx = integer_cohomology(cx)
    rat = cohomology_with_action(cx)
    limit = {}
    for k in (0, 1, 2):
        if rat[k]["dim"] != approx[k]["rank"]:
            raise ComplexError("rational and integral ranks disagree")
        primes = set()
        for d in approx[k]["torsion"]:
            primes |= _prime_factors(d)
        limit[k] = direct_limit_invariants(rat[k]["action"], primes, top_degree=(k == 2), cx=cx, k=k)
    return CohomologyReport(s.name, cx.sizes, cx.n_faces, approx, limit,
                            {k: rat[k]["action"] for k in rat})


# ------------------------------------------------------------------- zeta

def _det_one_minus(roots: dict, rest) -> list:
    """det(1 - zA) from the factored characteristic polynomial, low degree first."""
    out = [1]
    for r, e in roots.items():
        for _ in range(e):
            out = poly_mul(out, [1, -r])
    if rest is not None and len(rest) > 1:
        out = poly_mul(out, list(reversed(rest)))
    return out


def zeta_from_cohomology(report: CohomologyReport, M: int = 6) -> dict:
    """zeta = det(1 - z A1) / (det(1 - z A0) det(1 - z A2)) on the hull cohomology."""
    from .polys import log_series_counts, poly_trim
    L = report.limit
    num = _det_one_minus(L[1]["roots"], L[1]["unfactored"])
    den = poly_mul(_det_one_minus(L[0]["roots"], L[0]["unfactored"]),
                   _det_one_minus(L[2]["roots"], L[2]["unfactored"]))
    a = log_series_counts(num, den, M)
    # trace form, as a cross-check of the series arithmetic
    tr = []
    for m in range(1, M + 1):
        t = 0
        for k, sign in ((0, 1), (1, -1), (2, 1)):
            t += sign * sum(e * r ** m for r, e in L[k]["roots"].items())
        tr.append(t)
    if L[1]["unfactored"] is None and L[2]["unfactored"] is None and tr != a:
        raise ComplexError("trace formula and series expansion disagree")
    return {"numerator": poly_trim(num), "denominator": poly_trim(den), "a": a}


# eigenvalue multiplicities and stable torsion of the limit groups, per degree
EXPECTED_GROUPS = {
    "halfhex": {0: ({1: 1}, []), 1: ({2: 2}, []), 2: ({4: 1, 1: 2}, [])},
    "arrowed": {0: ({1: 1}, []), 1: ({2: 2, 1: 1}, []), 2: ({4: 1, 2: 3}, [])},
    "penrose": {0: ({1: 1}, []), 1: ({2: 2, 1: 2}, []), 2: ({4: 1, 2: 6, 1: 3, -1: 2}, [3])},
    "taylor": {0: ({1: 1}, []), 1: ({2: 2, 1: 4}, []), 2: ({4: 1, 2: 6, 1: 5, -1: 2}, [])},
}


def matches_expected(report: CohomologyReport) -> tuple:
    """Compare the limit invariants with EXPECTED_GROUPS; returns (ok, differences)."""
    diffs = []
    for k, (roots, torsion) in EXPECTED_GROUPS[report.system].items():
        got = report.limit[k]
        if got["unfactored"] is not None:
            diffs.append(f"H^{k}: characteristic polynomial has non-integer roots")
        if dict(got["roots"]) != roots:
            diffs.append(f"H^{k}: eigenvalues {dict(sorted(got['roots'].items()))}, expected "
                         f"{dict(sorted(roots.items()))}")
        if sorted(got["stable_torsion"]) != torsion:
            diffs.append(f"H^{k}: torsion {got['stable_torsion']}, expected {torsion}")
    return not diffs, diffs
