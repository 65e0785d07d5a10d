"""Exact linear algebra over Z, Q and F_p.

Sparse vectors are dicts column -> coefficient.  Over Q the coefficients
are Fractions; over F_p they are ints in [0, p).
"""
from __future__ import annotations

from fractions import Fraction


class Field:
    """Q when p is None, otherwise the prime field F_p."""

    def __init__(self, p: int | None = None):
        self.p = p

    def __repr__(self) -> str:
        return "Q" if self.p is None else f"F_{self.p}"

    def coerce(self, x):
        return Fraction(x) if self.p is None else int(x) % self.p

    def inv(self, x):
        return 1 / x if self.p is None else pow(x, -1, self.p)

    def norm(self, x):
        return x if self.p is None else x % self.p

    def zero(self):
        return Fraction(0) if self.p is None else 0


QQ = Field()


def _axpy(r: dict, f, row: dict, K: Field):
    """r -= f * row, in place."""
    for c, v in row.items():
        nv = K.norm(r.get(c, 0) - f * v)
        if nv:
            r[c] = nv
        else:
            r.pop(c, None)


def rref(rows, K: Field = QQ):
    """Reduced row echelon form of sparse rows: (rows, pivot columns)."""
    piv: dict = {}
    for r0 in rows:
        r = {c: K.coerce(v) for c, v in r0.items() if K.coerce(v)}
        for c in sorted(c for c in r if c in piv):
            if c in r:
                _axpy(r, r[c], piv[c], K)
        # pivots may have been reintroduced by fill-in; repeat until clean
        hit = [c for c in r if c in piv]
        while hit:
            _axpy(r, r[hit[0]], piv[hit[0]], K)
            hit = [c for c in r if c in piv]
        if not r:
            continue
        c = min(r)
        inv = K.inv(r[c])
        r = {cc: K.norm(v * inv) for cc, v in r.items()}
        for pr in piv.values():
            if c in pr:
                _axpy(pr, pr[c], r, K)
        piv[c] = r
    cols = sorted(piv)
    return [piv[c] for c in cols], cols


def rank(rows, K: Field = QQ) -> int:
    return len(rref(rows, K)[1])


def nullspace(rows, ncols: int, K: Field = QQ):
    """Basis of {x : row . x = 0 for all rows}."""
    R, pivs = rref(rows, K)
    ps = set(pivs)
    one = K.coerce(1)
    out = []
    for f in range(ncols):
        if f in ps:
            continue
        v = {f: one}
        for r, p in zip(R, pivs):
            if f in r:
                v[p] = K.norm(-r[f])
        out.append(v)
    return out


def reduce_vec(v, R, pivs, K: Field = QQ):
    v = {c: K.coerce(x) for c, x in v.items() if K.coerce(x)}
    for r, p in zip(R, pivs):
        if p in v:
            _axpy(v, v[p], r, K)
    return v


def pullback(F: dict, v: dict, K: Field = QQ) -> dict:
    """Transpose of the chain map F (col -> {row: coef}) applied to a cochain."""
    out = {}
    for c, col in F.items():
        s = 0
        for r, x in col.items():
            if r in v:
                s += x * v[r]
        s = K.coerce(s)
        if s:
            out[c] = s
    return out


def matmul(A, B, K: Field = QQ):
    n, m, k = len(A), len(B), len(B[0]) if B else 0
    out = [[K.zero()] * k for _ in range(n)]
    for i in range(n):
        Ai = A[i]
        for t in range(m):
            a = Ai[t]
            if a:
                Bt = B[t]
                row = out[i]
                for j in range(k):
                    if Bt[j]:
                        row[j] = K.norm(row[j] + a * Bt[j])
    return out


def dense_rank(A, K: Field = QQ) -> int:
    return rank([{j: v for j, v in enumerate(r) if v} for r in A], K)


def charpoly(A) -> list:
    """Characteristic polynomial over Q, integer coefficients low degree first."""
    n = len(A)
    if n == 0:
        return [1]
    A = [[Fraction(x) for x in r] for r in A]
    # Faddeev-LeVerrier
    M = [[Fraction(0)] * n for _ in range(n)]
    c = [Fraction(1)]
    ck = Fraction(1)
    for k in range(1, n + 1):
        AM = matmul(A, M)
        M = [[AM[i][j] + (ck if i == j else 0) for j in range(n)] for i in range(n)]
        AM = matmul(A, M)
        ck = -sum(AM[i][i] for i in range(n)) / k
        c.append(ck)
    hi_first = c
    out = [x for x in reversed(hi_first)]
    if any(x.denominator != 1 for x in out):
        raise ValueError("characteristic polynomial is not integral")
    return [int(x) for x in out]


def factor_integer_roots(poly: list, candidates=(0, 1, -1, 2, -2, 4, -4, 3, -3)):
    """Split off (x - r)^e for small integer r; returns ({r: e}, remaining poly)."""
    roots: dict = {}
    p = list(poly)
    for r in candidates:
        while len(p) > 1:
            q, rem = _divide_linear(p, r)
            if rem != 0:
                break
            roots[r] = roots.get(r, 0) + 1
            p = q
    return roots, p


def _divide_linear(p, r):
    # p low first; divide by (x - r)
    n = len(p) - 1
    q = [0] * n
    acc = 0
    for i in range(n, 0, -1):
        acc = p[i] + acc * r if i < n else p[n]
        q[i - 1] = acc
    rem = p[0] + acc * r
    return q, rem


# ---------------------------------------------------------------- Smith form

def smith_invariants(A) -> list:
    """Nonzero invariant factors of an integer matrix (dense list of rows)."""
    M = [list(map(int, r)) for r in A if any(r)]
    if not M:
        return []
    nr = len(M)
    nc = len(M[0])
    out = []
    t = 0
    while t < min(nr, nc):
        # pivot: smallest nonzero entry in the remaining block
        best = None
        for i in range(t, nr):
            row = M[i]
            for j in range(t, nc):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        M[t], M[i] = M[i], M[t]
        for row in M:
            row[t], row[j] = row[j], row[t]
        while True:
            p = M[t][t]
            done = True
            for i in range(t + 1, nr):
                v = M[i][t]
                if v:
                    q = v // p
                    if q:
                        rt = M[t]
                        ri = M[i]
                        for j in range(t, nc):
                            if rt[j]:
                                ri[j] -= q * rt[j]
                    if M[i][t]:
                        done = False
            rt = M[t]
            for j in range(t + 1, nc):
                v = rt[j]
                if v:
                    q = v // p
                    if q:
                        for row in M[t:]:
                            if row[t]:
                                row[j] -= q * row[t]
                    if rt[j]:
                        done = False
            if done:
                # divisibility of the remaining block
                bad = None
                for i in range(t + 1, nr):
                    for j in range(t + 1, nc):
                        if M[i][j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                for j in range(t, nc):
                    M[t][j] += M[bad][j]
                continue
            # move the smallest entry of row/column t to the pivot
            best = (abs(p), t, t)
            for i in range(t + 1, nr):
                if M[i][t] and abs(M[i][t]) < best[0]:
                    best = (abs(M[i][t]), i, t)
            for j in range(t + 1, nc):
                if M[t][j] and abs(M[t][j]) < best[0]:
                    best = (abs(M[t][j]), t, j)
            _, i, j = best
            M[t], M[i] = M[i], M[t]
            for row in M:
                row[t], row[j] = row[j], row[t]
        out.append(abs(M[t][t]))
        t += 1
    return out
