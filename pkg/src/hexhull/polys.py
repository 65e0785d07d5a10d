"""Integer polynomials and power series, coefficient lists low degree first."""
from __future__ import annotations

from fractions import Fraction


def poly_mul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return out


def poly_pow(p, e: int):
    out = [1]
    for _ in range(e):
        out = poly_mul(out, p)
    return out


def poly_trim(p):
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def series_div(num, den, n: int):
    """First n coefficients of num/den; den[0] must be nonzero."""
    if not den or den[0] == 0:
        raise ZeroDivisionError("constant term of the denominator is zero")
    out = []
    rem = [Fraction(c) for c in num] + [Fraction(0)] * n
    d0 = Fraction(den[0])
    for i in range(n):
        c = rem[i] / d0
        out.append(c)
        if c:
            for j, b in enumerate(den):
                if i + j < len(rem):
                    rem[i + j] -= c * b
    return out


def log_derivative_coeffs(p, n: int):
    """Coefficients 1..n of z p'(z) / p(z)."""
    dp = [k * c for k, c in enumerate(p)]  # z p'(z)
    s = series_div(dp, p, n + 1)
    return s[1:]


def log_series_counts(num, den, n: int):
    """a_1..a_n with exp(sum a_m z^m / m) = num/den, as integers."""
    a = [x - y for x, y in zip(log_derivative_coeffs(num, n), log_derivative_coeffs(den, n))]
    out = []
    for v in a:
        if v.denominator != 1:
            raise ValueError("non-integral periodic point count")
        out.append(int(v))
    return out


def exp_series(a, n: int):
    """Coefficients 0..n of exp(sum a_m z^m / m)."""
    c = [Fraction(1)] + [Fraction(0)] * n
    # c_k = (1/k) sum_{m=1..k} a_m c_{k-m}
    for k in range(1, n + 1):
        c[k] = sum(Fraction(a[m - 1]) * c[k - m] for m in range(1, k + 1) if m <= len(a)) / k
    return c


def roots_poly(roots: dict):
    """Monic polynomial prod (x - r)^e, coefficients low first."""
    out = [1]
    for r, e in sorted(roots.items()):
        out = poly_mul(out, poly_pow([-r, 1], e))
    return out
