"""Exact polynomial helpers over Z, Q and F_p.

Polynomials are lists of coefficients in ascending order of the power.
Everything here is exact arithmetic; precision-tracked polynomial work
lives with the series and subdivision code.
"""

from __future__ import annotations

from fractions import Fraction


def poly_trim(f):
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def poly_degree(f):
    f = poly_trim(f)
    return len(f) - 1 if f else -1


def poly_eval(f, x):
    r = 0
    for c in reversed(list(f)):
        r = r * x + c
    return r


def poly_derivative(f):
    return [i * c for i, c in enumerate(f)][1:]


def taylor_shift(f, c):
    """Coefficients of f(c + x), by repeated synthetic division by (x - c)."""
    work = list(f)
    out = []
    for _ in range(len(f)):
        quot = []
        carry = 0
        for coeff in reversed(work):
            carry = carry * c + coeff
            quot.append(carry)
        out.append(quot.pop())  # remainder = work(c)
        work = list(reversed(quot))
        if not work:
            break
    return out


def poly_scale_arg(f, s):
    """Coefficients of f(s*x)."""
    return [c * s**i for i, c in enumerate(f)]


def fraction_det(rows):
    """Determinant by exact Gaussian elimination over Q."""
    m = [[Fraction(x) for x in row] for row in rows]
    n = len(m)
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            if m[r][col] == 0:
                continue
            factor = m[r][col] * inv
            for c in range(col, n):
                m[r][c] -= factor * m[col][c]
    return det


def resultant(f, g):
    """Res(f, g) via the Sylvester determinant; exact over Q."""
    f, g = poly_trim(f), poly_trim(g)
    if not f or not g:
        return Fraction(0)
    df, dg = len(f) - 1, len(g) - 1
    if df == 0:
        return Fraction(f[0]) ** dg
    if dg == 0:
        return Fraction(g[0]) ** df
    n = df + dg
    rows = []
    frow = list(reversed(f))  # descending
    grow = list(reversed(g))
    for i in range(dg):
        rows.append([0] * i + frow + [0] * (n - df - 1 - i))
    for i in range(df):
        rows.append([0] * i + grow + [0] * (n - dg - 1 - i))
    return fraction_det(rows)


def discriminant(f):
    """Discriminant of a polynomial with exact coefficients.

    disc(f) = (-1)^(d(d-1)/2) Res(f, f') / lc(f).
    """
    f = poly_trim(f)
    d = len(f) - 1
    if d < 1:
        raise ValueError("discriminant needs degree >= 1")
    r = resultant(f, poly_derivative(f))
    sign = -1 if (d * (d - 1) // 2) % 2 else 1
    val = sign * r / Fraction(f[-1])
    return int(val) if val.denominator == 1 else val


def poly_gcd_q(f, g):
    """Monic gcd over Q by the Euclidean algorithm."""
    a = [Fraction(c) for c in poly_trim(f)]
    b = [Fraction(c) for c in poly_trim(g)]
    while b:
        a, b = b, _poly_mod_q(a, b)
    if not a:
        return []
    lead = a[-1]
    return [c / lead for c in a]


def _poly_mod_q(a, b):
    a = list(a)
    db, lead = len(b) - 1, b[-1]
    while len(a) - 1 >= db and a:
        factor = a[-1] / lead
        shift = len(a) - 1 - db
        for i, c in enumerate(b):
            a[shift + i] -= factor * c
        a = poly_trim(a)
        if not a:
            break
    return poly_trim(a)


# ------------------------------------------------------------- F_p helpers


def poly_mod_p(f, p):
    return poly_trim([c % p for c in f])


def poly_eval_fp(f, x, p):
    r = 0
    for c in reversed(f):
        r = (r * x + c) % p
    return r


def poly_mul_fp(f, g, p):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return poly_trim(out)


def poly_mod_fp(a, b, p):
    a = poly_trim([c % p for c in a])
    b = poly_trim([c % p for c in b])
    inv = pow(b[-1], -1, p)
    db = len(b) - 1
    while a and len(a) - 1 >= db:
        factor = a[-1] * inv % p
        shift = len(a) - 1 - db
        for i, c in enumerate(b):
            a[shift + i] = (a[shift + i] - factor * c) % p
        a = poly_trim(a)
    return a


def poly_gcd_fp(f, g, p):
    a = poly_trim([c % p for c in f])
    b = poly_trim([c % p for c in g])
    while b:
        a, b = b, poly_mod_fp(a, b, p)
    if a:
        inv = pow(a[-1], -1, p)
        a = [c * inv % p for c in a]
    return a
