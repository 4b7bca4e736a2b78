"""Odd-degree hyperelliptic curves over Z_p and their decent models.

A model is decent when every Q_p-point of the curve reduces onto a smooth
F_p-point.  Starting from the standard compactification of y^2 = f(x),
each residue column c of an affine patch y^2 = h(x) is classified by the
congruences of a = h(c) and b = h'(c):

  * p does not divide b: the column is smooth (x-derivative is a unit);
  * p | b, p does not divide a: smooth for odd p via the y-derivative;
    at p = 2 the patch is y^2 + 2y = (a-1) + bx + ..., with a unique
    F_2-point on the column, regular-not-smooth when a = 3 mod 4 and
    blown up into the everywhere-smooth chart y'^2 + y' = (a-1)/4 +
    (b/2) x' + c2 x'^2 + ... when a = 1 mod 4;
  * p | b, p | a but p^2 does not: regular but not smooth, no points
    reduce there;
  * p^2 | a (including a = 0): recurse into y^2 = p^-2 h(c + p x).

Smooth-point counts per column follow the same classification; infinity
always contributes exactly one smooth point (the second chart of the
standard compactification reads y^2 = x + a_1 x^2 + ... near x = 0).
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    DepthGuardExceeded,
    InsufficientPrecision,
    InvalidCurve,
    LandsOnNonSmooth,
)
from .padic import PadicNumber, is_prime, legendre, padic_sqrt, vp_int
from .polyutil import discriminant, poly_derivative, poly_eval, taylor_shift

CASE_UNIT_DERIVATIVE = "unit-derivative"
CASE_UNIT_VALUE = "unit-value"
CASE_REGULAR_NOT_SMOOTH = "unit-value/regular-not-smooth"
CASE_BLOWN_UP = "unit-value/blown-up-smooth"
CASE_SIMPLE_ZERO = "simple-zero"
CASE_RECURSE = "recurse"
CASE_TRUNCATED = "recurse-truncated"


@dataclass(frozen=True)
class CurveInput:
    """y^2 = f(x) with f monic of degree 2g+1; coefficients a_1 ... a_{2g+1}."""

    prime: int
    genus: int
    coeffs: tuple  # (a_1, ..., a_{2g+1}), integers

    def __post_init__(self):
        if not is_prime(self.prime):
            raise InvalidCurve(f"{self.prime} is not prime")
        if self.genus < 1:
            raise InvalidCurve("genus must be >= 1")
        if len(self.coeffs) != 2 * self.genus + 1:
            raise InvalidCurve(
                f"need {2 * self.genus + 1} coefficients, got {len(self.coeffs)}"
            )

    def f_ascending(self):
        return [self.coeffs[-1 - i] for i in range(len(self.coeffs))] + [1]

    def disc(self):
        return discriminant(self.f_ascending())


@dataclass(frozen=True)
class ColumnRecord:
    case: str
    smooth_count: int
    child: object = None  # PatchNode for the recurse case
    child_h: tuple = None  # ascending coefficients of p^-2 h(c + p x)
    blowup_rhs: tuple = None  # (a', b', c2) mod 2 for the p = 2 chart


@dataclass(frozen=True)
class PatchNode:
    depth: int
    h: tuple  # ascending coefficients
    precision: object  # known mod p^precision; None means exact integers
    columns: tuple  # ColumnRecord per residue c = 0, ..., p-1
    parent_column: object = None  # residue c this patch descended from


@dataclass(frozen=True)
class DecentModel:
    prime: int
    root: PatchNode
    total_smooth: int
    max_depth_reached: int
    guard_hit: bool
    infinity_count: int = 1


def _sqrt_count_fp(a, p, units_only=False):
    a %= p
    if p == 2:
        return 1  # y -> y^2 is a bijection on F_2
    if a == 0:
        return 0 if units_only else 1
    return 2 if legendre(a, p) == 1 else 0


def classify_column(h, c, p, precision=None) -> ColumnRecord:
    """Case analysis for the residue column x = c of the patch y^2 = h(x).

    `h` has ascending integer coefficients, exact or known mod p^precision.
    """
    if precision is not None and precision < 3:
        raise InsufficientPrecision(
            f"column classification needs h mod p^3, have p^{precision}"
        )
    mod = p**precision if precision is not None else None

    def ev(poly, x, m):
        r = 0
        for coeff in reversed(poly):
            r = r * x + coeff
            if m is not None:
                r %= m
        return r

    a = ev(h, c, mod)
    b = ev(poly_derivative(h), c, mod)
    if b % p != 0:
        return ColumnRecord(CASE_UNIT_DERIVATIVE, _sqrt_count_fp(a, p))
    if a % p != 0:
        if p != 2:
            return ColumnRecord(CASE_UNIT_VALUE, _sqrt_count_fp(a, p, units_only=True))
        if a % 4 == 3:
            return ColumnRecord(CASE_REGULAR_NOT_SMOOTH, 0)
        # a = 1 mod 4: the blown-up chart y'^2 + y' = (a-1)/4 + (b/2)x' + c2 x'^2
        c2 = sum(
            (j * (j - 1) // 2) * coeff * pow(c, j - 2, 4) for j, coeff in enumerate(h) if j >= 2
        )
        rhs = (((a - 1) // 4) % 2, ((b // 2)) % 2, c2 % 2)
        zeros = sum(1 for x in (0, 1) if (rhs[0] + rhs[1] * x + rhs[2] * x * x) % 2 == 0)
        return ColumnRecord(CASE_BLOWN_UP, 2 * zeros, blowup_rhs=rhs)
    if a % (p * p) != 0:
        return ColumnRecord(CASE_SIMPLE_ZERO, 0)
    # p^2 | a (including exact zero): descend into y^2 = p^-2 h(c + p x)
    shifted = taylor_shift(list(h), c)
    child = []
    for k, t in enumerate(shifted):
        value = t * p**k
        assert value % (p * p) == 0 or mod is not None
        child.append((value // (p * p)) % (mod // (p * p)) if mod is not None else value // (p * p))
    return ColumnRecord(CASE_RECURSE, 0, child_h=tuple(child))


def build_patch_tree(
    p, h, precision, depth_guard, beyond_guard="error", depth=0, parent_column=None
):
    """Recursively classify all columns; returns (node, smooth_sum, max_depth, guard_hit)."""
    records = []
    total = 0
    deepest = depth
    guard_hit = False
    for c in range(p):
        rec = classify_column(h, c, p, precision)
        if rec.case == CASE_RECURSE:
            if depth + 1 > depth_guard:
                if beyond_guard == "truncate":
                    rec = ColumnRecord(CASE_TRUNCATED, 0)
                    guard_hit = True
                    records.append(rec)
                    continue
                raise DepthGuardExceeded(
                    f"blow-up recursion needs depth > {depth_guard}"
                )
            child_prec = None if precision is None else precision - 2
            node, sub_total, sub_deep, sub_hit = build_patch_tree(
                p, rec.child_h, child_prec, depth_guard, beyond_guard, depth + 1, c
            )
            rec = dataclasses.replace(rec, child=node)
            total += sub_total
            deepest = max(deepest, sub_deep)
            guard_hit = guard_hit or sub_hit
        else:
            total += rec.smooth_count
        records.append(rec)
    node = PatchNode(depth, tuple(h), precision, tuple(records), parent_column)
    return node, total, deepest, guard_hit


def make_decent_model(curve: CurveInput, depth_guard=None, beyond_guard="error") -> DecentModel:
    p = curve.prime
    f = curve.f_ascending()
    disc = curve.disc()
    if disc == 0:
        raise InvalidCurve("discriminant vanishes")
    if depth_guard is None:
        depth_guard = vp_int(disc, p) // 2 + 2
    root, affine_total, deepest, guard_hit = build_patch_tree(
        p, f, None, depth_guard, beyond_guard
    )
    return DecentModel(
        prime=p,
        root=root,
        total_smooth=1 + affine_total,
        max_depth_reached=deepest,
        guard_hit=guard_hit,
    )


def column_subtree_count(rec: ColumnRecord) -> int:
    """Smooth points above one column, summed through blow-up descents."""
    if rec.case == CASE_RECURSE and rec.child is not None:
        return sum(column_subtree_count(r) for r in rec.child.columns)
    return rec.smooth_count


# ----------------------------------------------------------------- points


def sample_curve_point(curve: CurveInput, rng, precision=None):
    """Draw x uniformly from Z_p digits and lift y when f(x) is a square.

    Returns (x, y) with x an integer mod p^precision and y a PadicNumber,
    or None when f(x) is not a square in Q_p.
    """
    p = curve.prime
    if precision is None:
        precision = 2 * (vp_int(curve.disc(), p) // 2 + 2) + 8
    x = rng.randrange(p**precision)
    fx = poly_eval(curve.f_ascending(), x)
    if fx == 0:
        return (x, PadicNumber.exact_zero(p))
    v = vp_int(fx, p)
    if v % 2:
        return None
    unit = fx // p**v
    if p == 2:
        if unit % 8 != 1:
            return None
    elif legendre(unit, p) != 1:
        return None
    value = PadicNumber.from_unit(p, v, unit, v + precision)
    return (x, padic_sqrt(value))


def reduce_point(model: DecentModel, pt):
    """Walk a curve point down the patch tree to the smooth F_p-point it
    reduces to; raises LandsOnNonSmooth if decency would be violated."""
    p = model.prime
    if pt == "infinity":
        return ("infinity", (0, 0))
    x, y = pt
    node = model.root
    path = []
    while True:
        c = x % p
        rec = node.columns[c]
        path.append(c)
        if rec.case == CASE_UNIT_DERIVATIVE:
            return (tuple(path), (c, y.residue(1)))
        if rec.case == CASE_UNIT_VALUE:
            return (tuple(path), (c, y.residue(1)))
        if rec.case in (CASE_REGULAR_NOT_SMOOTH, CASE_SIMPLE_ZERO):
            raise LandsOnNonSmooth(f"point reduces into case {rec.case} at path {path}")
        if rec.case == CASE_BLOWN_UP:
            one = PadicNumber.from_unit(2, 0, 1, y.abs_precision)
            yprime = (y - one).scale_fraction(Fraction(1, 2))
            xprime = (x - c) // p
            xm, ym = xprime % 2, yprime.residue(1)
            a1, b1, c2 = rec.blowup_rhs
            if (a1 + b1 * xm + c2 * xm * xm) % 2 != 0:
                raise LandsOnNonSmooth(
                    f"point lands off the counted blow-up chart at path {path}"
                )
            return (tuple(path) + ("blowup",), (xm, ym))
        if rec.case == CASE_TRUNCATED:
            raise DepthGuardExceeded(f"reduction needs the truncated branch at {path}")
        # recurse
        x = (x - c) // p
        y = y.scale_fraction(Fraction(1, p))
        node = rec.child


# ----------------------------------------------------------------- height


def height(coeffs) -> float:
    """max(|a_1|, |a_2|^(1/2), ..., |a_{2g+1}|^(1/(2g+1))), compared exactly."""
    best = None  # (|a|, m) maximal under |a|^(1/m)
    for m, a in enumerate(coeffs, start=1):
        if a == 0:
            continue
        cand = (abs(a), m)
        if best is None or best[0] ** cand[1] < cand[0] ** best[1]:
            best = cand
    if best is None:
        return 0.0
    a, m = best
    r = round(a ** (1.0 / m))
    for rr in (r - 1, r, r + 1):
        if rr >= 0 and rr**m == a:
            return float(rr)
    return a ** (1.0 / m)
