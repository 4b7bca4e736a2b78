"""Residue disks of good-reduction odd-degree hyperelliptic curves and the
reduction image of the logarithm restricted to them.

A good-reduction curve is y^2 = f(x) at an odd prime with unit
discriminant, or y^2 + q(x) y = r(x) at p = 2 with smooth special fiber
(deg r = 2g+1 monic, deg q <= g).  Residue disks correspond to the
F_p-points of the smooth special fiber, including the point at infinity
on the second chart s = 1/x, t = y/x^(g+1).

On each disk the regular 1-forms x^(j-1) dx / (2y + q) expand as w_j(tau)
d tau in a uniformizer tau; at infinity the basis used is s^(j-1) w_1
with w_1 = dt / (R'(s) - Q'(s) t) for the chart equation
t^2 + Q(s) t = R(s).  All expansion coefficients are integral, which
certifies the Newton polygon data and hence n_D, the number of zeros of
the form vector on the open disk.

The full image rho(log(C(Q_p))) is produced only when the curve has a
single residue disk containing the base point at infinity (then the
integration constant vanishes); for other curves per-disk images are
computed with the integration constant taken to be zero, which the
per-disk bounds cover for any constant.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    BadReduction,
    HypothesisFailed,
    InsufficientTruncation,
    UncertifiableHull,
)
from .padic import PadicNumber, vp_int
from .polyutil import (
    discriminant,
    poly_derivative,
    poly_eval_fp,
    poly_gcd_fp,
    poly_mod_p,
    poly_mul_fp,
    poly_trim,
)
from .projred import ReductionImage, image_of_series_on_pzp
from .series import (
    INF,
    SeriesVector,
    TruncatedSeries,
    delta,
    formal_integrate,
    newton_polygon,
)


@dataclass(frozen=True)
class GoodReductionCurve:
    prime: int
    genus: int
    q: tuple  # ascending integer coefficients, degree <= g (all zero if p odd)
    r: tuple  # ascending integer coefficients, monic of degree 2g+1

    def __post_init__(self):
        p, g = self.prime, self.genus
        if len(poly_trim(list(self.r))) - 1 != 2 * g + 1 or self.r[-1] != 1:
            raise BadReduction("r must be monic of degree 2g+1")
        if len(poly_trim(list(self.q))) - 1 > g:
            raise BadReduction("q must have degree <= g")
        if p == 2:
            qbar = poly_mod_p(list(self.q), 2)
            if not qbar:
                raise BadReduction("special fiber of y^2 = r(x) is singular at 2")
            rbar = poly_mod_p(list(self.r), 2)
            sing = poly_gcd_fp(qbar, _singular_locus_poly(qbar, rbar, 2), 2)
            if len(sing) - 1 >= 1:
                raise BadReduction("special fiber has a singular point")
        else:
            if any(self.q):
                raise BadReduction("odd-p curves use the y^2 = f(x) form (q = 0)")
            d = discriminant(list(self.r))
            if d == 0 or vp_int(d, p) != 0:
                raise BadReduction(f"discriminant has positive valuation at {p}")

    @staticmethod
    def from_f(p, genus, f_ascending):
        """y^2 = f(x) at an odd prime of good reduction."""
        return GoodReductionCurve(p, genus, (0,) * (genus + 1), tuple(f_ascending))

    @staticmethod
    def from_qr(genus, q_ascending, r_ascending, prime=2):
        q = tuple(q_ascending) + (0,) * (genus + 1 - len(q_ascending))
        return GoodReductionCurve(prime, genus, q, tuple(r_ascending))

    def infinity_chart(self):
        """(Q(s), R(s)) ascending for t^2 + Q(s) t = R(s), s = 1/x, t = y/x^(g+1)."""
        g = self.genus
        Q = [0] * (g + 2)
        for i, c in enumerate(self.q):
            Q[g + 1 - i] = c
        R = [0] * (2 * g + 3)
        for i, c in enumerate(self.r):
            R[2 * g + 2 - i] = c
        return Q, R


def _singular_locus_poly(qbar, rbar, p):
    # q'^2 * r - r'^2, whose roots shared with q are the singular x's
    dq = poly_derivative(qbar) or [0]
    dr = poly_derivative(rbar) or [0]
    a = poly_mul_fp(poly_mul_fp(dq, dq, p), rbar, p)
    b = poly_mul_fp(dr, dr, p)
    n = max(len(a), len(b))
    a = a + [0] * (n - len(a))
    b = b + [0] * (n - len(b))
    return [(x - y) % p for x, y in zip(a, b)]


@dataclass(frozen=True)
class ResidueDisk:
    prime: int
    chart: str  # "affine" or "infinity"
    center: tuple  # (x, y) residues mod p; (0, 0) on the infinity chart
    uniformizer: str  # "x - x0", "y - y0", or "t"

    @property
    def is_infinity_disk(self):
        return self.chart == "infinity"


def residue_disks(curve: GoodReductionCurve):
    """All F_p-points of the smooth special fiber, one disk each."""
    p = curve.prime
    qbar = [c % p for c in curve.q]
    rbar = [c % p for c in curve.r]
    disks = []
    for x in range(p):
        qx = poly_eval_fp(qbar, x, p)
        rx = poly_eval_fp(rbar, x, p)
        for y in range(p):
            if (y * y + qx * y - rx) % p:
                continue
            # uniformizer: x - x0 where d/dy = 2y + q is a unit, else y - y0
            if (2 * y + qx) % p:
                uni = "x - x0"
            else:
                uni = "y - y0"
            disks.append(ResidueDisk(p, "affine", (x, y), uni))
    disks.sort(key=lambda d: d.center)
    disks.append(ResidueDisk(p, "infinity", (0, 0), "t"))
    return disks


@dataclass(frozen=True)
class DiskExpansion:
    disk: ResidueDisk
    w: SeriesVector  # the g form coefficients w_j(tau)
    n_D: int
    bound: int  # p (n_D + 1 + delta(p, n_D)) + 1
    coordinate_series: dict  # dependent chart coordinate as a series


def _poly_series(p, coeffs, T, prec):
    return TruncatedSeries.from_fractions(p, [Fraction(c) for c in coeffs], T, prec)


def _newton_solve(F, Fprime, start: TruncatedSeries, rounds):
    s = start
    for _ in range(rounds):
        s = s - F(s) * Fprime(s).invert()
    return s


def _lift_root_padic(poly, seed, p, prec):
    """Hensel lift of a simple root of an integer polynomial from F_p."""
    y = PadicNumber.from_fraction(p, seed, prec)
    dpoly = poly_derivative(poly)
    for _ in range(prec.bit_length() + 2):
        val = _eval_padic(poly, y, p, prec)
        if not val.is_nonzero:
            break
        y = y - val / _eval_padic(dpoly, y, p, prec)
    val = _eval_padic(poly, y, p, prec)
    assert not val.is_nonzero or val.valuation >= prec - 1
    return y


def _eval_padic(poly, x, p, prec):
    acc = PadicNumber.exact_zero(p)
    for c in reversed(poly):
        if not acc.is_exact_zero:
            acc = acc * x
        if c:
            acc = acc + PadicNumber.from_fraction(p, c, prec)
    return acc


def expand_at_disk(curve: GoodReductionCurve, disk: ResidueDisk, T=None) -> DiskExpansion:
    """Expand the g regular 1-forms on one residue disk and certify n_D."""
    p, g = curve.prime, curve.genus
    if T is None:
        T = 4 * g + 6
    if T < 2 * g + 2:
        raise InsufficientTruncation(f"need truncation >= {2 * g + 2}")
    prec = T + 8
    rounds = max(4, T.bit_length() + 2)
    if disk.is_infinity_disk:
        Qc, Rc = curve.infinity_chart()
        Q = _poly_series(p, Qc, T, prec)
        R = _poly_series(p, Rc, T, prec)
        dQ = _poly_series(p, poly_derivative(Qc), T, prec)
        dR = _poly_series(p, poly_derivative(Rc), T, prec)
        t_series = _poly_series(p, [0, 1], T, prec)
        t_sq = _poly_series(p, [0, 0, 1], T, prec)

        def F(s):
            return R.compose(s) - t_sq - Q.compose(s) * t_series

        def Fp(s):
            return dR.compose(s) - dQ.compose(s) * t_series

        zero = TruncatedSeries.constant(p, PadicNumber.exact_zero(p), T)
        s = _newton_solve(F, Fp, zero, rounds)
        w1 = Fp(s).invert()
        entries = [w1]
        for _ in range(g - 1):
            entries.append(entries[-1] * s)
        coord = {"s": s}
    else:
        x0r, y0r = disk.center
        if disk.uniformizer == "x - x0":
            # tau = x - x0; solve y(tau) from y^2 + q(x) y = r(x)
            qs = _shift_poly(curve.q, x0r)
            rs = _shift_poly(curve.r, x0r)
            Qx = _poly_series(p, qs, T, prec)
            Rx = _poly_series(p, rs, T, prec)
            two = TruncatedSeries.constant(p, PadicNumber.from_fraction(p, 2, prec), T)

            def G(yv):
                return yv * yv + Qx * yv - Rx

            def Gp(yv):
                return two * yv + Qx

            y0 = _lift_curve_y(curve, x0r, y0r, prec)
            start = TruncatedSeries.constant(p, y0, T)
            yser = _newton_solve(G, Gp, start, rounds)
            denom = (two * yser + Qx).invert()
            xser = _poly_series(p, [x0r, 1], T, prec)
            entries = [denom]
            for _ in range(g - 1):
                entries.append(entries[-1] * xser)
            coord = {"y": yser}
        else:
            # tau = y - y0; solve x(tau) from r(x) - y^2 - q(x) y = 0
            yser = _poly_series(p, [y0r, 1], T, prec)
            rpoly = _poly_series(p, curve.r, T, prec)
            qpoly = _poly_series(p, curve.q, T, prec)
            drpoly = _poly_series(p, poly_derivative(list(curve.r)), T, prec)
            dqpoly = _poly_series(p, poly_derivative(list(curve.q)) or [0], T, prec)

            def F(xv):
                return rpoly.compose(xv) - yser * yser - qpoly.compose(xv) * yser

            def Fp(xv):
                return drpoly.compose(xv) - dqpoly.compose(xv) * yser

            x0 = _lift_curve_x(curve, x0r, y0r, prec)
            start = TruncatedSeries.constant(p, x0, T)
            xser = _newton_solve(F, Fp, start, rounds)
            # omega_j = x^(j-1) dx/(2y+q) = x^(j-1) dtau/(r'(x) - q'(x) y)
            denom = Fp(xser).invert()
            entries = [denom]
            for _ in range(g - 1):
                entries.append(entries[-1] * xser)
            coord = {"x": xser}

    cleaned = []
    for e in entries:
        assert all(
            c.is_exact_zero or c.lower_valuation_bound() >= 0 for c in e.coeffs
        ), "disk expansion must be integral"
        capped = tuple(
            c if c.is_exact_zero else c.with_abs_precision(min(c.abs_precision, prec - 4))
            for c in e.coeffs
        )
        # the true expansions are integral: the chart relation has Z_p
        # coefficients and the solved coordinate enters with unit Jacobian
        cleaned.append(TruncatedSeries(p, capped, 0))
    w = SeriesVector(tuple(cleaned))
    n_D = newton_polygon(w).min_span()[0]
    bound = p * (n_D + 1 + delta(p, n_D)) + 1
    return DiskExpansion(disk=disk, w=w, n_D=n_D, bound=bound, coordinate_series=coord)


def poly_eval_int(poly, x):
    r = 0
    for c in reversed(poly):
        r = r * x + c
    return r


def _shift_poly(poly, c):
    from .polyutil import taylor_shift

    return taylor_shift(list(poly), c)


def _lift_curve_y(curve, x0, y0_residue, prec):
    """y above x = x0 on y^2 + q y = r, y = y0 mod p, via Hensel."""
    p = curve.prime
    qx = poly_eval_int(curve.q, x0)
    rx = poly_eval_int(curve.r, x0)
    # root of Y^2 + qx Y - rx with unit derivative 2 y0 + qx
    return _lift_root_padic([-rx, qx, 1], y0_residue, p, prec)


def _lift_curve_x(curve, x0_residue, y0_residue, prec):
    """x near x0 with (x, y0) on the curve, y0 the integer lift of the
    center's y-residue; the x-derivative is a unit on y-uniformizer disks."""
    p = curve.prime
    # r(x) - y0^2 - q(x) y0
    poly = list(curve.r)
    poly[0] -= y0_residue * y0_residue
    for i, c in enumerate(curve.q):
        poly[i] -= c * y0_residue
    return _lift_root_padic(poly, x0_residue, p, prec)


# ----------------------------------------------------------------- reports


@dataclass(frozen=True)
class DiskReport:
    curve: GoodReductionCurve
    expansions: tuple
    sum_n_D: int
    disk_count: int


def disk_report(curve: GoodReductionCurve, T=None) -> DiskReport:
    expansions = []
    for disk in residue_disks(curve):
        expansions.append(_expand_retry(curve, disk, T))
    return DiskReport(
        curve=curve,
        expansions=tuple(expansions),
        sum_n_D=sum(e.n_D for e in expansions),
        disk_count=len(expansions),
    )


def _expand_retry(curve, disk, T):
    g = curve.genus
    base = T if T is not None else 4 * g + 6
    last = None
    for scale in (1, 2, 4):
        try:
            return expand_at_disk(curve, disk, base * scale)
        except UncertifiableHull as exc:
            last = exc
    raise last


def per_disk_image(curve, expansion: DiskExpansion, M=None) -> ReductionImage:
    """rho of the locally integrated logarithm on one disk, integration
    constant zero."""
    T = expansion.w.truncation
    if M is None:
        M = T
    ell = formal_integrate(expansion.w)
    return image_of_series_on_pzp(ell, M, T, integrand_tail_bound=0)


# ------------------------------------------------------------- hypotheses


@dataclass(frozen=True)
class HypothesesReport:
    smooth_fiber: bool
    single_disk: bool
    involution_fixes_only_infinity: bool
    two_torsion: str  # "pass" or "inconclusive"
    details: dict

    def all_pass(self):
        return (
            self.smooth_fiber
            and self.single_disk
            and self.involution_fixes_only_infinity
            and self.two_torsion == "pass"
        )


def verify_hypotheses(curve: GoodReductionCurve) -> HypothesesReport:
    """The checks behind the single-disk image computation at p = 2."""
    if curve.prime != 2:
        raise HypothesisFailed("prime", "hypothesis checks are for p = 2")
    qbar = poly_mod_p(list(curve.q), 2)
    rbar = poly_mod_p(list(curve.r), 2)
    smooth = bool(qbar) and len(poly_gcd_fp(qbar, _singular_locus_poly(qbar, rbar, 2), 2)) - 1 < 1
    affine_points = [
        (x, y)
        for x in range(2)
        for y in range(2)
        if (y * y + poly_eval_fp(qbar, x, 2) * y - poly_eval_fp(rbar, x, 2)) % 2 == 0
    ]
    single = not affine_points
    # the reduced involution (x, y) -> (x, y + q(x)) fixes a point over the
    # algebraic closure iff q has a root there, so q must be a nonzero
    # constant mod 2 (deg q <= g keeps infinity the only fixed point)
    involution = len(qbar) == 1
    # completed square f = r + q^2/4: a one-segment Newton polygon without
    # interior lattice points certifies irreducibility over Q_2
    f = [Fraction(c) for c in curve.r]
    for i, a in enumerate(curve.q):
        for j, b in enumerate(curve.q):
            f[i + j] += Fraction(a * b, 4)
    pts = [
        (i, vp_int(c.numerator, 2) - vp_int(c.denominator, 2))
        for i, c in enumerate(f)
        if c != 0
    ]
    hull = _lower_hull_pts(pts)
    deg = 2 * curve.genus + 1
    one_segment = (
        len(hull) == 2
        and hull[0][0] == 0
        and hull[1] == (deg, 0)
        and _gcd(deg, abs(hull[0][1])) == 1
    )
    two_torsion = "pass" if one_segment else "inconclusive"
    return HypothesesReport(
        smooth_fiber=smooth,
        single_disk=single,
        involution_fixes_only_infinity=involution,
        two_torsion=two_torsion,
        details={
            "affine_fiber_points": affine_points,
            "completed_square_hull": hull,
        },
    )


def _lower_hull_pts(pts):
    pts = sorted(pts)
    hull = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (pt[1] - y1) - (y2 - y1) * (pt[0] - x1) <= 0:
                hull.pop()
            else:
                break
        hull.append(pt)
    return hull


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


@dataclass(frozen=True)
class RhoLogResult:
    curve: GoodReductionCurve
    hypotheses: HypothesesReport | None
    expansions: tuple
    images: tuple  # per-disk ReductionImage
    union: tuple | None  # sorted ProjPointFp, the full image when certified
    sum_n_D: int
    constants_assumed_zero: bool


def rholog_single_disk_curve(curve: GoodReductionCurve, T=None, M=None) -> RhoLogResult:
    """rho(log(C(Q_2))) for a p = 2 curve whose special fiber has only the
    point at infinity; all hypotheses are certified first."""
    report = verify_hypotheses(curve)
    if not report.smooth_fiber:
        raise HypothesisFailed("SmoothFiber", "special fiber is singular")
    if not report.single_disk:
        raise HypothesisFailed("MultipleDisks", "C(F_2) has affine points")
    if not report.involution_fixes_only_infinity:
        raise HypothesisFailed("Involution", "reduced involution has affine fixed points")
    if report.two_torsion != "pass":
        raise HypothesisFailed("TwoTorsion", "irreducibility check inconclusive")
    disks = residue_disks(curve)
    expansion = _expand_retry(curve, disks[0], T)
    image = per_disk_image(curve, expansion, M)
    return RhoLogResult(
        curve=curve,
        hypotheses=report,
        expansions=(expansion,),
        images=(image,),
        union=tuple(sorted(image.points)),
        sum_n_D=expansion.n_D,
        constants_assumed_zero=False,  # the base point lies in the unique disk
    )


def rholog_report(curve: GoodReductionCurve, T=None, M=None) -> RhoLogResult:
    """Per-disk images with integration constants zero, for any good-
    reduction curve; the union is a surrogate bounded by the same per-disk
    bounds but is only the true image in the certified single-disk case."""
    expansions = []
    images = []
    for disk in residue_disks(curve):
        e = _expand_retry(curve, disk, T)
        expansions.append(e)
        images.append(per_disk_image(curve, e, M))
    union = sorted(set().union(*[set(img.points) for img in images]))
    return RhoLogResult(
        curve=curve,
        hypotheses=None,
        expansions=tuple(expansions),
        images=tuple(images),
        union=tuple(union),
        sum_n_D=sum(e.n_D for e in expansions),
        constants_assumed_zero=True,
    )
