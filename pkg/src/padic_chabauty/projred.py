"""Reduction to P^(g-1)(F_p) and exact, certified images of maps under it.

`image_of_poly_map` computes rho(phi(domain)) for a polynomial map phi =
(f_1 : ... : f_g) by iteratively subdividing the domain into disks until
the reduced map is constant on each disk: recentering a disk onto t0 + p*s,
clearing the common p-content of the recentered polynomials, and reading
the result mod p.  Every emitted disk carries the constant value, so the
certificate is checkable by sampling.

`image_of_series_on_pzp` reduces the analytic case to the polynomial one:
substitute t -> p*t, align the last minimal hull vertex into every
component (an invertible change of basis on the codomain, recorded and
undone on output), factor out the p-content, and replace each component
by its Weierstrass polynomial part, which has the same reduction at every
integral point because the unit cofactors are 1 mod p there.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    AllZeroToPrecision,
    CommonRoot,
    InsufficientPrecision,
    MaxDepthExceeded,
    NUndefined,
)
from .padic import INF, PadicNumber, vp_int
from .polyutil import poly_degree, poly_gcd_q, poly_trim, resultant
from .series import SeriesVector, TruncatedSeries, newton_polygon, weierstrass_prepare


@dataclass(frozen=True, order=True)
class ProjPointFp:
    prime: int
    coords: tuple

    @staticmethod
    def normalize(p, residues) -> "ProjPointFp":
        res = tuple(r % p for r in residues)
        pivot = next((r for r in res if r), None)
        if pivot is None:
            raise ValueError("all coordinates vanish")
        inv = pow(pivot, -1, p)
        return ProjPointFp(p, tuple(r * inv % p for r in res))

    @property
    def dim(self):
        return len(self.coords) - 1

    def transform(self, matrix) -> "ProjPointFp":
        p = self.prime
        new = [
            sum(m * c for m, c in zip(row, self.coords)) % p for row in matrix
        ]
        return ProjPointFp.normalize(p, new)

    def __str__(self):
        return "(" + ":".join(str(c) for c in self.coords) + ")"


def rho(vector) -> ProjPointFp:
    """Reduction of a Q_p-vector: clear the minimal valuation, read mod p."""
    vector = list(vector)
    if not vector:
        raise ValueError("empty vector")
    p = vector[0].prime
    nonzero = [v for v in vector if v.is_nonzero]
    if not nonzero:
        if all(v.is_exact_zero for v in vector):
            raise AllZeroToPrecision("the zero vector has no reduction")
        raise InsufficientPrecision("no coordinate certified nonzero")
    m = min(v.valuation for v in nonzero)
    residues = []
    for v in vector:
        if v.is_exact_zero:
            residues.append(0)
            continue
        scaled = v.scale_fraction(Fraction(p) ** (-m)) if m else v
        residues.append(scaled.residue(1))
    return ProjPointFp.normalize(p, residues)


@dataclass(frozen=True)
class DiskCert:
    chart: str  # "t" for the affine chart, "u" for the chart at infinity
    center: int  # disk = center + p^depth * Z_p in the chart coordinate
    depth: int
    value: ProjPointFp


@dataclass(frozen=True)
class ReductionImage:
    prime: int
    points: tuple  # sorted ProjPointFp
    certificate: tuple  # DiskCert entries partitioning the domain
    max_depth_used: int
    codomain_transform: tuple | None = None  # recorded alignment matrix mod p

    @property
    def size(self):
        return len(self.points)


class _Subdivider:
    """Depth-first disk subdivision in one affine chart."""

    def __init__(self, p, chart, max_depth, offset=0, scale_power=0):
        self.p = p
        self.chart = chart
        self.max_depth = max_depth
        self.offset = offset
        self.scale_power = scale_power
        self.points = set()
        self.certs = []
        self.deepest = 0

    def _emit(self, center, depth, value):
        self.points.add(value)
        self.certs.append(
            DiskCert(
                self.chart,
                (self.offset + self.p**self.scale_power * center)
                % self.p ** (self.scale_power + depth),
                self.scale_power + depth,
                value,
            )
        )

    def run(self, polys):
        self._descend(polys, center=0, depth=0)
        return self

    def _descend(self, polys, center, depth):
        p = self.p
        self.deepest = max(self.deepest, depth)
        content = INF
        for poly in polys:
            for c in poly:
                if c.is_nonzero:
                    content = min(content, c.valuation)
        if content is INF:
            raise InsufficientPrecision(
                "no coefficient certified nonzero during subdivision"
            )
        scaled = [
            [c.scale_fraction(Fraction(p) ** (-content)) if not c.is_exact_zero else c
             for c in poly]
            for poly in polys
        ]
        reduced = [[c.residue(1) for c in poly] for poly in scaled]
        if all(all(r == 0 for r in poly[1:]) for poly in reduced):
            consts = [poly[0] if poly else 0 for poly in reduced]
            self._emit(center, depth, ProjPointFp.normalize(p, consts))
            return
        for s0 in range(p):
            vals = [_eval_fp(poly, s0, p) for poly in reduced]
            sub_center = center + p**depth * s0
            if any(vals):
                self._emit(sub_center, depth + 1, ProjPointFp.normalize(p, vals))
                continue
            if depth + 1 > self.max_depth:
                raise MaxDepthExceeded(
                    f"subdivision needs depth > {self.max_depth}",
                    partial=(sorted(self.points), list(self.certs)),
                )
            child = [_recenter(poly, s0, p) for poly in scaled]
            self._descend(child, sub_center, depth + 1)


def _eval_fp(poly, x, p):
    r = 0
    for c in reversed(poly):
        r = (r * x + c) % p
    return r


def _recenter(poly, s0, p):
    """Coefficients of g(s0 + p*s) from those of g(s)."""
    work = list(poly)
    shifted = []
    if s0 == 0:
        shifted = work
    else:
        for _ in range(len(work)):
            quot = []
            carry = PadicNumber.exact_zero(p)
            for coeff in reversed(work):
                carry = (carry.scale_fraction(s0) if not carry.is_exact_zero else carry) + coeff
                quot.append(carry)
            shifted.append(quot.pop())
            work = list(reversed(quot))
            if not work:
                break
    return [
        c.scale_fraction(Fraction(p**k)) if not c.is_exact_zero else c
        for k, c in enumerate(shifted)
    ]


def _to_padic_polys(p, polys):
    """Exact rational coefficient lists -> PadicNumber lists, or pass through."""
    exact = all(
        all(isinstance(c, (int, Fraction)) for c in poly) for poly in polys
    )
    if not exact:
        return [list(poly) for poly in polys], None
    maxval = 0
    rational = [[Fraction(c) for c in poly] for poly in polys]
    for poly in rational:
        for c in poly:
            if c != 0:
                maxval = max(maxval, abs(vp_int(c.numerator, p) - vp_int(c.denominator, p)))
    prec = maxval + 8
    out = []
    for poly in rational:
        out.append(
            [
                PadicNumber.exact_zero(p) if c == 0 else PadicNumber.from_fraction(p, c, prec)
                for c in poly
            ]
        )
    return out, rational


def _default_guard(p, rational_polys):
    """2 * (1 + max valuation of nonzero pairwise resultants)."""
    nonzero = [poly_trim(f) for f in rational_polys if poly_trim(f)]
    vals = []
    for i in range(len(nonzero)):
        for j in range(i + 1, len(nonzero)):
            r = resultant(nonzero[i], nonzero[j])
            if r != 0:
                vals.append(max(0, vp_int(r.numerator, p) - vp_int(r.denominator, p)))
    if vals:
        return 2 * (1 + max(vals))
    # degenerate: no pair with nonzero resultant; fall back to coefficient data
    maxv = 0
    for f in nonzero:
        for c in f:
            if c != 0:
                maxv = max(maxv, vp_int(c.numerator, p) - vp_int(c.denominator, p))
    return 2 * (1 + maxv) + 4


def image_of_poly_map(p, polys, domain, max_depth=None) -> ReductionImage:
    """Exact reduction image of (f_1 : ... : f_g) on P1(Q_p), Z_p or pZ_p.

    Coefficients may be exact ints/Fractions (preferred: enables the gcd
    precondition check and the resultant-based depth guard) or PadicNumbers.
    """
    if domain not in ("P1", "Zp", "pZp"):
        raise ValueError(f"unknown domain {domain!r}")
    padic_polys, rational = _to_padic_polys(p, polys)
    live = [i for i, poly in enumerate(padic_polys) if any(not c.is_exact_zero for c in poly)]
    if not live:
        raise AllZeroToPrecision("the map is identically zero")
    if len(live) == 1:
        # a single nonvanishing coordinate: the reduction is the standard
        # point e_i wherever the (partial) map is defined, on any domain
        value = ProjPointFp.normalize(
            p, tuple(1 if i == live[0] else 0 for i in range(len(padic_polys)))
        )
        certs = [DiskCert("t", 0, 0, value)]
        if domain == "pZp":
            certs = [DiskCert("t", 0, 1, value)]
        if domain == "P1":
            certs.append(DiskCert("u", 0, 1, value))
        return ReductionImage(
            prime=p, points=(value,), certificate=tuple(certs), max_depth_used=0
        )
    if rational is not None:
        nonzero = [poly_trim(f) for f in rational if poly_trim(f)]
        gcd = nonzero[0]
        for f in nonzero[1:]:
            gcd = poly_gcd_q(gcd, f)
        if poly_degree(gcd) >= 1:
            raise CommonRoot("components share a nonconstant factor")

    runs = []
    if domain in ("P1", "Zp"):
        guard = max_depth
        if guard is None:
            guard = _default_guard(p, rational) if rational is not None else 16
        runs.append((_Subdivider(p, "t", guard), padic_polys))
    if domain == "pZp":
        guard = max_depth
        if guard is None:
            guard = (_default_guard(p, rational) if rational is not None else 16) + 1
        sub = [_recenter(poly, 0, p) for poly in padic_polys]  # t = p*s
        runs.append((_Subdivider(p, "t", guard, offset=0, scale_power=1), sub))
    if domain == "P1":
        # chart at infinity: u = 1/t ranges over pZ_p; homogenize at the
        # maximal component degree so the chart polynomials share no factor u
        n = max(len(poly_trim_padic(poly)) - 1 for poly in padic_polys)
        rev = []
        for poly in padic_polys:
            padded = list(poly) + [PadicNumber.exact_zero(p)] * (n + 1 - len(poly))
            rev.append(list(reversed(padded[: n + 1])))
        rev_rational = None
        if rational is not None:
            rev_rational = []
            for f in rational:
                padded = list(f) + [Fraction(0)] * (n + 1 - len(f))
                rev_rational.append(list(reversed(padded[: n + 1])))
        guard = max_depth
        if guard is None:
            guard = (_default_guard(p, rev_rational) if rev_rational is not None else 16) + 1
        sub = [_recenter(poly, 0, p) for poly in rev]  # u = p*s
        runs.append((_Subdivider(p, "u", guard, offset=0, scale_power=1), sub))

    points = set()
    certs = []
    deepest = 0
    for subdivider, data in runs:
        subdivider.run(data)
        points.update(subdivider.points)
        certs.extend(subdivider.certs)
        deepest = max(deepest, subdivider.deepest + subdivider.scale_power)
    return ReductionImage(
        prime=p,
        points=tuple(sorted(points)),
        certificate=tuple(certs),
        max_depth_used=deepest,
    )


def poly_trim_padic(poly):
    out = list(poly)
    while out and out[-1].is_exact_zero:
        out.pop()
    return out


def evaluate_poly_map(p, polys, tau) -> ProjPointFp:
    """rho of the map evaluated at one point; oracle for sampling checks."""
    if isinstance(tau, (int, Fraction)):
        values = []
        maxv = 0
        for poly in polys:
            val = Fraction(0)
            for c in reversed([Fraction(x) for x in poly]):
                val = val * Fraction(tau) + c
            values.append(val)
            if val != 0:
                maxv = max(maxv, abs(vp_int(val.numerator, p) - vp_int(val.denominator, p)))
        vec = [
            PadicNumber.exact_zero(p) if v == 0 else PadicNumber.from_fraction(p, v, maxv + 4)
            for v in values
        ]
        return rho(vec)
    vec = []
    for poly in polys:
        acc = PadicNumber.exact_zero(p)
        for c in reversed(poly):
            acc = (acc * tau if not acc.is_exact_zero else acc) + c
        vec.append(acc)
    return rho(vec)


# ------------------------------------------------------- analytic images


def image_of_series_on_pzp(
    l: SeriesVector,
    M: int,
    T: int,
    integrand_tail_bound=None,
    align=True,
    max_depth=None,
) -> ReductionImage:
    """Exact rho(l(pZ_p)) for a vector of truncated series.

    The common structural power of t is removed first (scaling a vector by
    t^k never changes its reduction at t != 0, and the value at 0 is the
    limit of nearby values).  Then L(t) := l(p t) is analyzed on Z_p: the
    codomain basis is changed so the last minimal hull vertex appears in
    every component, each component is replaced by its Weierstrass
    polynomial part, and the polynomial image is computed by subdivision.
    The returned points are mapped back to the original coordinates.
    """
    p = l.prime
    Tw = min(T, l.truncation)
    l = l.map(lambda s: s.truncate(Tw))
    k_removed, l = l.factor_t_power()
    substituted = []
    for s in l.entries:
        coeffs = tuple(
            c.scale_fraction(Fraction(p**n)) if not c.is_exact_zero else c
            for n, c in enumerate(s.coeffs)
        )
        if s.tail_bound is not None and s.tail_bound != INF:
            tail = s.tail_bound + s.truncation
        elif s.tail_bound == INF:
            tail = INF
        elif integrand_tail_bound is not None:
            tail = _integrated_tail(p, s.truncation, integrand_tail_bound, k_removed)
        else:
            tail = None
        substituted.append(TruncatedSeries(p, coeffs, tail))
    L = SeriesVector(tuple(substituted))
    np_obj = newton_polygon(L)
    if not np_obj.N_certified:
        raise NUndefined("last minimal hull index not certified after substitution")
    N_L, m_star = np_obj.N_value, np_obj.min_height

    transform = None
    if align:
        ref = None
        for j, s in enumerate(L.entries):
            c = s.coeffs[N_L] if N_L < s.truncation else None
            if c is not None and c.is_nonzero and c.valuation == m_star:
                ref = j
                break
        matrix = [[1 if i == j else 0 for j in range(L.dimension)] for i in range(L.dimension)]
        entries = list(L.entries)
        for i, s in enumerate(entries):
            if i == ref:
                continue
            c = s.coeffs[N_L] if N_L < s.truncation else None
            has_vertex = c is not None and c.is_nonzero and c.valuation == m_star
            if not has_vertex:
                entries[i] = s + entries[ref]
                matrix[i][ref] = 1
        L = SeriesVector(tuple(entries))
        transform = tuple(tuple(row) for row in matrix)

    polys = []
    for s in L.entries:
        if all(c.is_exact_zero for c in s.coeffs):
            polys.append([PadicNumber.exact_zero(p)])
            continue
        normalized = s.scale_fraction(Fraction(p) ** (-m_star)) if m_star else s
        fac = weierstrass_prepare(normalized, M, Tw)
        polys.append(list(fac.poly_part))

    guard = max_depth if max_depth is not None else max(4, M)
    image = image_of_poly_map(p, polys, "Zp", max_depth=guard)
    points = image.points
    if transform is not None:
        inverse = _invert_unitriangular(transform, p)
        points = tuple(sorted(pt.transform(inverse) for pt in points))
    return ReductionImage(
        prime=p,
        points=points,
        certificate=image.certificate,
        max_depth_used=image.max_depth_used,
        codomain_transform=transform,
    )


def _invert_unitriangular(matrix, p):
    """Inverse of I + sum E_(i,ref) used by the alignment step."""
    g = len(matrix)
    inv = [[1 if i == j else 0 for j in range(g)] for i in range(g)]
    for i in range(g):
        for j in range(g):
            if i != j and matrix[i][j]:
                inv[i][j] = (-matrix[i][j]) % p
    return inv


def _integrated_tail(p, T, integrand_tail, offset=0):
    """Lower bound for v of coefficient n of l(pt) over n >= T, where l is an
    antiderivative with a t^offset factor removed: coefficient n of l came
    from dividing by (n + offset), so v >= n + integrand_tail - v_p(n+offset).

    n - log_p(n + offset) is nondecreasing, so the scan may stop as soon as
    that floor passes the best value found.
    """
    best = None
    n = max(T, 1)
    while True:
        if best is not None and n - _log_floor(n + offset, p) + integrand_tail >= best:
            return best
        val = n + integrand_tail - vp_int(n + offset, p)
        best = val if best is None else min(best, val)
        n += 1


def _log_floor(n, p):
    k = 0
    while p ** (k + 1) <= n:
        k += 1
    return k
