"""Truncated power series over Q_p: arithmetic, certified Newton polygons,
zero counting on the open unit disk, Weierstrass preparation, and the
delta correction term used in per-disk image bounds.

A series is known modulo t^T with each coefficient carrying its own
p-adic precision.  The field `tail_bound` is a certified lower bound on
the valuation of every coefficient of index >= T (INF for exact
polynomials, None when nothing is known); this is what makes Newton
polygon data certifiable from finite information.

Hull certification model: coefficients certified nonzero pin exact
lattice points; a coefficient that is only zero-to-precision N may hide
a point anywhere at height >= N, and indices beyond T may hide points at
height >= tail_bound.  A hull feature is certified when no admissible
hidden point can change it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    AllZeroToPrecision,
    InsufficientPrecision,
    MinimumNotAttained,
    NUndefined,
    PrecisionExhausted,
    UncertifiableHull,
)
from .padic import INF, PadicNumber, vp_int

UNBOUNDED = "unbounded-within-truncation"


def _min_tail(*bounds):
    """min of tail bounds where None means 'unknown' and poisons."""
    out = INF
    for b in bounds:
        if b is None:
            return None
        out = min(out, b)
    return out


@dataclass(frozen=True)
class TruncatedSeries:
    prime: int
    coeffs: tuple
    tail_bound: object = INF  # int | INF | None

    def __post_init__(self):
        for c in self.coeffs:
            if c.prime != self.prime:
                raise ValueError("coefficient prime mismatch")

    # ------------------------------------------------------------ creation

    @staticmethod
    def from_fractions(p, values, truncation, abs_precision, tail_bound=INF):
        """Series with exactly-known rational coefficients.

        Zero entries are structural zeros; entries beyond the given list
        are exact zeros as well (polynomial semantics).
        """
        vals = list(values) + [Fraction(0)] * (truncation - len(values))
        coeffs = []
        for v in vals[:truncation]:
            v = Fraction(v)
            if v == 0:
                coeffs.append(PadicNumber.exact_zero(p))
            else:
                coeffs.append(PadicNumber.from_fraction(p, v, abs_precision))
        return TruncatedSeries(p, tuple(coeffs), tail_bound)

    @staticmethod
    def constant(p, value: PadicNumber, truncation):
        pad = [PadicNumber.exact_zero(p)] * (truncation - 1)
        return TruncatedSeries(p, (value, *pad), INF)

    # ---------------------------------------------------------- inspection

    @property
    def truncation(self):
        return len(self.coeffs)

    def coeff_lower_bounds(self):
        return [c.lower_valuation_bound() for c in self.coeffs]

    def global_lower_bound(self):
        """Certified lower bound on the valuation of every coefficient."""
        bounds = self.coeff_lower_bounds()
        if self.tail_bound is None:
            return None
        lo = min(bounds) if bounds else INF
        return min(lo, self.tail_bound)

    def tail_from(self, index):
        """Lower valuation bound over coefficients of index >= index."""
        if self.tail_bound is None:
            return None
        lo = self.tail_bound
        for c in self.coeffs[index:]:
            lo = min(lo, c.lower_valuation_bound())
        return lo

    def is_identically_zero(self):
        return all(c.is_exact_zero for c in self.coeffs) and self.tail_bound == INF

    def t_order_of_exact_zeros(self):
        """Number of leading coefficients that are structural zeros."""
        k = 0
        for c in self.coeffs:
            if not c.is_exact_zero:
                break
            k += 1
        return k

    def __repr__(self):
        return f"TruncatedSeries(p={self.prime}, T={self.truncation}, tail={self.tail_bound})"

    # ---------------------------------------------------------- arithmetic

    def _zip_T(self, other):
        if self.prime != other.prime:
            raise ValueError("prime mismatch")
        return min(self.truncation, other.truncation)

    def __add__(self, other):
        T = self._zip_T(other)
        coeffs = tuple(a + b for a, b in zip(self.coeffs[:T], other.coeffs[:T]))
        tail = _min_tail(self.tail_from(T), other.tail_from(T))
        return TruncatedSeries(self.prime, coeffs, tail)

    def __neg__(self):
        return TruncatedSeries(self.prime, tuple(-c for c in self.coeffs), self.tail_bound)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        T = self._zip_T(other)
        p = self.prime
        out = [PadicNumber.exact_zero(p) for _ in range(T)]
        for i, a in enumerate(self.coeffs[:T]):
            if a.is_exact_zero:
                continue
            for j, b in enumerate(other.coeffs[: T - i]):
                if b.is_exact_zero:
                    continue
                out[i + j] = out[i + j] + a * b
        ga, gb = self.global_lower_bound(), other.global_lower_bound()
        tail = None if ga is None or gb is None else (INF if ga == INF and gb == INF else ga + gb)
        if self.tail_bound == INF and other.tail_bound == INF and \
                self.truncation + other.truncation - 1 <= T:
            tail = INF
        return TruncatedSeries(p, tuple(out), tail)

    def scale(self, c: PadicNumber):
        coeffs = tuple(a * c if not a.is_exact_zero else a for a in self.coeffs)
        shift = c.lower_valuation_bound()
        tail = None if self.tail_bound is None else (
            INF if self.tail_bound == INF or shift == INF else self.tail_bound + shift
        )
        return TruncatedSeries(self.prime, coeffs, tail)

    def scale_fraction(self, fr):
        fr = Fraction(fr)
        if fr == 0:
            return TruncatedSeries(
                self.prime,
                tuple(PadicNumber.exact_zero(self.prime) for _ in self.coeffs),
                INF,
            )
        coeffs = tuple(a.scale_fraction(fr) for a in self.coeffs)
        w = vp_int(fr.numerator, self.prime) - vp_int(fr.denominator, self.prime)
        tail = None if self.tail_bound is None else (
            INF if self.tail_bound == INF else self.tail_bound + w
        )
        return TruncatedSeries(self.prime, coeffs, tail)

    def shift_t(self, k):
        """Multiply by t^k."""
        pad = tuple(PadicNumber.exact_zero(self.prime) for _ in range(k))
        return TruncatedSeries(self.prime, pad + self.coeffs, self.tail_bound)

    def divide_t(self, k):
        """Divide by t^k; the k lowest coefficients must be structural zeros."""
        if any(not c.is_exact_zero for c in self.coeffs[:k]):
            raise ValueError("cannot divide: low coefficients not exactly zero")
        return TruncatedSeries(self.prime, self.coeffs[k:], self.tail_bound)

    def truncate(self, T):
        if T >= self.truncation:
            return self
        tail = self.tail_from(T)
        return TruncatedSeries(self.prime, self.coeffs[:T], tail)

    def compose(self, inner: "TruncatedSeries"):
        """self(inner(t)) by Horner.

        Exact when self is a polynomial (tail INF: no terms beyond the
        truncation).  For genuinely truncated outer series the inner
        constant term must be a structural zero, else terms of self beyond
        the truncation would contribute to every output coefficient.
        """
        if self.tail_bound != INF and (
            not inner.coeffs or not inner.coeffs[0].is_exact_zero
        ):
            raise ValueError("composition needs inner(0) = 0 exactly")
        p = self.prime
        T = min(inner.truncation, self.truncation)
        one = TruncatedSeries.constant(p, PadicNumber.exact_zero(p), T)
        result = one
        inner_t = inner.truncate(T)
        for c in reversed(self.coeffs):
            result = result * inner_t + TruncatedSeries.constant(p, c, T)
        gs, gi = self.global_lower_bound(), inner.global_lower_bound()
        tail = gs if (gs is not None and gi is not None and gi >= 0) else None
        if tail is not None and tail != INF:
            tail = min(tail, result.tail_bound) if result.tail_bound is not None else None
        return TruncatedSeries(p, result.coeffs, tail)

    def invert(self):
        """Multiplicative inverse; the constant term must be a certified unit."""
        p = self.prime
        c0 = self.coeffs[0]
        if not c0.is_nonzero or c0.valuation != 0:
            raise ValueError("inverse needs a unit constant term")
        T = self.truncation
        inv0 = PadicNumber.from_unit(p, 0, 1, c0.abs_precision) / c0
        out = [inv0]
        for n in range(1, T):
            acc = PadicNumber.exact_zero(p)
            for i in range(1, n + 1):
                a = self.coeffs[i] if i < T else None
                if a is None or a.is_exact_zero:
                    continue
                acc = acc + a * out[n - i]
            out.append(-(acc) / c0 if not acc.is_exact_zero else PadicNumber.exact_zero(p))
        g = self.global_lower_bound()
        tail = 0 if (g is not None and g >= 0) else None
        return TruncatedSeries(p, tuple(out), tail)

    def evaluate(self, tau: PadicNumber) -> PadicNumber:
        """Value at tau by Horner; sound via the tail bound, which must be known."""
        if self.tail_bound is None:
            raise InsufficientPrecision("evaluation needs a tail bound")
        p = self.prime
        vt = tau.lower_valuation_bound()
        if vt < 0:
            raise ValueError("evaluation point must be integral")
        acc = PadicNumber.exact_zero(p)
        for c in reversed(self.coeffs):
            acc = acc * tau if not acc.is_exact_zero else acc
            acc = acc + c
        if self.tail_bound == INF or vt == INF:
            return acc
        cap = self.tail_bound + self.truncation * vt
        if acc.is_exact_zero:
            if cap <= 0:
                raise InsufficientPrecision("tail dominates the value")
            return PadicNumber.zero(p, int(cap))
        return acc.with_abs_precision(min(acc.abs_precision, int(cap)))


@dataclass(frozen=True)
class SeriesVector:
    entries: tuple

    def __post_init__(self):
        if not self.entries:
            raise ValueError("empty vector")
        p = self.entries[0].prime
        T = self.entries[0].truncation
        for e in self.entries:
            if e.prime != p or e.truncation != T:
                raise ValueError("entries must share prime and truncation")

    @property
    def prime(self):
        return self.entries[0].prime

    @property
    def dimension(self):
        return len(self.entries)

    @property
    def truncation(self):
        return self.entries[0].truncation

    def map(self, fn):
        return SeriesVector(tuple(fn(e) for e in self.entries))

    def transform(self, matrix):
        """Apply an integer matrix to the vector of series."""
        rows = []
        for row in matrix:
            acc = None
            for m, e in zip(row, self.entries):
                term = e.scale_fraction(m)
                acc = term if acc is None else acc + term
            rows.append(acc)
        return SeriesVector(tuple(rows))

    def factor_t_power(self):
        """Largest k with all entries structurally divisible by t^k."""
        k = min(e.t_order_of_exact_zeros() for e in self.entries)
        if k == 0:
            return 0, self
        return k, SeriesVector(tuple(e.divide_t(k) for e in self.entries))


# ------------------------------------------------------------ Newton hull


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _lower_hull(points):
    """Strict lower convex hull; input (x, y) pairs, ties resolved to min y."""
    best = {}
    for x, y in points:
        if x not in best or y < best[x]:
            best[x] = y
    pts = sorted(best.items())
    hull = []
    for pt in pts:
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], pt) <= 0:
            hull.pop()
        hull.append(pt)
    return hull


@dataclass(frozen=True)
class NewtonPolygon:
    prime: int
    truncation_order: int
    vertices: tuple  # of (x, y, stable)
    min_height: int
    min_certified: bool
    n_value: int
    n_certified: bool
    N_value: int
    N_certified: bool
    N_unbounded_flag: bool

    def min_span(self):
        """(n, N) for the minimal-height part; N is None when the flat part
        cannot be certified to end within the truncation."""
        if not self.min_certified:
            raise MinimumNotAttained("hull minimum not certified at this precision")
        if not self.n_certified:
            raise MinimumNotAttained("leftmost minimal vertex not certified")
        if self.N_certified:
            return self.n_value, self.N_value
        return self.n_value, None


def newton_polygon(w, require_certified_min=True) -> NewtonPolygon:
    """Certified lower convex hull of the coefficient valuations of w.

    w is a SeriesVector or a single TruncatedSeries.
    """
    if isinstance(w, TruncatedSeries):
        w = SeriesVector((w,))
    p = w.prime
    T = w.truncation
    known = []
    hidden = {}  # x -> lowest admissible hidden height
    for series in w.entries:
        for n, c in enumerate(series.coeffs):
            if c.is_exact_zero:
                continue
            if c.is_nonzero:
                known.append((n, c.valuation))
            else:
                h = c.abs_precision
                hidden[n] = min(hidden.get(n, INF), h)
    tail = _min_tail(*[s.tail_bound for s in w.entries])
    if not known:
        raise AllZeroToPrecision("no coefficient certified nonzero")
    hull = _lower_hull(known)
    m_star = min(y for _, y in hull)
    known_at = {x: y for x, y in _dedupe_min(known)}
    hidden_pts = [
        (x, h) for x, h in hidden.items() if h < known_at.get(x, INF)
    ]
    # certification of the minimum and its span
    if tail is None:
        min_cert = False
    else:
        min_cert = tail >= m_star and all(h >= m_star for _, h in hidden_pts)
    mins = [x for x, y in hull if y == m_star]
    n_val, N_val = mins[0], mins[-1]
    n_cert = min_cert and not any(h == m_star and x < n_val for x, h in hidden_pts)
    unbounded = (tail is not None and tail <= m_star) or any(
        h == m_star and x > N_val for x, h in hidden_pts
    )
    N_cert = min_cert and not unbounded
    # per-vertex stability against the minimal admissible configuration
    cfg = list(known)
    cfg.extend(hidden_pts)
    if tail is None:
        stable_set = set()
    else:
        if tail != INF:
            cfg.append((T, tail))
        stable_set = {v for v in _lower_hull(cfg)}
    vertices = tuple((x, y, (x, y) in stable_set) for x, y in hull)
    np_obj = NewtonPolygon(
        prime=p,
        truncation_order=T,
        vertices=vertices,
        min_height=m_star,
        min_certified=min_cert,
        n_value=n_val,
        n_certified=n_cert,
        N_value=N_val,
        N_certified=N_cert,
        N_unbounded_flag=unbounded,
    )
    if require_certified_min and not min_cert:
        raise UncertifiableHull(
            "hidden coefficients could lie below the computed hull minimum"
        )
    return np_obj


def _dedupe_min(points):
    best = {}
    for x, y in points:
        if x not in best or y < best[x]:
            best[x] = y
    return sorted(best.items())


def min_height_span(np_obj: NewtonPolygon):
    """x-range (n, N) of the minimal-height vertices; N may be the string
    'unbounded-within-truncation'."""
    n, N = np_obj.min_span()
    return n, (UNBOUNDED if N is None else N)


def count_zeros_in_unit_disk(w: TruncatedSeries) -> int:
    """Number of zeros, with multiplicity, on the open unit disk."""
    np_obj = newton_polygon(w)
    n, _ = np_obj.min_span()
    return n


# --------------------------------------------------------------- integrate


def formal_integrate(w):
    """Antiderivative with zero constant term, coefficientwise w_n/(n+1).

    The output has no constant tail bound (denominators grow without
    bound); consumers that substitute t -> p t recover one from the
    integrand, see image_of_series_on_pzp.
    """

    def integrate_one(s: TruncatedSeries):
        p = s.prime
        out = [PadicNumber.exact_zero(p)]
        for n, c in enumerate(s.coeffs):
            out.append(c.scale_fraction(Fraction(1, n + 1)))
        return TruncatedSeries(p, tuple(out), None if s.tail_bound != INF else INF)

    if isinstance(w, TruncatedSeries):
        return integrate_one(w)
    return w.map(integrate_one)


# ------------------------------------------------------------------ delta


def delta(p: int, n: int) -> int:
    """max{d >= 0 : v_p(n+1) + d <= v_p(n+d+1)}, by direct scan.

    The scan terminates because any qualifying d satisfies p^d <= n+d+1.
    """
    base = vp_int(n + 1, p)
    best = 0
    d = 0
    while p**d <= n + d + 1:
        if base + d <= vp_int(n + d + 1, p):
            best = d
        d += 1
    return best


# -------------------------------------------------- Weierstrass preparation


@dataclass(frozen=True)
class WeierstrassFactorization:
    poly_part: tuple  # PadicNumber coefficients, ascending, degree N
    unit_part: TruncatedSeries  # = 1 mod p*t
    modulus: tuple  # (M, T)
    p_content: int
    degree: int


def weierstrass_prepare(L: TruncatedSeries, M: int, T: int) -> WeierstrassFactorization:
    """Factor L = poly_part * unit_part with deg poly = N (last minimal
    hull index) and unit_part = 1 mod p*t, certified mod (p^M, t^T).

    The common p-power of the coefficients is factored out first and
    reabsorbed into poly_part.  Single-power Hensel steps against the
    unit cofactor of the reduced distinguished part; step k repairs the
    factorization mod p^(k+2), so M steps certify the stated modulus.
    """
    p = L.prime
    Tw = min(T, L.truncation)
    L = L.truncate(Tw)
    np_obj = newton_polygon(L)
    if not np_obj.N_certified:
        raise NUndefined("last minimal hull index not certified within truncation")
    m0 = np_obj.min_height
    n0 = np_obj.n_value
    N = np_obj.N_value
    Mw = M + 2
    # integer residues of the normalized series, mod p^Mw
    ints = []
    for c in L.coeffs:
        shifted = c.scale_fraction(Fraction(p) ** (-m0)) if m0 else c
        if shifted.lower_valuation_bound() < 0:
            raise PrecisionExhausted("coefficients not integral after clearing p-content")
        try:
            ints.append(shifted.residue(Mw))
        except InsufficientPrecision as exc:
            raise PrecisionExhausted(
                f"need coefficients mod p^{Mw} to certify modulus p^{M}"
            ) from exc
    mod_full = p**Mw
    ubar = [c % p for c in ints[n0 : N + 1]]  # unit cofactor, nonzero constant
    inv_ubar = _fp_series_inverse(ubar, p, Tw)
    f = list(ints[: N + 1])
    u = [1] + [0] * (Tw - 1)
    target = p ** (M + 1)
    certified = False
    for k in range(M + 2):
        E = _residual(ints, f, u, mod_full, Tw)
        if all(e % target == 0 for e in E):
            certified = True
            break
        step = p ** (k + 1)
        if any(e % step for e in E):
            raise PrecisionExhausted("lifting stalled before certifying the modulus")
        G = [(e // step) % p for e in E]
        # solve df + t^(n0+1) * e * ubar = G mod (p, t^Tw), df supported on [0, n0]
        e_ser = _fp_series_mul(G[n0 + 1 :], inv_ubar, p, Tw - n0 - 1)
        for i in range(min(n0 + 1, len(G))):
            f[i] = (f[i] + step * G[i]) % mod_full
        for i, c in enumerate(e_ser):
            u[1 + i] = (u[1 + i] + step * c) % mod_full
    if not certified:
        E = _residual(ints, f, u, mod_full, Tw)
        if not all(e % target == 0 for e in E):
            raise PrecisionExhausted("iteration cap reached without certification")
    poly = tuple(
        PadicNumber.from_residue(p, c, Mw, shift=m0) for c in f
    )
    unit = TruncatedSeries(
        p, tuple(PadicNumber.from_residue(p, c, Mw) for c in u), tail_bound=1
    )
    return WeierstrassFactorization(
        poly_part=poly, unit_part=unit, modulus=(M, Tw), p_content=m0, degree=N
    )


def _residual(L_ints, f, u, mod, T):
    E = []
    for n in range(T):
        s = 0
        for i in range(min(n, len(f) - 1) + 1):
            fi = f[i]
            if fi:
                s += fi * u[n - i]
        E.append((L_ints[n] - s) % mod)
    return E


def _fp_series_inverse(a, p, length):
    inv0 = pow(a[0], -1, p)
    out = [inv0]
    for n in range(1, length):
        s = 0
        for i in range(1, min(n, len(a) - 1) + 1):
            s += a[i] * out[n - i]
        out.append(-inv0 * s % p)
    return out


def _fp_series_mul(a, b, p, length):
    out = [0] * length
    for i, x in enumerate(a[:length]):
        if x:
            for j, y in enumerate(b[: length - i]):
                out[i + j] = (out[i + j] + x * y) % p
    return out
