"""Finite-precision p-adic scalars with explicit precision tracking.

A nonzero element of Q_p is stored as p^v * u with the unit u reduced
modulo p^(N - v); N is the absolute precision, i.e. the element is known
modulo p^N.  Elements that cannot be certified nonzero are carried as
"zero to precision N" (meaning v_p >= N), and structural zeros
(integration constants, identically-zero series components) as exact
zeros with infinite precision.

Every operation propagates precision pessimistically and raises
InsufficientPrecision rather than report digits it cannot certify.
Values are immutable; sharing between threads is safe.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    DivisionByZeroToPrecision,
    InsufficientPrecision,
    NonPrime,
    NotASquare,
    OddValuation,
    PrimeMismatch,
    ZeroDenominator,
)

INF = float("inf")


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    # deterministic Miller-Rabin for n < 3.3 * 10^24
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def vp_int(n: int, p: int) -> int:
    """Valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0 is undefined")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def vp_fraction(x: Fraction | int, p: int):
    """Valuation of a rational; INF for 0."""
    x = Fraction(x)
    if x == 0:
        return INF
    return vp_int(x.numerator, p) - vp_int(x.denominator, p)


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) for odd prime p, in {-1, 0, 1}."""
    a %= p
    if a == 0:
        return 0
    r = pow(a, (p - 1) // 2, p)
    return 1 if r == 1 else -1


def sqrt_mod_prime(a: int, p: int) -> int:
    """A square root of a modulo an odd prime p (Tonelli-Shanks)."""
    a %= p
    if a == 0:
        return 0
    if legendre(a, p) != 1:
        raise NotASquare(f"{a} is not a square mod {p}")
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    # write p-1 = q * 2^s with q odd
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while legendre(z, p) != -1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, tt = 0, t
        while tt != 1:
            tt = tt * tt % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


@dataclass(frozen=True)
class PadicNumber:
    """Element of Q_p known to finite (or, for exact zero, infinite) precision.

    Three kinds:
      * nonzero: valuation v, unit u in [1, p^(N-v)) coprime to p, N = abs_precision;
      * zero to precision: valuation/unit are None, abs_precision = N (v_p >= N);
      * exact zero: valuation/unit/abs_precision are all None.
    """

    prime: int
    valuation: int | None
    unit: int | None
    abs_precision: int | None

    # ------------------------------------------------------------ creation

    @staticmethod
    def exact_zero(p: int) -> "PadicNumber":
        return PadicNumber(p, None, None, None)

    @staticmethod
    def zero(p: int, abs_precision: int) -> "PadicNumber":
        if abs_precision <= 0:
            raise InsufficientPrecision(
                f"zero to precision {abs_precision} carries no information"
            )
        return PadicNumber(p, None, None, abs_precision)

    @staticmethod
    def from_unit(p: int, valuation: int, unit: int, abs_precision: int) -> "PadicNumber":
        rel = abs_precision - valuation
        if rel < 1:
            raise InsufficientPrecision(
                f"relative precision {rel} < 1 at valuation {valuation}"
            )
        u = unit % p**rel
        if u == 0 or u % p == 0:
            raise ValueError("unit must be coprime to p")
        return PadicNumber(p, valuation, u, abs_precision)

    @staticmethod
    def from_residue(p: int, residue: int, abs_precision: int, shift: int = 0) -> "PadicNumber":
        """Element p^shift * residue where residue is known mod p^abs_precision."""
        r = residue % p**abs_precision
        if r == 0:
            return PadicNumber.zero(p, abs_precision + shift)
        v = vp_int(r, p)
        return PadicNumber.from_unit(p, v + shift, r // p**v, abs_precision + shift)

    @staticmethod
    def from_fraction(p: int, x: Fraction | int, abs_precision: int) -> "PadicNumber":
        x = Fraction(x)
        return padic_make(p, x.numerator, x.denominator, abs_precision)

    # ---------------------------------------------------------- inspection

    @property
    def is_exact_zero(self) -> bool:
        return self.abs_precision is None

    @property
    def is_nonzero(self) -> bool:
        """Certified nonzero."""
        return self.valuation is not None

    @property
    def is_zero_to_precision(self) -> bool:
        return self.valuation is None

    @property
    def rel_precision(self) -> int:
        if not self.is_nonzero:
            raise InsufficientPrecision("no relative precision on a zero")
        return self.abs_precision - self.valuation

    def lower_valuation_bound(self):
        """Certified lower bound on v_p; INF for the exact zero."""
        if self.is_exact_zero:
            return INF
        if self.valuation is not None:
            return self.valuation
        return self.abs_precision

    def residue(self, k: int) -> int:
        """The value modulo p^k as an integer in [0, p^k); requires v_p >= 0."""
        if k <= 0:
            return 0
        if self.is_exact_zero:
            return 0
        if self.valuation is None:
            if self.abs_precision < k:
                raise InsufficientPrecision(
                    f"zero to precision {self.abs_precision}, residue mod p^{k} unknown"
                )
            return 0
        if self.valuation < 0:
            raise ValueError("residue of an element of negative valuation")
        if self.abs_precision < k:
            raise InsufficientPrecision(
                f"known mod p^{self.abs_precision}, residue mod p^{k} unknown"
            )
        return self.unit * self.prime**self.valuation % self.prime**k

    def with_abs_precision(self, k: int) -> "PadicNumber":
        """Forget precision down to abs precision k (never gain)."""
        if self.is_exact_zero:
            return self
        if self.abs_precision <= k:
            return self
        if self.valuation is None or self.valuation >= k:
            return PadicNumber.zero(self.prime, k)
        return PadicNumber.from_unit(self.prime, self.valuation, self.unit, k)

    def __repr__(self):
        if self.is_exact_zero:
            return f"0 (exact, p={self.prime})"
        if self.valuation is None:
            return f"O({self.prime}^{self.abs_precision})"
        return (
            f"{self.prime}^{self.valuation}*{self.unit}"
            f" + O({self.prime}^{self.abs_precision})"
        )

    # ---------------------------------------------------------- arithmetic

    def _check_same_prime(self, other: "PadicNumber"):
        if self.prime != other.prime:
            raise PrimeMismatch(f"primes {self.prime} and {other.prime} differ")

    def __add__(self, other: "PadicNumber") -> "PadicNumber":
        self._check_same_prime(other)
        if self.is_exact_zero:
            return other
        if other.is_exact_zero:
            return self
        p = self.prime
        n = min(self.abs_precision, other.abs_precision)
        m = min(self.lower_valuation_bound(), other.lower_valuation_bound())
        if m >= n:
            return PadicNumber.zero(p, n)
        # both values are p^m * (integer known mod p^(n-m))
        ra = 0 if self.valuation is None else self.unit * p ** (self.valuation - m)
        rb = 0 if other.valuation is None else other.unit * p ** (other.valuation - m)
        return PadicNumber.from_residue(p, ra + rb, n - m, shift=m)

    def __neg__(self) -> "PadicNumber":
        if not self.is_nonzero:
            return self
        rel = self.rel_precision
        return PadicNumber.from_unit(
            self.prime, self.valuation, -self.unit % self.prime**rel, self.abs_precision
        )

    def __sub__(self, other: "PadicNumber") -> "PadicNumber":
        return self + (-other)

    def __mul__(self, other: "PadicNumber") -> "PadicNumber":
        self._check_same_prime(other)
        p = self.prime
        if self.is_exact_zero or other.is_exact_zero:
            return PadicNumber.exact_zero(p)
        if self.valuation is None or other.valuation is None:
            # v_p(a*b) >= lvb(a) + lvb(b)
            return PadicNumber.zero(
                p, self.lower_valuation_bound() + other.lower_valuation_bound()
            )
        rel = min(self.rel_precision, other.rel_precision)
        v = self.valuation + other.valuation
        return PadicNumber.from_unit(p, v, self.unit * other.unit % p**rel, v + rel)

    def __truediv__(self, other: "PadicNumber") -> "PadicNumber":
        self._check_same_prime(other)
        p = self.prime
        if not other.is_nonzero:
            raise DivisionByZeroToPrecision(
                "division by exact zero" if other.is_exact_zero
                else f"divisor is zero to precision {other.abs_precision}"
            )
        if self.is_exact_zero:
            return self
        if self.valuation is None:
            return PadicNumber.zero(p, self.abs_precision - other.valuation)
        rel = min(self.rel_precision, other.rel_precision)
        v = self.valuation - other.valuation
        inv = pow(other.unit, -1, p**rel)
        return PadicNumber.from_unit(p, v, self.unit * inv % p**rel, v + rel)

    def scale_fraction(self, fr: Fraction | int) -> "PadicNumber":
        """Multiply by an exact rational; relative precision is preserved."""
        fr = Fraction(fr)
        p = self.prime
        if fr == 0:
            return PadicNumber.exact_zero(p)
        if self.is_exact_zero:
            return self
        w = vp_int(fr.numerator, p) - vp_int(fr.denominator, p)
        if self.valuation is None:
            return PadicNumber.zero(p, self.abs_precision + w)
        rel = self.rel_precision
        mod = p**rel
        num = fr.numerator // p ** max(0, vp_int(fr.numerator, p))
        den = fr.denominator // p ** max(0, vp_int(fr.denominator, p))
        ufr = num * pow(den, -1, mod) % mod
        v = self.valuation + w
        return PadicNumber.from_unit(p, v, self.unit * ufr % mod, v + rel)

    def sqrt(self) -> "PadicNumber":
        return padic_sqrt(self)


# ------------------------------------------------------------------- ops


def padic_make(p: int, num: int, den: int, abs_precision: int) -> PadicNumber:
    """num/den as an element of Q_p known modulo p^abs_precision."""
    if not is_prime(p):
        raise NonPrime(f"{p} is not prime")
    if den == 0:
        raise ZeroDenominator("denominator is zero")
    if abs_precision < 1:
        raise InsufficientPrecision("abs_precision must be >= 1")
    if num == 0:
        return PadicNumber.zero(p, abs_precision)
    vn, vd = vp_int(num, p), vp_int(den, p)
    v = vn - vd
    if v >= abs_precision:
        return PadicNumber.zero(p, abs_precision)
    rel = abs_precision - v
    un = num // p**vn
    ud = den // p**vd
    unit = un * pow(ud, -1, p**rel) % p**rel
    return PadicNumber.from_unit(p, v, unit, abs_precision)


def padic_arith(op: str, a: PadicNumber, b: PadicNumber) -> PadicNumber:
    """Dispatch add/sub/mul/div; the wire-facing entry point."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def padic_sqrt(x: PadicNumber) -> PadicNumber:
    """Canonical square root.

    For p odd the root whose unit reduces into {1, ..., (p-1)/2} mod p;
    for p = 2 the root congruent to 1 mod 4.  At p = 2 one relative digit
    is lost: the two admissible roots = 1 mod 4 of a unit known mod 2^r
    agree only mod 2^(r-1).
    """
    p = x.prime
    if x.is_exact_zero:
        return x
    if x.valuation is None:
        raise InsufficientPrecision("cannot certify a zero-to-precision square")
    if x.valuation % 2 != 0:
        raise OddValuation(f"valuation {x.valuation} is odd")
    rel = x.rel_precision
    u = x.unit
    if p != 2:
        if legendre(u, p) != 1:
            raise NotASquare(f"unit {u % p} is not a quadratic residue mod {p}")
        r = sqrt_mod_prime(u, p)
        k = 1
        while k < rel:
            # Newton: r <- (r + u/r)/2, doubling the certified modulus
            k = min(2 * k, rel)
            mod = p**k
            r = (r + u * pow(r, -1, mod)) % mod * pow(2, -1, mod) % mod
        if r % p > (p - 1) // 2:
            r = (-r) % p**rel
        return PadicNumber.from_unit(p, x.valuation // 2, r, x.valuation // 2 + rel)
    # p = 2
    if rel < 3:
        raise InsufficientPrecision("unit known mod < 8, squareness undecidable at p=2")
    if u % 8 != 1:
        raise NotASquare(f"unit = {u % 8} mod 8, not a square in Z_2")
    out_rel = rel - 1
    r = 1  # root = 1 mod 4; lift digit by digit: r^2 = u mod 2^(k+1) given mod 2^k
    for k in range(3, rel):
        if (r * r - u) % 2 ** (k + 1) != 0:
            r += 2 ** (k - 1)
    # r^2 = u mod 2^rel; the two such roots = 1 mod 4 agree mod 2^(rel-1)
    r %= 2**out_rel
    return PadicNumber.from_unit(2, x.valuation // 2, r, x.valuation // 2 + out_rel)
