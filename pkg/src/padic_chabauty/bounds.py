"""Closed-form bound and density calculators, all exact rationals.

Floats never appear here; pretty-printing is the CLI's business.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidCurve
from .series import delta


@dataclass(frozen=True)
class BoundReport:
    formula: str
    inputs: dict
    value: Fraction


def exact_delta_sum(p, d, N) -> int:
    """max of sum(delta(p, n_j)) over d nonnegative parts with sum <= N.

    Dynamic programming over the exact delta table; p must exceed 2 for
    the N/(p-2) comparison bound to make sense.
    """
    if p <= 2:
        raise InvalidCurve("the partition maximum is used for odd primes only")
    if d < 0 or N < 0:
        raise InvalidCurve("d and N must be nonnegative")
    table = [delta(p, n) for n in range(N + 1)]
    best = [0] * (N + 1)
    for _ in range(d):
        new = [0] * (N + 1)
        for budget in range(N + 1):
            new[budget] = max(
                table[n] + best[budget - n] for n in range(budget + 1)
            )
        best = new
    return best[N]


def curve_image_bound(p, d, g) -> Fraction:
    """Whole-curve image bound: 5d + 6g - 6 at p = 2, else
    (p+1) d + (p^2-p)/(p-2) (2g-2)."""
    if d < 1 or g < 1:
        raise InvalidCurve("need d >= 1 and g >= 1")
    if p == 2:
        return Fraction(5 * d + 6 * g - 6)
    return (p + 1) * d + Fraction(p * p - p, p - 2) * (2 * g - 2)


def avg_rholog_bound(p, g, refined=False) -> Fraction:
    """Average image-size bound: 6g + 9 at p = 2 (refined: 3g + 9/2), else
    (p^2-p)/(p-2) (2g-2) + (p+1)^2 (refined: halved genus term and square)."""
    if g < 1:
        raise InvalidCurve("need g >= 1")
    if p == 2:
        return Fraction(3 * g) + Fraction(9, 2) if refined else Fraction(6 * g + 9)
    main = Fraction(p * p - p, p - 2)
    if refined:
        return main * (g - 1) + Fraction((p + 1) ** 2, 2)
    return main * (2 * g - 2) + (p + 1) ** 2


def density_main(g) -> Fraction:
    """1 - (12g + 20) 2^(-g); positive exactly for g >= 7."""
    if g <= 1:
        raise InvalidCurve("need g > 1")
    return 1 - Fraction(12 * g + 20, 2**g)


def density_odd(p, g) -> Fraction:
    """1 - (1 + (p+1)^2 + (p^2-p)/(p-2) (2g-2)) p^(1-g), odd p."""
    if g <= 1:
        raise InvalidCurve("need g > 1")
    if p == 2:
        raise InvalidCurve("the odd-prime density formula needs p > 2")
    inner = 1 + (p + 1) ** 2 + Fraction(p * p - p, p - 2) * (2 * g - 2)
    return 1 - inner * Fraction(1, p ** (g - 1))


def excluded_density(p, g, image_size) -> Fraction:
    """(1 + #I) p^(1-g): the relative density excluded when the image has
    #I points."""
    if g <= 1:
        raise InvalidCurve("need g > 1")
    if image_size < 0:
        raise InvalidCurve("image size must be nonnegative")
    return (1 + image_size) * Fraction(1, p ** (g - 1))


def density_bounds(g, p=None, image_size=None) -> list:
    """All applicable density expressions for the given parameters."""
    reports = [
        BoundReport("density-main", {"g": g}, density_main(g)),
    ]
    if p is not None and p > 2:
        reports.append(BoundReport("density-odd", {"p": p, "g": g}, density_odd(p, g)))
    if p is not None and image_size is not None:
        reports.append(
            BoundReport(
                "excluded-density",
                {"p": p, "g": g, "image_size": image_size},
                excluded_density(p, g, image_size),
            )
        )
    return reports
