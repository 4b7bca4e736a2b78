"""Average smooth-point counts of decent models: seeded Monte Carlo over
Haar-random curves, exact truncated enumeration of the per-column process,
and empirical case-frequency and tail statistics.

Random coefficients are lazy digit streams: digit d of coefficient i in
trial t is derived from SHA-256 of (seed, t, i, d), so extending the
precision of a trial never changes digits already drawn, results are
reproducible for a fixed seed, and trials merge independently of
scheduling.
"""

from __future__ import annotations

import hashlib
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InvalidCurve
from .model import (
    CASE_BLOWN_UP,
    CASE_RECURSE,
    CASE_REGULAR_NOT_SMOOTH,
    CASE_SIMPLE_ZERO,
    CASE_TRUNCATED,
    CASE_UNIT_DERIVATIVE,
    CASE_UNIT_VALUE,
    build_patch_tree,
    classify_column,
)
from .padic import legendre


@dataclass(frozen=True)
class SampleConfig:
    prime: int
    genus: int
    trials: int
    seed: int
    depth_guard: int = 12
    digit_budget: int = None

    def __post_init__(self):
        if self.trials < 1:
            raise InvalidCurve("trials must be >= 1")
        budget = self.digit_budget
        if budget is None:
            object.__setattr__(self, "digit_budget", 2 * self.depth_guard + 4)
        elif budget < 2 * self.depth_guard + 4:
            raise InvalidCurve("digit_budget must be >= 2*depth_guard + 4")


def coefficient_digit(seed, trial, coeff_index, digit_index, p):
    msg = b"padic-chabauty|%d|%d|%d|%d" % (seed, trial, coeff_index, digit_index)
    digest = hashlib.sha256(msg).digest()
    return int.from_bytes(digest[:8], "big") % p


def materialize_coefficient(seed, trial, coeff_index, p, budget):
    value = 0
    for d in range(budget):
        value += coefficient_digit(seed, trial, coeff_index, d, p) * p**d
    return value


def _random_f(cfg, trial):
    """Ascending coefficients of a Haar-random monic f mod p^budget."""
    p, budget = cfg.prime, cfg.digit_budget
    coeffs = [
        materialize_coefficient(cfg.seed, trial, i, p, budget)
        for i in range(2 * cfg.genus + 1)
    ]
    return coeffs + [1]


@dataclass
class MCResult:
    prime: int
    genus: int
    trials: int
    seed: int
    mean: Fraction
    stderr: float
    histogram: dict
    depth_histogram: dict
    guard_hits: int
    per_trial: list = field(default_factory=list)


def _mc_chunk(cfg, start, stop, keep_trials):
    p = cfg.prime
    total = 0
    sumsq = 0
    hist = Counter()
    depth_hist = Counter()
    guard_hits = 0
    rows = []
    for trial in range(start, stop):
        f = _random_f(cfg, trial)
        _, affine, deepest, hit = build_patch_tree(
            p, f, cfg.digit_budget, cfg.depth_guard, beyond_guard="truncate"
        )
        count = 1 + affine
        total += count
        sumsq += count * count
        hist[count] += 1
        depth_hist[deepest] += 1
        guard_hits += 1 if hit else 0
        if keep_trials:
            rows.append((trial, count, deepest))
    return total, sumsq, hist, depth_hist, guard_hits, rows


def mc_average_smooth(cfg: SampleConfig, keep_trials=False, threads=1) -> MCResult:
    """Sample mean of the smooth-point count of decent models.

    Trials that hit the depth guard contribute their truncated count and
    are tallied in guard_hits rather than aborting the run.  Trials are
    keyed by index, so splitting them across threads and merging in chunk
    order is byte-identical to a serial run.
    """
    p = cfg.prime
    n = cfg.trials
    if threads <= 1 or n < 2 * threads:
        parts = [_mc_chunk(cfg, 0, n, keep_trials)]
    else:
        from concurrent.futures import ThreadPoolExecutor

        step = (n + threads - 1) // threads
        spans = [(s, min(s + step, n)) for s in range(0, n, step)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(
                pool.map(lambda span: _mc_chunk(cfg, span[0], span[1], keep_trials), spans)
            )
    total = sum(part[0] for part in parts)
    sumsq = sum(part[1] for part in parts)
    hist = Counter()
    depth_hist = Counter()
    guard_hits = 0
    rows = []
    for part in parts:
        hist.update(part[2])
        depth_hist.update(part[3])
        guard_hits += part[4]
        rows.extend(part[5])
    mean = Fraction(total, n)
    var = Fraction(sumsq, n) - mean * mean
    stderr = float(var / n) ** 0.5 if n > 1 else 0.0
    return MCResult(
        prime=p,
        genus=cfg.genus,
        trials=n,
        seed=cfg.seed,
        mean=mean,
        stderr=stderr,
        histogram=dict(sorted(hist.items())),
        depth_histogram=dict(sorted(depth_hist.items())),
        guard_hits=guard_hits,
        per_trial=rows,
    )


# ------------------------------------------------------- exact enumeration


@dataclass(frozen=True)
class EnumResult:
    prime: int
    depth: int
    per_column: Fraction
    exact_value: Fraction


def _sqrt_count(a, p, units_only=False):
    a %= p
    if p == 2:
        return 1
    if a == 0:
        return 0 if units_only else 1
    return 2 if legendre(a, p) == 1 else 0


def exact_truncated_average(p, g, k) -> EnumResult:
    """Expected smooth-point count when blow-up recursion beyond depth k
    counts zero, by exhaustive enumeration of the low Taylor data.

    For a fixed column, (h(c), h'(c), h''(c)/2) is an upper-triangular
    unit-diagonal image of the three lowest coefficients of the patch
    family, hence uniform; the case analysis reads them mod (p^3, p^2, p),
    so enumerating that quotient with uniform weight is exact.  Recursion
    re-enters the same distribution one level down, and linearity of
    expectation sums the p columns without any independence assumption.
    """
    if k < 0:
        raise InvalidCurve("truncation depth must be >= 0")
    per_column = _column_expectation(p, k)
    return EnumResult(
        prime=p, depth=k, per_column=per_column, exact_value=1 + p * per_column
    )


def _column_expectation(p, remaining) -> Fraction:
    child = _column_expectation(p, remaining - 1) if remaining > 0 else None
    total = Fraction(0)
    space = p**3 * p**2 * p
    for t0 in range(p**3):
        for t1 in range(p**2):
            for t2 in range(p):
                if t1 % p != 0:
                    total += _sqrt_count(t0, p)
                    continue
                if t0 % p != 0:
                    if p != 2:
                        total += _sqrt_count(t0, p, units_only=True)
                    elif t0 % 4 == 3:
                        pass
                    else:
                        rhs0 = ((t0 - 1) // 4) % 2
                        rhs1 = (t1 // 2) % 2
                        rhs2 = t2 % 2
                        zeros = sum(
                            1
                            for x in (0, 1)
                            if (rhs0 + rhs1 * x + rhs2 * x * x) % 2 == 0
                        )
                        total += 2 * zeros
                    continue
                if t0 % (p * p) != 0:
                    continue
                if child is not None:
                    total += p * child
    return total / space


# --------------------------------------------------------- column process


def _column0_count(cfg, trial):
    """Smooth points above x = 0 for one sampled curve, with truncation.

    Classification at c = 0 reads only h(0), h'(0), h''(0)/2, so the tail
    coefficients are materialized only when the column recurses.
    """
    p, budget = cfg.prime, cfg.digit_budget
    low = [
        materialize_coefficient(cfg.seed, trial, i, p, budget) for i in range(3)
    ]
    probe = classify_column(low, 0, p, precision=budget)
    if probe.case != CASE_RECURSE:
        return probe.smooth_count, probe.case, 0
    f = _random_f(cfg, trial)
    rec = classify_column(f, 0, p, precision=budget)
    if cfg.depth_guard < 1:
        return 0, CASE_TRUNCATED, 0
    _, count, deepest, _ = build_patch_tree(
        p, rec.child_h, budget - 2, cfg.depth_guard, beyond_guard="truncate", depth=1
    )
    return count, CASE_RECURSE, deepest


@dataclass
class ColumnStats:
    prime: int
    trials: int
    seed: int
    mean: Fraction
    stderr: float
    histogram: dict
    tail_rows: list  # (B, empirical frequency, certified bound 16/B^2)


def x0_statistics(p, g, trials, seed, depth_guard=12) -> ColumnStats:
    cfg = SampleConfig(prime=p, genus=g, trials=trials, seed=seed, depth_guard=depth_guard)
    hist = Counter()
    total = 0
    sumsq = 0
    for trial in range(trials):
        count, _, _ = _column0_count(cfg, trial)
        hist[count] += 1
        total += count
        sumsq += count * count
    mean = Fraction(total, trials)
    var = Fraction(sumsq, trials) - mean * mean
    stderr = float(var / trials) ** 0.5 if trials > 1 else 0.0
    rows = []
    for e in (1, 2, 3):
        B = 4 * p**e
        freq = Fraction(sum(n for v, n in hist.items() if v >= B), trials)
        rows.append((B, freq, min(Fraction(1), Fraction(16, B * B))))
    return ColumnStats(
        prime=p,
        trials=trials,
        seed=seed,
        mean=mean,
        stderr=stderr,
        histogram=dict(sorted(hist.items())),
        tail_rows=rows,
    )


@dataclass
class CaseFrequencies:
    prime: int
    trials: int
    seed: int
    counts: dict  # case label -> occurrences at the root column
    expected: dict  # case label -> exact probability

    def empirical(self, label) -> Fraction:
        return Fraction(self.counts[label], self.trials)


CASE_LABELS = ("unit-derivative", "unit-value", "simple-zero", "recurse")


def case_frequencies(p, g, trials, seed) -> CaseFrequencies:
    """Root-level case tallies at column 0 against the exact probabilities."""
    if trials < 1:
        raise InvalidCurve("trials must be >= 1")
    cfg = SampleConfig(prime=p, genus=g, trials=trials, seed=seed, depth_guard=1)
    counts = {label: 0 for label in CASE_LABELS}
    fold = {
        CASE_UNIT_DERIVATIVE: "unit-derivative",
        CASE_UNIT_VALUE: "unit-value",
        CASE_REGULAR_NOT_SMOOTH: "unit-value",
        CASE_BLOWN_UP: "unit-value",
        CASE_SIMPLE_ZERO: "simple-zero",
        CASE_RECURSE: "recurse",
        CASE_TRUNCATED: "recurse",
    }
    budget = cfg.digit_budget
    for trial in range(trials):
        low = [
            materialize_coefficient(seed, trial, i, p, budget) for i in range(3)
        ]
        rec = classify_column(low, 0, p, precision=budget)
        counts[fold[rec.case]] += 1
    q = Fraction(1, p)
    expected = {
        "unit-derivative": 1 - q,
        "unit-value": q - q**2,
        "simple-zero": q**2 - q**3,
        "recurse": q**3,
    }
    return CaseFrequencies(
        prime=p, trials=trials, seed=seed, counts=counts, expected=expected
    )
