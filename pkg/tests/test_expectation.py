from fractions import Fraction

import pytest

from padic_chabauty.errors import InvalidCurve
from padic_chabauty.expectation import (
    SampleConfig,
    case_frequencies,
    coefficient_digit,
    exact_truncated_average,
    materialize_coefficient,
    mc_average_smooth,
    x0_statistics,
)
from padic_chabauty.model import build_patch_tree


class TestDigitStreams:
    def test_deterministic(self):
        a = coefficient_digit(42, 3, 1, 7, 2)
        b = coefficient_digit(42, 3, 1, 7, 2)
        assert a == b

    def test_extension_is_stable(self):
        # materializing to a larger budget preserves the low digits
        small = materialize_coefficient(1, 0, 0, 3, 6)
        large = materialize_coefficient(1, 0, 0, 3, 10)
        assert large % 3**6 == small


class TestExactEnumeration:
    def test_golden_values(self):
        assert exact_truncated_average(2, 2, 0).exact_value == Fraction(5, 2)
        assert exact_truncated_average(2, 2, 1).exact_value == Fraction(23, 8)
        assert exact_truncated_average(3, 2, 0).exact_value == Fraction(11, 3)

    def test_closed_form(self):
        # 1 + p(1 - p^(-2(k+1))) for all small cases
        for p in (2, 3, 5):
            for k in (0, 1, 2):
                res = exact_truncated_average(p, 2, k)
                q = Fraction(1, p)
                assert res.per_column == 1 - q ** (2 * (k + 1))
                assert res.exact_value == 1 + p * (1 - q ** (2 * (k + 1)))
                assert res.exact_value == 1 + p * res.per_column

    def test_full_enumeration_oracle_g1_p3(self):
        # coefficients mod 3^3 determine the k=0 truncated count
        budget = 3
        total = 0
        count = 0
        for a0 in range(27):
            for a1 in range(27):
                for a2 in range(27):
                    _, affine, _, _ = build_patch_tree(
                        3, [a0, a1, a2, 1], budget, 0, beyond_guard="truncate"
                    )
                    total += 1 + affine
                    count += 1
        assert Fraction(total, count) == Fraction(11, 3)

    def test_full_enumeration_oracle_g1_p2(self):
        # independent route: enumerate all coefficient tuples mod 2^6 and
        # average the truncated count; must agree bit-exactly
        budget = 6
        for k in (0, 1):
            total = 0
            count = 0
            for a0 in range(2**budget):
                for a1 in range(2**budget):
                    for a2 in range(2**budget):
                        f = [a0, a1, a2, 1]
                        _, affine, _, _ = build_patch_tree(
                            2, f, budget, k, beyond_guard="truncate"
                        )
                        total += 1 + affine
                        count += 1
            assert Fraction(total, count) == exact_truncated_average(2, 1, k).exact_value


class TestMonteCarlo:
    def test_small_run_matches_truncated_expectation(self):
        cfg = SampleConfig(prime=2, genus=2, trials=4000, seed=7, depth_guard=8)
        res = mc_average_smooth(cfg)
        assert res.guard_hits == 0
        # within 5 standard errors of p + 1 (tail truncation bias is far
        # below the sampling noise at this guard)
        assert abs(float(res.mean) - 3.0) < 5 * max(res.stderr, 1e-9)

    def test_mc_converges_to_exact_truncated_value(self):
        # z-test at 4 sigma: a guard of k makes the sampled count the same
        # random variable whose mean the exact enumeration computes
        for p, k, trials in ((2, 0, 30000), (2, 1, 30000), (3, 0, 20000)):
            cfg = SampleConfig(prime=p, genus=1, trials=trials, seed=31, depth_guard=k)
            res = mc_average_smooth(cfg)
            exact = exact_truncated_average(p, 1, k).exact_value
            z = (float(res.mean) - float(exact)) / max(res.stderr, 1e-9)
            assert abs(z) < 4

    def test_reproducible(self):
        cfg = SampleConfig(prime=3, genus=1, trials=500, seed=21)
        a = mc_average_smooth(cfg)
        b = mc_average_smooth(cfg)
        assert a.mean == b.mean and a.histogram == b.histogram

    def test_trials_precondition(self):
        with pytest.raises(InvalidCurve):
            SampleConfig(prime=2, genus=2, trials=0, seed=1)
        with pytest.raises(InvalidCurve):
            case_frequencies(2, 2, trials=0, seed=1)

    def test_histogram_accounts_all_trials(self):
        cfg = SampleConfig(prime=2, genus=1, trials=300, seed=5)
        res = mc_average_smooth(cfg)
        assert sum(res.histogram.values()) == 300
        assert res.mean == Fraction(
            sum(v * n for v, n in res.histogram.items()), 300
        )


class TestColumnProcess:
    def test_x0_mean_near_one(self):
        stats = x0_statistics(2, 2, trials=20000, seed=3)
        assert abs(float(stats.mean) - 1.0) < 5 * max(stats.stderr, 1e-9)
        for B, freq, bound in stats.tail_rows:
            assert freq <= bound

    def test_single_trial(self):
        stats = x0_statistics(2, 2, trials=1, seed=9)
        assert sum(stats.histogram.values()) == 1
        assert stats.mean == Fraction(list(stats.histogram)[0])

    def test_case_frequencies(self):
        # 4 standard errors at 10^6 trials for p = 2; fewer for p = 3 since
        # the empirical resolution scales the same way
        for p, trials, expected in [
            (2, 10**6, (Fraction(1, 2), Fraction(1, 4), Fraction(1, 8), Fraction(1, 8))),
            (3, 2 * 10**5, (Fraction(2, 3), Fraction(2, 9), Fraction(2, 27), Fraction(1, 27))),
        ]:
            res = case_frequencies(p, 2, trials=trials, seed=11)
            assert tuple(res.expected.values()) == expected
            for label, prob in res.expected.items():
                emp = res.empirical(label)
                sigma = (float(prob * (1 - prob)) / res.trials) ** 0.5
                assert abs(float(emp - prob)) < 4 * sigma + 1e-12
