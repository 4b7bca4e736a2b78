from fractions import Fraction

import pytest

from padic_chabauty.bounds import (
    avg_rholog_bound,
    curve_image_bound,
    density_bounds,
    density_main,
    density_odd,
    exact_delta_sum,
    excluded_density,
)
from padic_chabauty.errors import InvalidCurve
from padic_chabauty.series import delta


class TestDeltaSum:
    def test_all_parts_zero(self):
        for p in (3, 5):
            for d in (1, 3, 5):
                assert exact_delta_sum(p, d, 0) == d * delta(p, 0)

    def test_single_part(self):
        assert exact_delta_sum(3, 1, 2) == max(delta(3, n) for n in (0, 1, 2))

    def test_bound_exhaustive(self):
        # Delta_p(d, N) <= N/(p-2) for p in {3,5,7}, d <= 8, N <= 40
        for p in (3, 5, 7):
            for d in range(0, 9):
                for N in range(0, 41):
                    assert exact_delta_sum(p, d, N) <= Fraction(N, p - 2)


class TestCurveImageBound:
    def test_examples(self):
        assert curve_image_bound(2, 1, 2) == 11
        assert curve_image_bound(3, 4, 2) == 28
        with pytest.raises(InvalidCurve):
            curve_image_bound(2, 0, 2)

    def test_constant_folding_consistency(self):
        # 5d + 6g - 6 reassembles from p(2g-2) + (p+1)d + p(d + (2g-2)/2)
        for d in range(1, 6):
            for g in range(1, 6):
                reassembled = (
                    2 * (2 * g - 2) + 3 * d + 2 * (d + Fraction(2 * g - 2, 2))
                )
                assert curve_image_bound(2, d, g) == reassembled


class TestAvgBound:
    def test_examples(self):
        assert avg_rholog_bound(2, 3) == 27
        assert avg_rholog_bound(2, 3, refined=True) == Fraction(27, 2)
        assert avg_rholog_bound(3, 2) == 28

    def test_refined_odd(self):
        assert avg_rholog_bound(3, 2, refined=True) == 6 * 1 + Fraction(16, 2)


class TestDensities:
    def test_positivity_threshold(self):
        # positive iff g >= 7, over 2 <= g <= 30
        for g in range(2, 31):
            assert (density_main(g) > 0) == (g >= 7)

    def test_g7_value(self):
        assert density_main(7) == 1 - Fraction(104, 128)
        assert density_main(7) == Fraction(3, 16)

    def test_g10_value(self):
        assert density_main(10) == Fraction(221, 256)

    def test_excluded_density(self):
        assert excluded_density(2, 3, 1) == Fraction(1, 2)

    def test_odd_density(self):
        val = density_odd(3, 2)
        assert val == 1 - Fraction(1 + 16 + 12, 3)

    def test_report_set(self):
        reports = density_bounds(3, p=3, image_size=2)
        names = [r.formula for r in reports]
        assert names == ["density-main", "density-odd", "excluded-density"]
