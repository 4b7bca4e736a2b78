import random
from fractions import Fraction

import pytest

from padic_chabauty.chabauty import (
    DiskExpansion,
    GoodReductionCurve,
    disk_report,
    expand_at_disk,
    per_disk_image,
    residue_disks,
    rholog_report,
    rholog_single_disk_curve,
    verify_hypotheses,
)
from padic_chabauty.errors import BadReduction, HypothesisFailed, InsufficientTruncation
from padic_chabauty.padic import PadicNumber, padic_make
from padic_chabauty.polyutil import discriminant, poly_eval
from padic_chabauty.projred import rho
from padic_chabauty.series import formal_integrate


def family_curve(g):
    """y^2 + y = x^(2g+1) + x + 1."""
    r = [1, 1] + [0] * (2 * g - 1) + [1]
    return GoodReductionCurve.from_qr(g, [1], r)


class TestCurveValidation:
    def test_family_accepted(self):
        family_curve(2)

    def test_bad_reduction_rejected_odd_p(self):
        # disc(x^3 + x) = -4 = 2 mod 3 is a unit, good; x^3 - 3x is not
        GoodReductionCurve.from_f(3, 1, [0, 1, 0, 1])
        with pytest.raises(BadReduction):
            GoodReductionCurve.from_f(3, 1, [0, -3, 0, 1])

    def test_q_zero_rejected_at_two(self):
        with pytest.raises(BadReduction):
            GoodReductionCurve.from_qr(1, [0], [1, 1, 0, 1])

    def test_singular_fiber_rejected_at_two(self):
        # q = x: singular where x = 0 meets q'^2 r = r'^2
        with pytest.raises(BadReduction):
            GoodReductionCurve.from_qr(1, [0, 1], [0, 0, 0, 1])


class TestResidueDisks:
    def test_family_single_disk(self):
        disks = residue_disks(family_curve(2))
        assert len(disks) == 1
        assert disks[0].is_infinity_disk

    def test_x5_plus_1_at_3(self):
        disks = residue_disks(GoodReductionCurve.from_f(3, 2, [1, 0, 0, 0, 0, 1]))
        centers = [(d.chart, d.center) for d in disks]
        assert centers == [
            ("affine", (0, 1)),
            ("affine", (0, 2)),
            ("affine", (2, 0)),
            ("infinity", (0, 0)),
        ]

    def test_x3_plus_x_at_3(self):
        disks = residue_disks(GoodReductionCurve.from_f(3, 1, [0, 1, 0, 1]))
        assert len(disks) == 4  # (0,0), (2,1), (2,2), infinity


class TestExpansion:
    def test_infinity_chart_series(self):
        for g in (2, 3):
            exp = expand_at_disk(family_curve(g), residue_disks(family_curve(g))[0])
            s = exp.coordinate_series["s"]
            # s = t^2 + t^(2g+3) + ...
            assert s.coeffs[2].residue(4) == 1
            assert s.coeffs[2 * g + 3].residue(4) == 1
            for k in (0, 1, 3, 4):
                c = s.coeffs[k]
                assert c.is_exact_zero or c.lower_valuation_bound() >= 4
            # w_1 = 1 + 0 t + ..., w_j = t^(2j-2) + ...
            w = exp.w
            assert w.entries[0].coeffs[0].residue(2) == 1
            c1 = w.entries[0].coeffs[1]
            assert c1.is_exact_zero or c1.lower_valuation_bound() >= 2
            for j in range(2, g + 1):
                lead = w.entries[j - 1].coeffs[2 * j - 2]
                assert lead.residue(2) == 1
            assert exp.n_D == 0

    def test_weierstrass_disk(self):
        curve = GoodReductionCurve.from_f(3, 2, [1, 0, 0, 0, 0, 1])
        disk = [d for d in residue_disks(curve) if d.center == (2, 0)][0]
        exp = expand_at_disk(curve, disk)
        # w_1 = 1/f'(x(tau)) is a unit at the center, so no zeros
        assert exp.n_D == 0
        x = exp.coordinate_series["x"]
        # x(0) is the root of x^5 + 1 near 2 in Z_3 (check mod 27)
        x0 = x.coeffs[0].residue(3)
        assert poly_eval([1, 0, 0, 0, 0, 1], x0) % 27 == 0

    def test_truncation_precondition(self):
        curve = family_curve(2)
        with pytest.raises(InsufficientTruncation):
            expand_at_disk(curve, residue_disks(curve)[0], T=4)

    def test_expansion_satisfies_chart_equation(self):
        # sampling check: (s(t), t) satisfies t^2 + Q(s) t = R(s) to precision
        curve = family_curve(2)
        exp = expand_at_disk(curve, residue_disks(curve)[0])
        s = exp.coordinate_series["s"]
        Qc, Rc = curve.infinity_chart()
        for tval in (2, 6, 10):
            tau = padic_make(2, tval, 1, 16)
            sval = s.evaluate(tau)
            lhs = tau * tau + _eval_poly_padic(Qc, sval, 2) * tau
            rhs = _eval_poly_padic(Rc, sval, 2)
            diff = lhs - rhs
            assert not diff.is_nonzero or diff.valuation >= 12


def _eval_poly_padic(coeffs, x, p):
    acc = PadicNumber.exact_zero(p)
    for c in reversed(coeffs):
        if not acc.is_exact_zero:
            acc = acc * x
        if c:
            acc = acc + padic_make(p, c, 1, 24)
    return acc


class TestHypotheses:
    def test_family_passes(self, capsys=None):
        for g in (2, 3, 4):
            rep = verify_hypotheses(family_curve(g))
            assert rep.all_pass()
            assert rep.details["completed_square_hull"] == [(0, -2), (2 * g + 1, 0)]

    def test_extra_fiber_point_fails(self):
        # y^2 + y = x^5: (0, 0) is on the special fiber
        curve = GoodReductionCurve.from_qr(2, [1], [0, 0, 0, 0, 0, 1])
        rep = verify_hypotheses(curve)
        assert not rep.single_disk
        with pytest.raises(HypothesisFailed) as err:
            rholog_single_disk_curve(curve)
        assert err.value.check == "MultipleDisks"

    def test_nonconstant_q_fails_involution(self):
        # y^2 + xy = x^3 + 1 (g = 1): smooth fiber, but q has the root 0,
        # which meets the fiber at (0, 1)
        curve = GoodReductionCurve.from_qr(1, [0, 1], [1, 0, 0, 1])
        rep = verify_hypotheses(curve)
        assert rep.smooth_fiber
        assert not rep.involution_fixes_only_infinity


class TestRhoLog:
    def test_worked_example_all_genera(self):
        for g in (2, 3, 4, 5):
            res = rholog_single_disk_curve(family_curve(g))
            expected = (1,) + (0,) * (g - 1)
            assert [pt.coords for pt in res.union] == [expected]
            assert res.sum_n_D == 0

    def test_log_zero_only_at_infinity(self):
        # the integrated series l / t has a unit leading coefficient, so the
        # only zero of the logarithm on the disk is t = 0
        curve = family_curve(3)
        exp = expand_at_disk(curve, residue_disks(curve)[0])
        ell = formal_integrate(exp.w)
        k, shifted = ell.factor_t_power()
        assert k == 1
        assert shifted.entries[0].coeffs[0].residue(1) == 1

    def test_denominator_of_last_component(self):
        # integrating t^(2g-2) + ... gives t^(2g-1)/(2g-1): the coefficient is
        # computed directly rather than assumed
        for g in (2, 3):
            curve = family_curve(g)
            exp = expand_at_disk(curve, residue_disks(curve)[0])
            ell = formal_integrate(exp.w)
            lead = ell.entries[g - 1].coeffs[2 * g - 1]
            expected = Fraction(1, 2 * g - 1)
            diff = lead - PadicNumber.from_fraction(2, expected, 12)
            assert not diff.is_nonzero or diff.valuation >= 8

    def test_scaling_invariance(self):
        # rescaling the logarithm by units or p-powers never changes the image
        curve = family_curve(2)
        exp = expand_at_disk(curve, residue_disks(curve)[0])
        base = per_disk_image(curve, exp)
        for scalar in (Fraction(3), Fraction(1, 2), Fraction(2)):
            scaled = DiskExpansion(
                disk=exp.disk,
                w=exp.w.map(lambda s: s.scale_fraction(scalar)),
                n_D=exp.n_D,
                bound=exp.bound,
                coordinate_series=exp.coordinate_series,
            )
            img = per_disk_image(curve, scaled)
            assert set(img.points) == set(base.points)

    def test_sampling_soundness(self):
        curve = family_curve(2)
        res = rholog_single_disk_curve(curve)
        exp = res.expansions[0]
        ell = formal_integrate(exp.w)
        points = set(res.union)
        rng = random.Random(3)
        from padic_chabauty.series import INF, TruncatedSeries

        # evaluate the polynomial part of the integral; the dropped tail has
        # valuation >= min(n - log2(n+1)) over n >= T, far above the leading
        # valuation ~1 of the entries at |t| = 1/2, so rho is unaffected
        polys = [TruncatedSeries(2, e.coeffs, INF) for e in ell.entries]
        for _ in range(50):
            tval = 2 * (2 * rng.randrange(1, 2**9) + 1)  # exact valuation 1
            tau = padic_make(2, tval, 1, 16)
            vec = [e.evaluate(tau) for e in polys]
            assert rho(vec) in points


class TestDiskReport:
    def test_sum_bound_random_good_reduction(self):
        rng = random.Random(17)
        for p in (3, 5):
            count = 0
            while count < 12:
                f = [rng.randrange(0, p**2) for _ in range(4)] + [0, 1]
                d = discriminant(f)
                if d == 0 or d % p == 0:
                    continue
                count += 1
                curve = GoodReductionCurve.from_f(p, 2, f)
                rep = disk_report(curve)
                assert rep.sum_n_D <= 2 * curve.genus - 2
                for e in rep.expansions:
                    img = per_disk_image(curve, e)
                    assert img.size <= e.bound

    def test_rholog_report_surrogate(self):
        curve = GoodReductionCurve.from_f(3, 2, [1, 0, 0, 0, 0, 1])
        res = rholog_report(curve)
        assert res.constants_assumed_zero
        assert len(res.images) == 4

    def test_p2_affine_disks_both_uniformizers(self):
        # y^2 + xy = x^3 + 1 at p = 2: (0, 1) has q(0) = 0 mod 2 and needs
        # the y-uniformizer; (1, 0) and (1, 1) use the x-uniformizer
        curve = GoodReductionCurve.from_qr(1, [0, 1], [1, 0, 0, 1])
        disks = residue_disks(curve)
        unis = {(d.center, d.uniformizer) for d in disks if d.chart == "affine"}
        assert ((0, 1), "y - y0") in unis
        assert ((1, 0), "x - x0") in unis and ((1, 1), "x - x0") in unis
        rep = disk_report(curve)
        assert rep.sum_n_D == 0  # genus 1: no zeros anywhere
        for e in rep.expansions:
            img = per_disk_image(curve, e)
            assert img.size <= e.bound
