import random

import pytest

from padic_chabauty.errors import DepthGuardExceeded, InvalidCurve
from padic_chabauty.model import (
    CASE_BLOWN_UP,
    CASE_RECURSE,
    CASE_REGULAR_NOT_SMOOTH,
    CASE_SIMPLE_ZERO,
    CASE_UNIT_DERIVATIVE,
    CASE_UNIT_VALUE,
    CurveInput,
    classify_column,
    height,
    make_decent_model,
    reduce_point,
    sample_curve_point,
)
from padic_chabauty.padic import vp_int
from padic_chabauty.polyutil import discriminant, poly_eval

from oracles import smooth_affine_points_mod_p


def curve(p, g, *a):
    return CurveInput(prime=p, genus=g, coeffs=tuple(a))


class TestDiscriminant:
    def test_examples(self):
        assert curve(2, 1, 0, -1, 0).disc() == 4  # x^3 - x
        assert curve(2, 1, 0, 1, 1).disc() == -31  # x^3 + x + 1
        assert discriminant([0, 0, 0, 1]) == 0  # x^3, rejected downstream


class TestClassify:
    def test_unit_derivative(self):
        rec = classify_column([1, 1, 0, 1], 0, 2)  # x^3+x+1 at c=0
        assert rec.case == CASE_UNIT_DERIVATIVE
        assert rec.smooth_count == 1

    def test_regular_not_smooth(self):
        rec = classify_column([1, 1, 0, 1], 1, 2)  # a=3, b=4
        assert rec.case == CASE_REGULAR_NOT_SMOOTH
        assert rec.smooth_count == 0

    def test_recurse_child(self):
        rec = classify_column([0, -1, 0, 1], 1, 2)  # x^3-x at c=1
        assert rec.case == CASE_RECURSE
        assert list(rec.child_h) == [0, 1, 3, 2]  # 2x^3 + 3x^2 + x

    def test_blowup_counts(self):
        # f = x^3 + 3x + 5 at c=1: a=9=1 mod 4, b=6, c2=3
        rec = classify_column([5, 3, 0, 1], 1, 2)
        assert rec.case == CASE_BLOWN_UP
        assert rec.blowup_rhs == (0, 1, 1)
        assert rec.smooth_count == 4

    def test_case_partition_exhaustive(self):
        # the five tags partition all (a mod p^2, b mod p) classes
        for p in (2, 3):
            for a in range(p * p * p):
                for b in range(p):
                    for c2 in range(p):
                        rec = classify_column([a, b, c2], 0, p)
                        if b % p:
                            assert rec.case == CASE_UNIT_DERIVATIVE
                        elif a % p:
                            assert rec.case in (
                                CASE_UNIT_VALUE,
                                CASE_REGULAR_NOT_SMOOTH,
                                CASE_BLOWN_UP,
                            )
                        elif a % (p * p):
                            assert rec.case == CASE_SIMPLE_ZERO
                        else:
                            assert rec.case == CASE_RECURSE


class TestDecentModel:
    def test_good_reduction_cubic(self):
        model = make_decent_model(curve(2, 1, 0, 1, 1))  # x^3 + x + 1
        assert model.total_smooth == 2
        assert model.max_depth_reached == 0

    def test_x_cubed_minus_x(self):
        model = make_decent_model(curve(2, 1, 0, -1, 0))
        assert model.total_smooth == 4
        assert model.max_depth_reached == 1

    def test_zero_disc_rejected(self):
        with pytest.raises(InvalidCurve):
            make_decent_model(curve(2, 1, 0, 0, 0))

    def test_child_patch_law(self):
        # p^2 * h_child(x) = h(c + p x) exactly, wherever recursion happens
        rng = random.Random(3)
        for _ in range(50):
            p = rng.choice([2, 3])
            h = [rng.randrange(-20, 20) for _ in range(4)] + [1]
            for c in range(p):
                rec = classify_column(h, c, p)
                if rec.case != CASE_RECURSE:
                    continue
                for x in range(5):
                    lhs = p * p * poly_eval(list(rec.child_h), x)
                    rhs = poly_eval(h, c + p * x)
                    assert lhs == rhs

    def test_good_reduction_count_matches_oracle_odd_p(self):
        # at odd p with unit discriminant, the decent model count equals the
        # Jacobian-criterion count on the standard compactification
        rng = random.Random(5)
        for p in (3, 5):
            found = 0
            while found < 30:
                a = [rng.randrange(0, p**3) for _ in range(3)]
                f = [a[0], a[1], a[2], 1]
                d = discriminant(f)
                if d == 0 or vp_int(d, p) != 0:
                    continue
                found += 1
                model = make_decent_model(CurveInput(p, 1, (a[2], a[1], a[0])))
                expected = 1 + len(smooth_affine_points_mod_p(f, p))
                assert model.total_smooth == expected

    def test_depth_guard(self):
        # f = x^3 - x needs depth 1; a guard of 0 must fail loudly
        with pytest.raises(DepthGuardExceeded):
            make_decent_model(curve(2, 1, 0, -1, 0), depth_guard=0)


class TestPoints:
    def test_sample_examples(self):
        c = curve(2, 1, 0, 1, 1)  # x^3+x+1
        rng = _FixedX(0)
        x, y = sample_curve_point(c, rng, precision=12)
        assert x == 0
        assert y.residue(2) == 1  # the 1 mod 4 branch of sqrt(1)
        rng = _FixedX(1)
        assert sample_curve_point(c, rng, precision=12) is None  # f(1)=3

    def test_sample_qr_at_5(self):
        c = curve(5, 1, 0, -1, 0)  # x^3 - x; f(2) = 6, a QR mod 5
        x, y = sample_curve_point(c, _FixedX(2), precision=10)
        assert (y * y).residue(1) == 1  # 6 = 1 mod 5

    def test_reduce_point_traces(self):
        c = curve(2, 1, 0, 1, 1)
        model = make_decent_model(c)
        x, y = sample_curve_point(c, _FixedX(0), precision=12)
        path, fp = reduce_point(model, (x, y))
        assert fp == (0, 1)
        assert reduce_point(model, "infinity") == ("infinity", (0, 0))

    def test_reduce_point_through_recursion(self):
        c = curve(2, 1, 0, -1, 0)  # x^3 - x
        model = make_decent_model(c)
        # f(33) = 2^6 * 561 with 561 = 1 mod 8: a point over x = 1 mod 2,
        # walking into the depth-1 patch at child column (33-1)/2 = 0 mod 2
        x, y = 33, None
        pt = sample_curve_point(c, _FixedX(33), precision=16)
        assert pt is not None
        path, fp = reduce_point(model, pt)
        assert path == (1, 0)
        assert fp == (0, 0)
        rng = random.Random(7)
        hits = 0
        for _ in range(200):
            pt = sample_curve_point(c, rng, precision=16)
            if pt is None:
                continue
            reduce_point(model, pt)
            hits += 1
        assert hits > 5

    def test_decency_sweep(self):
        rng = random.Random(11)
        for p in (2, 3):
            for _ in range(60):
                g = rng.choice([1, 2])
                coeffs = tuple(rng.randrange(-p**4, p**4) for _ in range(2 * g + 1))
                try:
                    cur = CurveInput(p, g, coeffs)
                    d = cur.disc()
                    if d == 0:
                        continue
                    model = make_decent_model(cur)
                except InvalidCurve:
                    continue
                # empirical: recursion depth never exceeds v_p(disc)
                assert model.max_depth_reached <= max(vp_int(d, p), 0)
                for _ in range(10):
                    pt = sample_curve_point(cur, rng)
                    if pt is None:
                        continue
                    reduce_point(model, pt)  # must not raise


class _FixedX:
    def __init__(self, x):
        self.x = x

    def randrange(self, _):
        return self.x


class TestHeight:
    def test_examples(self):
        assert height((0, 0, 0, 0, 32)) == 2.0
        assert height((3, 0, 0, 0, 0)) == 3.0
        assert height((0, 0, 0)) == 0.0

    def test_exact_comparison(self):
        # |a_2|^(1/2) = 3 beats |a_1| = 8
        assert height((8, 9, 0)) == 8.0
        assert height((2, 9, 0)) == 3.0
