import random
from fractions import Fraction

import pytest

from gwloc.coh_ring import BundleSpec, CohClass
from gwloc.exact_arith import RationalFunction as RF
from gwloc.target_model import (CurveClass, LinearForm, TargetError,
                                build_target, lift_class, proj_bundle,
                                projective_space, restrict_class)


class TestBuild:
    def test_p1(self):
        m = projective_space(1)
        assert len(m.fixed_points) == 2
        assert len(m.lines) == 1
        line = m.lines[0]
        x0, x1 = LinearForm.sym("x0"), LinearForm.sym("x1")
        assert line.tangent_p == x0 - x1
        assert line.tangent_q == x1 - x0

    def test_product_combinatorics(self):
        m = proj_bundle(1, (0, 0))
        assert len(m.fixed_points) == 4
        vertical = [l for l in m.lines if l.cls == CurveClass(0, 1)]
        horizontal = [l for l in m.lines if l.cls == CurveClass(1, 0)]
        assert len(vertical) == 2 and len(horizontal) == 2

    def test_horizontal_class_twisted(self):
        m = proj_bundle(1, (1, 1))
        horizontal = [l for l in m.lines if l.cls.d_base == 1]
        assert all(l.cls == CurveClass(1, -1) for l in horizontal)

    def test_pm_tangent_splitting(self):
        m = projective_space(2)
        for line in m.lines:
            degrees = sorted(ts.degree for ts in line.tangent_splitting)
            assert degrees == [1, 2]

    def test_negative_needs_flag(self):
        with pytest.raises(TargetError):
            build_target("proj_bundle", BundleSpec(1, (-1, -1)))
        m = build_target("proj_bundle", BundleSpec(1, (-1, -1)), allow_negative=True)
        assert len(m.fixed_points) == 4

    def test_unsupported_kind(self):
        with pytest.raises(TargetError):
            build_target("grassmannian")


class TestLiftClass:
    def test_zero(self):
        m = proj_bundle(1, (0, 0))
        assert lift_class(m, 0) == CurveClass(0, 0)

    def test_unit(self):
        for twists in ((1, 1), (0, 2)):
            m = proj_bundle(1, twists)
            lifted = lift_class(m, 1)
            assert lifted == CurveClass(1, 0)
            assert m.is_effective(lifted)


class TestRestrict:
    def test_hyperplane_on_p2(self):
        m = projective_space(2)
        ray = {s: Fraction(i + 1) for i, s in enumerate(m.weight_symbols)}
        got = restrict_class(m, CohClass.hyperplane(m.ring), 2, ray)
        assert got.constant_value() == ray["x2"]

    def test_h_trivial_bundle(self):
        m = proj_bundle(1, (0, 0))
        ray = {s: Fraction(i + 2) for i, s in enumerate(m.weight_symbols)}
        # fixed point (0, 1): h restricts to -mu1
        idx = next(fp.index for fp in m.fixed_points if fp.label == "(0,1)")
        got = restrict_class(m, CohClass.fiber_class(m.ring), idx, ray)
        assert got.constant_value() == -ray["mu1"]

    def test_h_plus_lambda_lift(self):
        m = proj_bundle(1, (1, 1))
        ray = {s: Fraction(i + 1) for i, s in enumerate(m.weight_symbols)}
        idx = next(fp.index for fp in m.fixed_points if fp.label == "(1,2)")
        cls = CohClass.fiber_class(m.ring) + CohClass.scalar(m.ring, RF.lam())
        got = restrict_class(m, cls, idx, ray)
        expected = RF.lam() - (ray["x1"] + ray["mu2"])
        assert got == expected


class TestConsistency:
    def test_euler_class_consistency(self):
        # sum of tangent weights of lines at a fixed point = restriction of
        # the anticanonical lift (symbolic check)
        targets = [projective_space(1), projective_space(2),
                   proj_bundle(1, (0, 0)), proj_bundle(1, (1, 2)),
                   proj_bundle(2, (0, 1, 3))]
        for m in targets:
            for fp in m.fixed_points:
                total = LinearForm()
                for line in m.lines:
                    p, q = line.endpoints
                    if p == fp.index:
                        total = total + line.tangent_p
                    elif q == fp.index:
                        total = total + line.tangent_q
                expected = LinearForm()
                for w in fp.tangent_weights:
                    expected = expected + w
                assert total == expected, (m.kind, fp.label)

    def test_class_lattice_consistency(self):
        # degree of the dual tautological bundle on each line matches d_h
        for m in (proj_bundle(1, (0, 0)), proj_bundle(1, (1, 2)), proj_bundle(2, (0, 2))):
            for line in m.lines:
                bd = line.bundle_degrees["O(-1)"]
                assert -bd.degree == line.cls.d_h

    def test_tangent_weight_interpolation_consistency(self):
        # weight at q of each tangent summand equals the p-weight shifted by
        # degree times the line tangent step
        for m in (projective_space(2), proj_bundle(1, (1, 2)), proj_bundle(2, (0, 1))):
            for line in m.lines:
                for ts in line.tangent_splitting:
                    lhs = ts.weight_q
                    rhs = ts.weight_p - ts.degree * line.tangent_p
                    assert lhs == rhs

    def test_draw_ray_distinct(self):
        m = proj_bundle(2, (0, 1, 3))
        ray = m.draw_ray(random.Random(3))
        for fp in m.fixed_points:
            vals = [w.value(ray) for w in fp.tangent_weights]
            assert len(set(vals)) == len(vals)
            assert all(v != 0 for v in vals)

    def test_effectivity(self):
        m = proj_bundle(1, (0, 2))
        assert m.is_effective(CurveClass(1, -2))
        assert not m.is_effective(CurveClass(1, -3))
        assert m.is_effective(CurveClass(0, 1))
        assert not m.is_effective(CurveClass(0, -1))
