from fractions import Fraction as F

import mpmath
import pytest

from liyorke import (
    ClosedInterval, ExplicitScheme, LogisticFamily, ParamSequence, TimeVaryingSystem, backward_interval, certify,
    itinerary_of_orbit, lift_to_time_zero, predicted_times, synthesize, validate,
)
from liyorke.errors import (
    DepthTooLarge, EmptyPreimage, IncompatibleSchedules, NoMonotonePreimage, TolTooTight,
)
from liyorke.numeric import to_mpf
from liyorke.scramble import MAX_DEPTH, close_bounds, contraction_depth

V1, V2 = ClosedInterval(F(3, 5), F(1)), ClosedInterval(F(0), F(1, 3))
ALL_J0 = ExplicitScheme((), (2,))


class TestBackwardInterval:
    def test_examples(self, example):
        assert backward_interval(example, ALL_J0, depth=0) == ClosedInterval(0.0, float(F(1, 3)))
        with mpmath.workdps(40):
            J = backward_interval(example, ALL_J0, depth=1, dps=40)
            exact_hi = (1 - mpmath.sqrt(mpmath.mpf(19) / 27)) / 2
            assert J.lo == 0 and abs(J.hi - exact_hi) < mpmath.mpf(10) ** -30

    def test_float_mode_is_nested(self, example):
        prev = None
        for n in range(25):
            J = backward_interval(example, ALL_J0, depth=n)
            assert J.diameter <= 1.5 ** -n * 0.4 + 1e-13
            if prev is not None:
                assert prev.contains_interval(J)
            prev = J

    def test_errors(self, example):
        with pytest.raises(DepthTooLarge):
            backward_interval(example, ALL_J0, depth=MAX_DEPTH + 1)
        with pytest.raises(ValueError):
            backward_interval(example, ALL_J0, depth=-1)
        weak = TimeVaryingSystem(LogisticFamily(), ParamSequence.constant(F(2)), (V1, V2))
        with pytest.raises(EmptyPreimage) as e:
            backward_interval(weak, ExplicitScheme((2,), (1,)), depth=1)
        assert e.value.witness["step"] == 0


class TestSynthesize:
    def test_points(self, example, points42):
        assert len(points42) == 8
        values = [p.value for p in points42]
        assert len(set(values)) == 8
        for p in points42:
            assert p.enclosure.diameter <= 1e-10 and p.enclosure.contains(p.value)
            orb = p.orbit(example, p.depth - p.guard)
            assert itinerary_of_orbit(orb, example.partition) == p.itinerary.prefix(p.depth - p.guard + 1)

    def test_pair_differing_at_b1(self, example, cert42):
        a, b = synthesize(cert42, example, 2, 1e-10, ["0", "1"])
        assert a.enclosure.intersect(b.enclosure) is None
        _, far = predicted_times(a, b)
        assert far[0] == 6  # second symbol of B_1, where w1 and w2 part

    def test_deterministic(self, example, cert42, points42):
        again = synthesize(cert42, example, 8, 1e-10)
        assert [p.value for p in again] == [p.value for p in points42]

    def test_bad_arguments(self, example, cert42):
        with pytest.raises(TolTooTight):
            synthesize(cert42, example, 2, 0)
        with pytest.raises(TolTooTight):
            synthesize(cert42, example, 2, 1e-400)
        with pytest.raises(ValueError):
            synthesize(cert42, example, 1)
        with pytest.raises(ValueError):
            synthesize(cert42, example, 2, choices=["0", "0"])

    def test_contraction_depth(self, cert42, points42):
        depth = contraction_depth(cert42, ALL_J0, 1e-10)
        # 0.4 / 1.5**d <= 1e-10 first at d = 55
        assert depth == 55
        assert all(p.depth >= contraction_depth(cert42, p.itinerary, 1e-10) for p in points42)

    def test_t31_route(self, example, ones):
        cert = certify(example, ones, "T31")
        pts = synthesize(cert, example, 4, 1e-10)
        sched = pts[0].itinerary.schedule
        orbits = [p.orbit(example) for p in pts]
        for ia in range(4):
            for ib in range(ia + 1, 4):
                close, _ = predicted_times(pts[ia], pts[ib])
                bounds = close_bounds(cert, pts[ia].itinerary, pts[ia].depth - pts[ia].guard)
                assert close == [sched.h[j] for j in range(len(close))]
                for j, (t, bnd) in enumerate(zip(close, bounds), start=1):
                    assert abs(orbits[ia][t] - orbits[ib][t]) <= to_mpf(bnd)
                    # the alpha-cylinder bound is at most mu0**h_{j-1} 2**-j
                    assert bnd <= sched.mu0 ** sched.h[j - 1] / F(2) ** j


class TestPredictedTimes:
    def test_anchors(self, points42):
        a, b = points42[0], points42[4]
        close, far = predicted_times(a, b)
        assert close[:4] == [0, 2, 8, 18]
        end, _ = predicted_times(a, b, anchor="end")
        assert end[:4] == [0, 3, 10, 21]
        assert far and all(a.itinerary.symbol_at(n) != b.itinerary.symbol_at(n) for n in far)
        with pytest.raises(ValueError):
            predicted_times(a, b, anchor="middle")

    def test_same_point(self, points42):
        assert predicted_times(points42[0], points42[0])[1] == []

    def test_incompatible(self, example, ones, points42):
        p31 = synthesize(certify(example, ones, "T31"), example, 2, 1e-10)[0]
        with pytest.raises(IncompatibleSchedules):
            predicted_times(points42[0], p31)


class TestLift:
    def test_time_zero(self, example, points42):
        assert lift_to_time_zero(example, points42[0]) == points42[0].value

    def test_lift_one_step(self, ones):
        sys = TimeVaryingSystem(LogisticFamily(), ParamSequence.constant(F(9, 2)), (V1, V2), n0=1)
        cert = certify(sys, ones, "T42", 2)
        p = synthesize(cert, sys, 2, 1e-10)[0]
        x0 = lift_to_time_zero(sys, p)
        with mpmath.workdps(p.dps):
            y = sys.evaluate(0, x0)
        assert p.enclosure.contains(y)

    def test_no_monotone_preimage(self, ones):
        # f_0 with r = 2 maps everything below 1/2, so V_1 = [3/5, 1] has no preimage at time 0
        params = ParamSequence((F(2),), periodic=(F(9, 2),))
        sys = TimeVaryingSystem(LogisticFamily(), params, (V1, V2), n0=1)
        cert = certify(sys, ones, "T42", 2)
        p = synthesize(cert, sys, 2, 1e-10)[0]
        with mpmath.workdps(p.dps):
            target = ClosedInterval(mpmath.mpf("0.7"), mpmath.mpf("0.8"))
        p = type(p)(p.value, target, p.itinerary, p.depth, p.choice_bits, p.dps, p.n0, p.route, p.guard)
        with pytest.raises(NoMonotonePreimage):
            lift_to_time_zero(sys, p)
