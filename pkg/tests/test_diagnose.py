from fractions import Fraction as F

import mpmath
import pytest

from liyorke import boundedness_check, itinerary_of_orbit, pairwise_report, summary
from liyorke.diagnose import default_bound
from liyorke.errors import HorizonTooShort


@pytest.fixture(scope="module")
def reports(example, cert42, points42):
    return pairwise_report(example, points42, cert=cert42)


def test_itinerary_examples(example):
    assert itinerary_of_orbit([0.1, 0.2, 0.0], example.partition) == (2, 2, 2)
    assert itinerary_of_orbit([0.7, 1.05, 0.2], example.partition) == (1, None, 2)


def test_boundedness_examples(example, points42):
    assert boundedness_check(points42[0].orbit(example), 2)
    assert not boundedness_check(example.orbit(2.0, 0, 5), 2)
    assert boundedness_check([0, 0, 0], 0)
    assert default_bound(example.partition) == 2


def test_all_pairs_consistent(reports):
    assert len(reports) == 28
    assert summary(reports) == {"consistent": 28, "violated": 0, "pairs": 28,
                                "label": "consistent with delta-scrambled"}
    assert all(r.close_decreasing for r in reports)


def test_far_times_separate(reports):
    for r in reports:
        assert r.far_times
        assert max(r.far_distances) >= mpmath.mpf(4) / 15 - 2 * mpmath.mpf("1e-10")
        assert all(d >= r.far_threshold for d in r.far_distances)


def test_close_times_below_bound(reports):
    for r in reports:
        assert r.close_times[:4] == (0, 2, 8, 18)
        assert all(d <= mpmath.mpf(b.numerator) / b.denominator
                   for d, b in zip(r.close_distances, r.close_bounds))


def test_identical_points(example, cert42, points42):
    (r,) = pairwise_report(example, [points42[0], points42[0]], cert=cert42)
    assert r.min_distance == 0 and r.far_times == () and r.verdict == "consistent"


def test_b1_pair(example, cert42):
    from liyorke import synthesize

    a, b = synthesize(cert42, example, 2, 1e-10, ["0", "1"])
    (r,) = pairwise_report(example, [a, b], cert=cert42)
    assert r.far_times[0] == 6
    assert r.far_distances[0] >= mpmath.mpf(4) / 15 - 2 * mpmath.mpf("1e-10")


def test_horizon_too_short(example, cert42, points42):
    with pytest.raises(HorizonTooShort) as e:
        pairwise_report(example, points42[:2], horizon=1, cert=cert42)
    assert e.value.witness["required"] > 1


def test_needs_delta_or_certificate(example, points42):
    with pytest.raises(ValueError):
        pairwise_report(example, points42[:2])
    with pytest.raises(ValueError):
        pairwise_report(example, points42[:2], delta=F(4, 15))
    (r,) = pairwise_report(example, points42[:2], delta=F(4, 15), eps_close=F(1, 10))
    assert r.verdict == "consistent"


def test_tight_eps_gives_violation(example, cert42, points42):
    (r,) = pairwise_report(example, points42[:2], cert=cert42, eps_close=F(1, 10 ** 30))
    assert r.verdict == "violated"
    assert summary([r])["label"] == "not consistent with delta-scrambled"


def test_row(reports):
    row = reports[0].row()
    assert row["verdict"] == "consistent" and row["bits_a"] == "000:0" and row["bounded"] == 1
