import json
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from liyorke import (
    ClosedInterval, LogisticFamily, ParamSequence, TimeVaryingSystem, certificate_from_dict, certify, check_covering,
    check_expansion, check_initial_covering, check_strictness, logistic_example, two_sided_comparison, validate,
)
from liyorke.certify import ExpansionCertificate, _judge
from liyorke.errors import (
    CertificationError, CoveringFailed, CriterionFailed, InvalidCertificate, MarginalVerdict, NotExpanding,
    NotMonotone, Overlapping, Reducible, RowSumCondition, SelfLoopMissing,
)

V1, V2 = ClosedInterval(F(3, 5), F(1)), ClosedInterval(F(0), F(1, 3))


def logistic(r, partition=(V1, V2), n0=0, affine_step=None):
    params = ParamSequence.constant(r) if affine_step is None else ParamSequence(affine=(r, affine_step))
    return TimeVaryingSystem(LogisticFamily(), params, partition, n0)


class TestStrictness:
    def test_examples(self):
        assert check_strictness([V1, V2]) == F(4, 15)
        with pytest.raises(Overlapping):
            check_strictness([ClosedInterval(0, 1), ClosedInterval(1, 2)])
        assert check_strictness([ClosedInterval(0, 1), ClosedInterval(F(3, 2), 2)]) == F(1, 2)

    def test_three_sets(self):
        sets = [ClosedInterval(0, 1), ClosedInterval(5, 6), ClosedInterval(F(3, 2), 4)]
        assert check_strictness(sets) == F(1, 2)


class TestCovering:
    def test_example_holds(self, example, ones):
        rep = check_covering(example, ones)
        assert rep.holds and rep.min_margin == 0
        assert {(e.i, e.j) for e in rep.entries} == {(1, 1), (1, 2), (2, 1), (2, 2)}

    def test_r4_fails_with_witness(self, ones):
        rep = check_covering(logistic(4), ones)
        assert not rep.holds
        bad = {(e.i, e.j) for e in rep.failures}
        assert (2, 1) in bad
        e = next(e for e in rep.failures if (e.i, e.j) == (2, 1))
        assert e.image == ClosedInterval(F(0), F(8, 9))
        assert e.missing(V1) == [ClosedInterval(F(8, 9), F(1))]

    def test_weaker_requirement(self, example):
        assert check_covering(example, validate([[1, 0], [0, 1]])).holds


class TestExpansion:
    def test_examples(self, example):
        assert check_expansion(example, j0=2, route="T42") == (F(3, 2), None)
        assert check_expansion(logistic_example("affine"), j0=2, route="T42")[0] == F(3, 2)
        assert check_expansion(example, j0=2, route="T31") == (F(3, 2), F(9, 10))

    def test_not_expanding(self, example):
        with pytest.raises(NotExpanding) as e:
            check_expansion(example, j0=1, route="T42")
        assert e.value.witness["set"] == 1
        with pytest.raises(NotExpanding) as e:
            check_expansion(example, j0=2, route="C1")
        assert e.value.witness["set"] == 1


class TestInitialCovering:
    def test_examples(self):
        assert check_initial_covering(logistic(F(9, 2)), 0, ClosedInterval(F(0), F(1))) == "verified"
        s = logistic(F(9, 2), n0=1)
        assert check_initial_covering(s, 1, ClosedInterval(F(0), F(1, 2))) == "verified"
        assert check_initial_covering(s, 1, ClosedInterval(F(0), F(1))) == "assumed"
        assert check_initial_covering(s, 1, ClosedInterval(F(0), F(1, 10))) == "failed"


class TestCertify:
    def test_example(self, cert42):
        assert (cert42.route, cert42.j0, cert42.k0) == ("T42", 2, 1)
        assert cert42.lam == F(3, 2) and cert42.delta == F(4, 15) and cert42.mu is None
        assert cert42.per_set_lambda == (F(9, 10), F(3, 2))
        assert cert42.initial_covering_status == "verified" and cert42.tail_status == "analytic"

    def test_affine_variant(self, cert42, ones):
        c = certify(logistic_example("affine"), ones, "T42", 2)
        assert (c.lam, c.delta, c.k0) == (cert42.lam, cert42.delta, cert42.k0)

    def test_r4_rejected(self, ones):
        with pytest.raises(CoveringFailed) as e:
            certify(logistic(4), ones, "T42", 2)
        w = e.value.witness
        assert any(f["i"] == 2 and f["j"] == 1 and f["missing"] == ["[8/9, 1]"] for f in w["failures"])

    def test_matrix_preconditions(self, example):
        with pytest.raises(RowSumCondition):
            certify(example, validate([[1, 0], [0, 1]]))
        with pytest.raises(Reducible):
            certify(example, validate([[1, 1], [0, 1]]))
        with pytest.raises(ValueError):
            certify(example, validate([[1, 1], [1, 1]]), "T99")

    def test_other_routes(self, example, ones):
        for route in ("T31", "T41", "C2"):
            c = certify(example, ones, route)
            assert (c.j0, c.lam, c.mu, c.k0) == (2, F(3, 2), F(9, 10), 1)
        with pytest.raises(NotExpanding):
            certify(example, ones, "C1")

    def test_self_loop_missing(self, golden):
        sys = logistic(F(9, 2), (V2, V1))
        with pytest.raises(SelfLoopMissing):
            certify(sys, golden, "T42", 1)

    def test_criterion_failed(self, golden):
        # k0 = 2 at j0 = 1 and mu = 9/20 give lam * mu = 27/40 < 1
        sys = logistic(F(9, 2), (V2, ClosedInterval(F(11, 20), F(1))))
        with pytest.raises(CriterionFailed):
            certify(sys, golden, "T31", 1)
        assert certify(logistic(F(9, 2), (V2, V1)), golden, "T31", 1).k0 == 2

    def test_marginal(self, ones):
        r = F(9, 2) * (1 - F(1, 10 ** 13))  # 2r/9 falls short of 1 by 1e-13
        with pytest.raises(MarginalVerdict):
            certify(logistic(r), ones, "T42", 2)
        assert certify(logistic(r), ones, "T42", 2, allow_marginal=True).lam == r / 3
        with pytest.raises(MarginalVerdict):
            _judge("x", 1, F(1, 10 ** 13), True, False, NotExpanding)
        _judge("x", 1, F(1, 10 ** 13), True, True, NotExpanding)

    def test_only_certify_issues(self, cert42):
        with pytest.raises(InvalidCertificate):
            ExpansionCertificate(**{**cert42.__dict__, "_token": None})

    def test_roundtrip_and_tamper(self, example, cert42):
        data = json.loads(cert42.to_json())
        assert certificate_from_dict(data, example).to_json() == cert42.to_json()
        with pytest.raises(InvalidCertificate):
            certificate_from_dict({**data, "lambda": "2"}, example)
        with pytest.raises(InvalidCertificate):
            certificate_from_dict({k: v for k, v in data.items() if k != "route"}, example)

    def test_deterministic(self, example, ones, cert42):
        assert certify(example, ones, "T42", 2).to_json() == cert42.to_json()

    def test_two_sided(self, example, ones):
        d = two_sided_comparison(example, ones)
        assert d["lower"] == "9/10" and d["two_sided_holds"] is False
        assert d["routes"]["T42"] == "accept" and d["routes"]["C1"] == "NotExpanding"


@settings(max_examples=25, deadline=None)
@given(st.fractions(F(9, 2), 8), st.fractions(F(9, 2), 8))
def test_lambda_monotone_in_parameter(r1, r2):
    A = validate([[1, 1], [1, 1]])
    lo, hi = sorted((r1, r2))
    c_lo, c_hi = certify(logistic(lo), A, "T42", 2), certify(logistic(hi), A, "T42", 2)
    assert c_lo.lam == lo / 3 and c_lo.lam <= c_hi.lam


@settings(max_examples=25, deadline=None)
@given(st.fractions(F(3), 7), st.fractions(F(1, 5), F(2, 5)), st.fractions(F(3, 5), F(4, 5)))
def test_c2_matches_t31_with_self_loop(r, b, a):
    A = validate([[1, 1], [1, 1]])
    sys = logistic(r, (ClosedInterval(a, F(1)), ClosedInterval(F(0), b)))

    def verdict(route):
        try:
            c = certify(sys, A, route, 2)
            return "accept", c.lam, c.mu
        except CertificationError as exc:
            return type(exc).__name__, None, None

    assert verdict("C2") == verdict("T31")


def test_affine_tail_decreasing_parameter(ones):
    # r_n = 6 - n/10 passes through 0, where f_n stops being monotone on V_1
    with pytest.raises(NotMonotone):
        certify(logistic(F(6), affine_step=F(-1, 10)), ones, "T42", 2)
