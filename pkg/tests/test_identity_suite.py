from fractions import Fraction

import pytest

from gwloc.exact_arith import LaurentPoly
from gwloc.identity_suite import (IdentityCase, bundled_cases, case_from_dict,
                                  check_cor_main, check_rel1, check_rel2,
                                  check_rel4, pairing_exponent, run_case)


def test_rel1_point_case():
    case = IdentityCase("rel1", 0, (0, 0), 0, ("1", "1", "1"))
    rep = check_rel1(case)
    assert rep.passed
    assert rep.lhs == LaurentPoly({-2: Fraction(1)})


def test_rel1_base_line():
    case = IdentityCase("rel1", 1, (0, 0), 1, ("H", "H"))
    rep = check_rel1(case)
    assert rep.passed
    assert rep.lhs == LaurentPoly({-2: Fraction(1)})


def test_rel1_mixed_bundle():
    case = IdentityCase("rel1", 1, (0, 1), 1, ("H", "H"))
    rep = check_rel1(case)
    assert rep.passed
    assert rep.lhs == LaurentPoly({-3: Fraction(1)})


def test_cor_main_exponent():
    assert pairing_exponent(IdentityCase("cor_main", 1, (0, 0), 1, ())) == 2
    assert pairing_exponent(IdentityCase("cor_main", 1, (0, 1), 1, ())) == 3
    assert pairing_exponent(IdentityCase("cor_main", 2, (1, 2), 2, ())) == 8


def test_cor_main_follows_rel1():
    case = IdentityCase("cor_main", 1, (0, 0), 1, ("H", "H"))
    rep = check_cor_main(case)
    assert rep.passed
    assert rep.lhs == LaurentPoly({0: Fraction(1)})


def test_rel2_unstable_side_is_zero():
    case = IdentityCase("rel2", 0, (0, 0), 0, (), e=0, k=1)
    rep = check_rel2(case)
    assert rep.passed
    assert rep.lhs.is_zero() and rep.rhs.is_zero()


def test_rel4_records_reading():
    case = IdentityCase("rel4", 0, (0, 0), 0, ("1", "1"), e=0, k=2)
    rep = check_rel4(case)
    assert rep.passed
    assert any("reading=chern_polynomial" in n for n in rep.notes)


def test_hypothesis_guard():
    with pytest.raises(ValueError):
        IdentityCase("rel1", 1, (-1, 0), 1, ("H",))


def test_case_roundtrip():
    data = {"identity": "rel2", "base_dim": 1, "twists": [0, 0], "degree": 1,
            "sigma": ["H"], "e": 1, "k": 1}
    case = case_from_dict(data)
    assert case.e == 1 and case.twists == (0, 0)


def test_bundled_cases_complete():
    ids = {c.identity for c in bundled_cases()}
    assert ids == {"rel1", "cor_main", "rel2", "rel3", "rel4", "pn_fibration_demo"}


def test_report_serialization():
    case = IdentityCase("rel1", 0, (0, 0), 0, ("1", "1", "1"))
    rep = run_case(case)
    data = rep.as_json()
    assert data["verdict"] == "pass"
    assert data["lhs"] == {"-2": "1"}
    assert data["rhs"] == {"-2": "1"}
