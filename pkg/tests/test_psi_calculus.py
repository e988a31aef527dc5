import itertools
from fractions import Fraction

import pytest

from gwloc.exact_arith import MultiPoly, RationalFunction
from gwloc.psi_calculus import (FlagWeightError, PsiProfile, flag_sum,
                                psi_integral, string_oracle)


def test_point_moduli():
    assert psi_integral(PsiProfile(3, (0, 0, 0))) == 1
    assert psi_integral(PsiProfile(4, (1, 0, 0, 0))) == 1
    assert psi_integral(PsiProfile(5, (1, 1, 0, 0, 0))) == 2


def test_dimension_mismatch_zero():
    assert psi_integral(PsiProfile(4, (2, 0, 0, 0))) == 0
    assert psi_integral(PsiProfile(3, (1, 0, 0))) == 0


def test_string_oracle_values():
    assert string_oracle(PsiProfile(4, (1, 0, 0, 0))) == 1
    assert string_oracle(PsiProfile(6, (3, 0, 0, 0, 0, 0))) == 1
    assert string_oracle(PsiProfile(6, (1, 1, 1, 0, 0, 0))) == 6


def test_closed_form_equals_recursion_exhaustively():
    # every profile with the right total degree, n <= 9
    for n in range(3, 10):
        total = n - 3
        for cuts in itertools.combinations(range(total + n - 1), n - 1):
            bounds = (-1,) + cuts + (total + n - 1,)
            exps = tuple(b - a - 1 for a, b in zip(bounds[:-1], bounds[1:]))
            profile = PsiProfile(n, exps)
            assert psi_integral(profile) == string_oracle(profile), exps


def test_dilaton_consistency():
    # adding one marking with a single psi multiplies by n - 2
    for n in range(3, 8):
        for exps in itertools.combinations_with_replacement(range(3), n):
            if sum(exps) != n - 3:
                continue
            base = psi_integral(PsiProfile(n, exps))
            dil = psi_integral(PsiProfile(n + 1, exps + (1,)))
            assert dil == (n - 2) * base


def test_flag_sum_triple():
    w = [Fraction(2), Fraction(3), Fraction(5)]
    assert flag_sum(w) == Fraction(1, 30)


def test_flag_sum_quadruple_equal():
    w = Fraction(3)
    assert flag_sum([w] * 4) == Fraction(4, 3 ** 5)


def test_flag_sum_extra_exponent_dimension():
    w = [Fraction(1), Fraction(2), Fraction(4)]
    assert flag_sum(w, extra=[1, 0, 0]) == 0


def test_flag_sum_zero_weight():
    with pytest.raises(FlagWeightError):
        flag_sum([Fraction(0), Fraction(1), Fraction(2)])


def test_flag_sum_closed_form_symbolic():
    # (prod 1/w)(sum 1/w)^(m-3) for symbolic weights, m <= 6
    for m in range(3, 7):
        variables = tuple(f"w{i}" for i in range(m))
        ws = [RationalFunction(MultiPoly.var(variables, f"w{i}")) for i in range(m)]
        value = flag_sum(ws)
        prod = RationalFunction.const(1, variables)
        s = RationalFunction.const(0, variables)
        for w in ws:
            prod = prod * w.inverse()
            s = s + w.inverse()
        expected = prod * s ** (m - 3)
        assert value == expected


def test_flag_sum_with_marking_exponents():
    # integral of 1/((w1-psi)(w2-psi)) psi_3^a over the 3-pointed space
    w = [Fraction(2), Fraction(3)]
    assert flag_sum(w, marking_exponents=(0,)) == Fraction(1, 6)
    # against direct expansion on the 4-pointed space with one psi
    w = [Fraction(2), Fraction(3), Fraction(5)]
    got = flag_sum(w, marking_exponents=(1,))
    assert got == Fraction(1, 30)
