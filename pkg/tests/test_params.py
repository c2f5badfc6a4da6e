"""Case classification, exact derived constants, and strata verdicts."""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hypoeig.params import (
    VERDICT_AH,
    VERDICT_NOT_AH,
    CaseClass,
    OperatorParams,
    classify_case,
    derive_params,
    is_open_case,
    stratify,
)

ALL_PAIRS = [(k, l) for l in range(1, 13) for k in range(0, l)]


@pytest.mark.parametrize("k,l,expected", [
    (0, 1, CaseClass.EXCEPTIONAL_01),
    (0, 2, CaseClass.CASE_I),              # (l+1)/m = 3/2 not an integer
    (0, 3, CaseClass.CASE_I),              # 4/3
    (0, 5, CaseClass.CASE_I),              # 6/5
    (1, 5, CaseClass.CASE_I),              # 6/4
    (2, 4, CaseClass.CASE_I),              # 5/2
    (1, 2, CaseClass.CASE_II),             # m=1, ratio=3, both odd
    (3, 4, CaseClass.CASE_II),             # m=1, ratio=5
    (1, 3, CaseClass.OPEN_EVEN_M),         # m=2, ratio=2, q=0
    (3, 5, CaseClass.OPEN_EVEN_M),         # m=2, ratio=3, q=1
    (2, 5, CaseClass.OPEN_ODD_M_EVEN_Q),   # m=3, ratio=2, q=0
    (2, 3, CaseClass.OPEN_ODD_M_EVEN_Q),   # m=1, ratio=4, q=2
    (4, 5, CaseClass.OPEN_ODD_M_EVEN_Q),   # m=1, ratio=6, q=4
])
def test_case_table(k, l, expected):
    assert classify_case(OperatorParams(k, l)) is expected


def test_open_cases_flag():
    assert is_open_case(CaseClass.OPEN_EVEN_M)
    assert is_open_case(CaseClass.OPEN_ODD_M_EVEN_Q)
    assert not is_open_case(CaseClass.CASE_I)
    assert not is_open_case(CaseClass.CASE_II)
    assert not is_open_case(CaseClass.EXCEPTIONAL_01)


@pytest.mark.parametrize("k,l", ALL_PAIRS)
def test_exact_identities(k, l):
    """m(q+1) = k+1, m(q+2) = l+1, A+B = -1 hold exactly in Fractions
    whenever q is an integer; otherwise all integer-q constants are None."""
    p = OperatorParams(k, l)
    d = derive_params(p)
    assert d.m == l - k
    if (l + 1) % (l - k) != 0:
        assert d.q is None
        assert d.P0 is None and d.A is None and d.B is None
        assert d.q1 is None and d.r is None
        assert classify_case(p) is CaseClass.CASE_I
        with pytest.raises(ValueError, match="CaseI"):
            d.require_integer_q()
        return
    assert d.q == (l + 1) // (l - k) - 2
    assert d.m * (d.q + 1) == k + 1
    assert d.m * (d.q + 2) == l + 1
    assert d.A + d.B == Fraction(-1)
    assert d.P0 == Fraction(1, (d.q + 1) * (d.q + 2))
    assert d.A == -(1 + Fraction(1, k + 1)) / 2
    assert d.B == -(1 - Fraction(1, k + 1)) / 2
    assert d.r == 1 - Fraction(1, k + 1)
    assert d.mq1 == k + 1


def test_exceptional_pair_is_the_degenerate_exponent_pair():
    """(0,1) is the unique pair with A = -1, B = 0 (the s^B factor
    degenerates); every other integer-q pair has both in (-1, 0)."""
    d01 = derive_params(OperatorParams(0, 1))
    assert d01.A == Fraction(-1) and d01.B == Fraction(0)
    for k, l in ALL_PAIRS:
        if (k, l) == (0, 1):
            continue
        d = derive_params(OperatorParams(k, l))
        if d.q is None:
            continue
        assert Fraction(-1) < d.A < 0
        assert Fraction(-1) < d.B < 0


@given(st.integers(min_value=0, max_value=40).flatmap(
    lambda k: st.tuples(st.just(k),
                        st.integers(min_value=k + 1, max_value=41))))
def test_classification_is_total_and_consistent(kl):
    k, l = kl
    p = OperatorParams(k, l)
    case = classify_case(p)
    d = derive_params(p)
    if case is CaseClass.CASE_I:
        assert d.q is None
    else:
        assert d.q is not None and d.q >= 0
        if case is CaseClass.CASE_II:
            assert d.m % 2 == 1 and (d.q + 2) % 2 == 1
        elif case is CaseClass.OPEN_EVEN_M:
            assert d.m % 2 == 0
        elif case is CaseClass.OPEN_ODD_M_EVEN_Q:
            assert d.m % 2 == 1 and d.q % 2 == 0
        else:
            assert (k, l) == (0, 1)


@pytest.mark.parametrize("k,l", [(0, 0), (3, 3), (5, 2), (-1, 2)])
def test_invalid_exponents_rejected(k, l):
    with pytest.raises(ValueError):
        OperatorParams(k, l)


def test_non_integers_rejected():
    with pytest.raises(ValueError):
        OperatorParams(1.0, 3)


def test_strata_k_ge_1():
    report = stratify(OperatorParams(1, 3))
    assert [s.codimension for s in report.strata] == [2, 2, 3]
    assert [s.symplectic for s in report.strata] == [True, True, False]
    assert report.verdict == VERDICT_NOT_AH


def test_strata_k0_l_ge_2():
    report = stratify(OperatorParams(0, 2))
    assert [s.codimension for s in report.strata] == [2, 3]
    assert [s.symplectic for s in report.strata] == [True, False]
    assert report.verdict == VERDICT_NOT_AH


def test_strata_exceptional_01():
    report = stratify(OperatorParams(0, 1))
    assert len(report.strata) == 1
    assert report.strata[0].codimension == 2
    assert report.strata[0].symplectic
    assert report.verdict == VERDICT_AH


@pytest.mark.parametrize("k,l", ALL_PAIRS)
def test_verdict_follows_odd_codimension(k, l):
    report = stratify(OperatorParams(k, l))
    odd = any(s.codimension % 2 == 1 for s in report.strata)
    assert report.verdict == (VERDICT_NOT_AH if odd else VERDICT_AH)
    # only the exceptional pair escapes the odd-codimension stratum
    assert (report.verdict == VERDICT_AH) == ((k, l) == (0, 1))
