from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from relcone.cyclo import ONE, CyclotomicNumber, root_of_unity
from relcone.errors import (InnerOrderZero, NotOrderOne, NotUnitSeries, ParseError,
                            PrecisionExhausted, UndefinedInitial)
from relcone.series import TruncatedSeries, ZeroSoFar, t_power

S = TruncatedSeries.parse
T_ID = TruncatedSeries({1: 1})


def test_ord_examples():
    assert S("t^3 + 2*t^5").ord() == 3
    assert S("0").ord() == ZeroSoFar(exact=True)
    o = TruncatedSeries({}, 10).ord()
    assert isinstance(o, ZeroSoFar) and not o.exact and o.trunc == 10


def test_initial_examples():
    assert S("5*t^2 - t^7").initial() == (2, 5)
    assert S("-t^6 + 0*t^6").initial() == (6, -1)
    assert S("z3*t^4 + t^5").initial() == (4, root_of_unity(3))
    with pytest.raises(UndefinedInitial):
        TruncatedSeries({}, 4).initial()


def test_substitute_examples():
    assert S("t^3").substitute(-1, 2) == S("-t^6")
    # psi_3 = tau^3 with eps = -1, k = 2
    assert S("t^3").substitute(root_of_unity(2), 2) == S("-t^6")
    assert S("t^2").substitute(1, 1) == S("t^2")
    s = S("t + t^2 + O(t^5)").substitute(2, 3)
    assert s.trunc == 15 and s == S("2*t^3 + 4*t^6 + O(t^15)")


def test_compose_examples():
    assert S("t^2").compose(S("t + t^2")) == S("t^2 + 2*t^3 + t^4")
    g = S("t + 3*z4*t^2 - t^7")
    assert T_ID.compose(g) == g
    with pytest.raises(InnerOrderZero):
        S("t^2").compose(S("1 + t"))


def test_compose_truncation_is_provable():
    # outer known below t^4, inner of order 1: result known below t^4
    r = S("t + t^2 + t^3 + O(t^4)").compose(S("t + t^2"))
    assert r.trunc == 4
    # inexact inner of order 2 inside t^3: error enters at 10 + 2*2
    r = S("t^3").compose(S("t^2 + t^5 + O(t^10)"))
    assert r.trunc == 14


def test_compose_all_matches_compose():
    inner = S("2*t - t^2 + z3*t^4 + O(t^12)")
    outers = [S("t^2 + t^5"), S("1/2*t^3 - t^9 + O(t^20)"), S("0"), S("4")]
    assert TruncatedSeries.compose_all(outers, inner) == [f.compose(inner) for f in outers]


def test_kth_root_examples():
    r = S("1 + t").kth_root(2, trunc=30)
    assert r.items()[:4] == [(0, 1), (1, Fraction(1, 2)), (2, Fraction(-1, 8)), (3, Fraction(1, 16))]
    assert (r * r).truncate(30) == S("1 + t + O(t^30)")
    s = S("1 + 3*t - t^4")
    assert s.kth_root(1) == s
    assert S("1 + 2*t + t^2").kth_root(2) == S("1 + t")
    assert S("1 + 2*t + t^2").kth_root(2).exact
    with pytest.raises(NotUnitSeries):
        S("2 + t").kth_root(2)


def test_revert_examples():
    assert T_ID.revert() == T_ID
    g = S("t + t^2").revert(trunc=10)
    assert g.items()[:4] == [(1, 1), (2, -1), (3, 2), (4, -5)]
    assert S("t + t^2").compose(g) == S("t + O(t^10)")
    assert S("2*t").revert() == S("1/2*t")
    with pytest.raises(NotOrderOne):
        S("t^2").revert()


def test_coefficient_beyond_truncation():
    s = S("t + O(t^3)")
    assert s.coefficient(2) == 0
    with pytest.raises(PrecisionExhausted):
        s.coefficient(3)


def test_arithmetic_truncation():
    a = S("1 + t + O(t^5)")
    b = S("t^2")
    assert (a + b).trunc == 5
    assert (S("t^2") + S("t^3")).exact
    # exact factor of order 2 lifts the known window
    assert (S("t^2") * S("1 + t + O(t^5)")).trunc == 7


def test_reciprocal_newton_and_recurrence_agree():
    a = S("3 + t + z3*t^2 - t^7 + O(t^60)")
    r = a.reciprocal()
    assert (a * r) == S("1 + O(t^60)")
    short = a.truncate(10).reciprocal()
    assert short == r.truncate(10)


def test_shift():
    assert S("t^3 + t^5 + O(t^9)").shift(-2) == S("t + t^3 + O(t^7)")
    with pytest.raises(ValueError):
        S("t + t^3").shift(-2)


def test_parse_and_print():
    s = S("t^2 + 1/2*z8^1*t^5")
    assert str(s) == "t^2 + 1/2*z8^1*t^5"
    assert S(str(s)) == s
    assert S("(1 + t)^2") == S("1 + 2*t + t^2")
    assert S("t^2 + O(t^4)").trunc == 4
    assert str(S("t + O(t^4)")) == "t^1 + O(t^4)"
    assert t_power(3, 2) == S("2*t^3")
    for bad in ["t^", "1/0", "t^-1", "2**t", "z*t", "(t"]:
        with pytest.raises(ParseError):
            S(bad)


# randomized series

coeffs = st.builds(lambda q, m, j: root_of_unity(m, j) * q,
                   st.fractions(min_value=-4, max_value=4, max_denominator=4).filter(bool),
                   st.sampled_from([1, 2, 3, 4, 6]), st.integers(0, 11))


def series(min_exp=0, max_exp=12, max_terms=5):
    return st.dictionaries(st.integers(min_exp, max_exp), coeffs, min_size=1,
                           max_size=max_terms).map(TruncatedSeries)


@settings(max_examples=80, deadline=None)
@given(series(), series())
def test_ord_properties(a, b):
    assert (a * b).ord() == a.ord() + b.ord()
    s = a + b
    o = s.ord()
    if not isinstance(o, ZeroSoFar):
        assert o >= min(a.ord(), b.ord())


@settings(max_examples=40, deadline=None)
@given(series(min_exp=1, max_exp=10), st.integers(1, 6))
def test_kth_root_round_trip(h, k):
    u = TruncatedSeries({0: ONE}) + h
    r = u.kth_root(k, trunc=30)
    assert (r ** k).truncate(30) == u.truncate(30)


@settings(max_examples=40, deadline=None)
@given(coeffs, series(min_exp=2, max_exp=10))
def test_revert_round_trip(a1, tail):
    s = TruncatedSeries({1: a1}) + tail
    g = s.revert(trunc=30)
    assert s.compose(g).truncate(30) == S("t + O(t^30)")
    assert g.compose(s).truncate(30) == S("t + O(t^30)")


def test_substitute_identity_is_noop():
    s = S("t^2 - z5*t^7 + O(t^11)")
    assert s.substitute(CyclotomicNumber.from_rational(1), 1) == s
