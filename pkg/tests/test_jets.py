from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from kahlerweyl.jets import Jet
from kahlerweyl.polyparse import PolynomialSyntaxError, parse_polynomial

x = [Jet.variable(4, 4, i) for i in range(4)]


def jet_strategy(order=3):
    exps = st.tuples(*[st.integers(0, 2)] * 4).filter(lambda e: sum(e) <= order)
    coeffs = st.dictionaries(exps, st.integers(-5, 5).map(Fraction), max_size=6)
    return coeffs.map(lambda c: Jet(4, order, c))


def test_exp_double_matches_series():
    f = x[0] * x[2] / 4
    expected = 1 + x[0] * x[2] / 2 + (x[0] * x[2]) ** 2 / 8
    assert f.exp_double() == expected
    assert f.exp_double().coefficient((2, 0, 2, 0)) == Fraction(1, 8)


def test_exp_double_truncates_at_order():
    f = Jet.variable(1, 3, 0)
    e = f.exp_double()
    assert [e.coefficient((k,)) for k in range(4)] == [1, 2, 2, Fraction(4, 3)]
    with pytest.raises(ValueError):
        (f + 1).exp_double()


def test_product_truncates():
    a = Jet.variable(2, 2, 0)
    assert (a * a * a).is_zero()
    assert (a * a).coefficient((2, 0)) == 1


def test_partial_lowers_order():
    p = x[0] ** 2 * x[2]
    d = p.partial(0)
    assert d.order == 3
    assert d == Jet.monomial(4, 3, (1, 0, 1, 0), 2)


@given(jet_strategy(), jet_strategy())
def test_ring_laws(a, b):
    assert a * b == b * a
    assert (a + b) - b == a
    assert (a + b).partial(1) == a.partial(1) + b.partial(1)


@given(jet_strategy(), jet_strategy())
def test_leibniz(a, b):
    lhs = (a * b).partial(0)
    rhs = a.partial(0) * b.with_order(2) + a.with_order(2) * b.partial(0)
    assert lhs.agrees_with(rhs)


def test_substitute_linear():
    T = [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
    p = x[0] * x[2] + 3 * x[1]
    assert p.substitute_linear(T) == x[1] * x[2] + 3 * x[0]


def test_terms_roundtrip():
    p = x[0] ** 2 / 3 - x[3]
    assert Jet.from_terms(4, 4, p.to_terms()) == p


@pytest.mark.parametrize("text, expected", [
    ("x1*x3/4", x[0] * x[2] / 4),
    ("x1^2*x3^2", x[0] ** 2 * x[2] ** 2),
    ("x1**2 - 2*x3", x[0] ** 2 - 2 * x[2]),
    ("(x1 + x3)^2 / 3", (x[0] + x[2]) ** 2 / 3),
    ("-x1*x3", -(x[0] * x[2])),
])
def test_parse_accepts(text, expected):
    assert parse_polynomial(text) == expected


@pytest.mark.parametrize("text", [
    "x1*", "x5", "y1", "sin(x1)", "x1/x3", "x1^(1/2)", "x1/0", "x1^-1", "1.5*x1", "",
])
def test_parse_rejects(text):
    with pytest.raises(PolynomialSyntaxError):
        parse_polynomial(text)
