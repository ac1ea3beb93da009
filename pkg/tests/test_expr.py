from fractions import Fraction

from hypothesis import given, strategies as st

from ivbounds.expr import LinearExpr, inequality_text
from ivbounds.model import marginalize, random_full_data_law


def test_rendering():
    e = LinearExpr.from_mapping(2, 2, {(0, 1, 0): 1, (1, 1, 1): 1, (0, 0, 0): Fraction(-1, 2)})
    assert e.text() == "-1/2*p_{00,0} + p_{01,0} + p_{11,1}"
    assert e.latex() == r"-\tfrac{1}{2}p_{00,0} + p_{01,0} + p_{11,1}"
    assert inequality_text(LinearExpr(2, 2, e.terms, Fraction(-1))) == e.text() + " <= 1"
    assert LinearExpr.from_vector(2, 2, [0] * 8).text() == "0"


def test_json():
    e = LinearExpr.from_mapping(2, 2, {(1, 0, 1): Fraction(3, 4)}, 2)
    assert e.to_json() == {"terms": [{"y": 1, "d": 0, "z": 1, "coeff": "3/4"}], "constant": "2"}


def test_reduced_pearl_form():
    # p_{01,0} - p_{00,1} - p_{10,1} - p_{01,1} <= 0 is p_{01,0} + p_{11,1} <= 1 on normalized arms
    raw = LinearExpr.from_vector(2, 2, (0, 0, 1, 0, -1, -1, -1, 0))
    red = raw.reduced()
    assert red.coeffs == {(0, 1, 0): 1, (1, 1, 1): 1}
    assert red.constant == -1


@given(st.lists(st.integers(-3, 3), min_size=12, max_size=12), st.integers(0, 10**6))
def test_reduced_agrees_on_laws(coeffs, seed):
    law = marginalize(random_full_data_law(3, 2, seed))
    e = LinearExpr.from_vector(3, 2, coeffs, Fraction(1, 3))
    assert e.reduced().evaluate(law) == e.evaluate(law)
    assert (-e).evaluate(law) == -e.evaluate(law)
    assert LinearExpr.from_vector(3, 2, e.vector(), e.constant) == e
