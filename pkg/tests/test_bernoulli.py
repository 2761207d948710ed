from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from orbiqrr.bernoulli import bernoulli_number, bernoulli_poly, bernoulli_value

rationals = st.fractions(min_value=-60, max_value=60, max_denominator=24)


def gf_bernoulli_value(m: int, x: Fraction) -> Fraction:
    """Independent oracle: expand t e^{tx} / (e^t - 1) to order t^m.

    Power series with exact Fractions: numerator t e^{tx} has coefficients
    x^k / k! shifted by one; denominator e^t - 1 = sum_{k>=1} t^k / k!.
    Divide term by term and multiply by m! at the end.
    """
    order = m + 1
    num = [Fraction(0)] * (order + 1)
    for k in range(order):
        num[k + 1] = x ** k / _fact(k)
    den = [Fraction(0)] * (order + 1)
    for k in range(1, order + 1):
        den[k] = Fraction(1) / _fact(k)
    # series division: num = q * den, den has valuation 1
    q = [Fraction(0)] * order
    for n in range(order):
        acc = num[n + 1]
        for j in range(n):
            acc -= q[j] * den[n + 1 - j]
        q[n] = acc / den[1]
    return q[m] * _fact(m)


def _fact(k: int) -> Fraction:
    out = Fraction(1)
    for i in range(2, k + 1):
        out *= i
    return out


def test_low_degree_polynomials():
    assert bernoulli_poly(0) == [Fraction(1)]
    assert bernoulli_poly(1) == [Fraction(-1, 2), Fraction(1)]          # x - 1/2
    assert bernoulli_poly(2) == [Fraction(1, 6), Fraction(-1), Fraction(1)]  # x^2 - x + 1/6


def test_leading_coefficient_and_constant_term():
    for m in range(12):
        coeffs = bernoulli_poly(m)
        assert coeffs[-1] == 1
        assert coeffs[0] == bernoulli_number(m)


def test_point_values():
    assert bernoulli_value(0, Fraction(7, 5)) == 1
    assert bernoulli_value(2, Fraction(1, 2)) == Fraction(-1, 12)
    assert bernoulli_value(3, Fraction(1, 3)) == Fraction(1, 27)


def test_against_generating_function_oracle():
    for m in range(9):
        for x in (Fraction(0), Fraction(1, 3), Fraction(-2, 7), Fraction(5, 2)):
            assert bernoulli_value(m, x) == gf_bernoulli_value(m, x)


def test_odd_numbers_vanish():
    for m in range(1, 11):
        assert bernoulli_number(2 * m + 1) == 0


@settings(max_examples=50, deadline=None)
@given(st.integers(min_value=0, max_value=20), rationals)
def test_reflection(m, x):
    assert bernoulli_value(m, 1 - x) == (-1) ** m * bernoulli_value(m, x)


def test_multiplication_theorem():
    # B_m(nx) = n^{m-1} sum_{k=0}^{n-1} B_m(x + k/n); specialize x = 0
    for m in range(11):
        for n in range(1, 7):
            lhs = bernoulli_value(m, 0)
            rhs = Fraction(n) ** (m - 1) * sum(bernoulli_value(m, Fraction(k, n)) for k in range(n))
            assert lhs == rhs
