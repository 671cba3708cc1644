import random

from hypothesis import given, strategies as st

from numberwall.autoseq import cantor_series, thue_morse_series
from numberwall.contfrac import (approximation_exponent, convergents, expand, expand_fractional,
                                 is_best_approximation, reconstruct, transport_check)
from numberwall.ffield import Polynomial, parse_polynomial
from numberwall.laurent import LaurentSeries, agree

PRIMES = st.sampled_from([2, 3, 5, 7])


@st.composite
def fractional_series(draw):
    p = draw(PRIMES)
    x = draw(st.lists(st.integers(0, p - 1), min_size=4, max_size=48))
    return p, x


@given(fractional_series())
def test_certified_quotients_respect_precision(px):
    p, x = px
    cf = expand_fractional(x, p)
    degs = [q.degree for q in cf.quotients]
    assert all(d >= 1 for d in degs)
    assert 2 * sum(degs) <= len(x)
    if cf.pending_degree is not None:
        assert 2 * sum(degs) + cf.pending_degree <= len(x)


@given(fractional_series())
def test_convergents_approximate(px):
    p, x = px
    theta = LaurentSeries(p, -1, x)
    cf = expand(theta, precision=len(x))
    convs = convergents(cf)
    for c, nxt in zip(convs, convs[1:]):
        assert nxt.N.degree > c.N.degree or c.index == 0
        # |N_i theta - M_i| = |N_(i+1)|^-1
        assert approximation_exponent(theta, c.M, c.N) <= -nxt.N.degree


@given(fractional_series())
def test_determinant_identity(px):
    p, x = px
    cf = expand(LaurentSeries(p, -1, x), precision=len(x))
    convs = convergents(cf)
    for i in range(1, len(convs)):
        a, b = convs[i - 1], convs[i]
        det = b.M * a.N - a.M * b.N
        assert det.degree == 0


def test_rational_termination():
    num, den = parse_polynomial("t+2", 5), parse_polynomial("t^3+t+1", 5)
    theta = LaurentSeries.from_rational(num, den)
    cf = expand(theta)
    assert cf.exact
    assert agree(reconstruct(cf), theta)
    assert sum(q.degree for q in cf.quotients) == den.degree


def test_cantor_quotients_are_linear():
    cf = expand(cantor_series(3), 12)
    assert cf.certified_count >= 12
    assert all(q.degree == 1 for q in cf.quotients[:12])


def test_best_approximation():
    theta = cantor_series(3)
    convs = convergents(expand(theta, 4))
    for c in convs[1:4]:
        assert is_best_approximation(theta, c)


def test_transport():
    assert transport_check(cantor_series(3), parse_polynomial("t^2+1", 3), 8)
    assert transport_check(thue_morse_series(), parse_polynomial("t^2+t+1", 2), 8)


def test_transport_identity_substitution():
    rng = random.Random(1)
    theta = LaurentSeries(5, -1, [rng.randrange(5) for _ in range(80)])
    assert transport_check(theta, Polynomial([0, 1], 5), 6)
