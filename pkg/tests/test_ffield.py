import pytest
from hypothesis import given, strategies as st

from numberwall.ffield import (FieldElement, Polynomial, check_prime, is_irreducible, is_prime,
                               parse_polynomial, poly_divmod)

PRIMES = st.sampled_from([2, 3, 5, 7, 13])


@st.composite
def poly_pairs(draw, nonzero_second=False):
    p = draw(PRIMES)
    a = draw(st.lists(st.integers(0, p - 1), max_size=8))
    b = draw(st.lists(st.integers(0, p - 1), min_size=1, max_size=6))
    if nonzero_second and not any(b):
        b[-1] = 1
    return Polynomial(a, p), Polynomial(b, p)


def test_primes():
    assert [n for n in range(20) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]
    with pytest.raises(ValueError):
        check_prime(4)


def test_field_element_inverse():
    for p in (2, 3, 5, 7):
        for x in range(1, p):
            assert FieldElement(x, p) * FieldElement(x, p).inv() == FieldElement(1, p)
    with pytest.raises(ZeroDivisionError):
        FieldElement(0, 5).inv()


def test_mixed_moduli_rejected():
    with pytest.raises(ValueError):
        FieldElement(1, 3) + FieldElement(1, 5)
    with pytest.raises(ValueError):
        Polynomial([1], 3) + Polynomial([1], 5)


def test_parse_both_formats():
    a = parse_polynomial("t^2+2t+1", 3)
    b = parse_polynomial("1,2,1", 3)
    assert a == b
    assert str(a) == "t^2+2t+1"
    assert parse_polynomial(str(a), 3) == a


def test_irreducibility():
    assert is_irreducible(parse_polynomial("t^2+1", 3))
    assert not is_irreducible(parse_polynomial("t^2+1", 5))
    assert is_irreducible(parse_polynomial("t^2+t+1", 2))
    assert not is_irreducible(parse_polynomial("t^2+1", 2))


@given(poly_pairs(nonzero_second=True))
def test_division_identity(ab):
    a, b = ab
    q, r = poly_divmod(a, b)
    assert q * b + r == a
    assert r.is_zero() or r.degree < b.degree


@given(poly_pairs())
def test_degree_of_product(ab):
    a, b = ab
    if not a.is_zero() and not b.is_zero():
        assert (a * b).degree == a.degree + b.degree


@given(poly_pairs(), st.integers(0, 12))
def test_evaluation_is_a_ring_map(ab, x):
    a, b = ab
    p = a.p
    assert int((a * b)(x)) == int(a(x)) * int(b(x)) % p
    assert int((a + b)(x)) == (int(a(x)) + int(b(x))) % p


@given(poly_pairs(nonzero_second=True))
def test_gcd_divides_both(ab):
    a, b = ab
    g = a.gcd(b)
    assert (a % g).is_zero() and (b % g).is_zero()
