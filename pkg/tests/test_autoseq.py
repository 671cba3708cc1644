import pytest

from numberwall.autoseq import (UniformMorphism1D, cantor_image, cantor_sequence, cantor_series,
                                iterate_fixed_point, named_series, quadratic_check,
                                thue_morse_sequence, thue_morse_series)


def test_cantor_prefixes():
    assert cantor_sequence(3, 9) == [1, 0, 1, 0, 0, 0, 1, 0, 1]
    assert cantor_image(5, 1) == [1, 0, 2, 0, 1]
    assert cantor_sequence(5, 5) == [1, 0, 2, 0, 1]


def test_cantor_needs_odd_prime():
    with pytest.raises(ValueError):
        cantor_image(2, 1)


def test_thue_morse_prefix():
    assert thue_morse_sequence(8) == [0, 1, 1, 0, 1, 0, 0, 1]


def test_fixed_point_is_fixed():
    m = UniformMorphism1D({0: (0, 1), 1: (1, 0)})
    w = iterate_fixed_point(m, 0, 64)
    assert m.apply(w)[:64] == w


def test_not_prolongable():
    with pytest.raises(ValueError):
        iterate_fixed_point(UniformMorphism1D({0: (1, 0), 1: (0, 1)}), 0, 4)


def test_series_coefficients():
    s = cantor_series(3)
    assert s.offset == -1
    assert s.window(9) == cantor_sequence(3, 9)
    t = thue_morse_series()
    assert t.offset == -2
    assert t.coeff(-2) == 1 and t.coeff(-1) == 0


@pytest.mark.parametrize("p", [3, 5, 7, 11])
def test_quadratic_identity(p):
    assert quadratic_check(p, 600)


def test_named_series(tmp_path):
    assert named_series("cantor:p=3").window(5) == cantor_sequence(3, 5)
    f = tmp_path / "s.txt"
    f.write_text("p=5\noffset=-1; 1,2,3\n")
    s = named_series(f"file:{f}")
    assert s.p == 5 and s.window(3) == [1, 2, 3]
    with pytest.raises(ValueError):
        named_series("fibonacci")
