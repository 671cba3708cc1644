import math
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st

from numberwall.morph2d import (CANTOR_LETTERS, MAX_CELLS, THUE_MORSE_LETTERS, apply_coding,
                                cantor_action, cantor_morphism2d, char_poly_roots, iter_rows,
                                iterate2d, large_window, largest_zero_square,
                                o_density_closed_form, o_density_counted, o_density_exact, orbits,
                                small_window, structure_checks, thue_morse_action,
                                thue_morse_coding, thue_morse_morphism2d, transition_matrix,
                                verify_profile_equality, zero_coding)

TM_CLASSES = (("o",), ("c0", "c1", "c2", "c3"),
              ("a0", "a1", "a2", "a3", "b0", "b1", "b2", "b3"), ("d_a", "d_b"))


def test_first_images():
    m = cantor_morphism2d(3)
    img = m.image("A").rows()
    assert img == [["A", "0", "A"], ["F", "B", "F"], ["A", "0", "A"]]
    frame = m.image("F").rows()
    assert frame[0] == ["C_NW", "E_N", "C_NE"]
    assert frame[2] == ["C_SW", "E_S", "C_SE"]


def test_iterate_is_prefix_consistent():
    m = cantor_morphism2d(5)
    g1, g2 = iterate2d(m, "A", 1), iterate2d(m, "A", 2)
    assert np.array_equal(g2.cells[:5, :5], g1.cells)


def test_not_prolongable():
    with pytest.raises(ValueError):
        iterate2d(thue_morse_morphism2d(), "d_a", 2)
    assert iterate2d(thue_morse_morphism2d(), "d_a", 2, prolongable=False).side == 4


def test_iter_rows_matches_materialized():
    m = cantor_morphism2d(3)
    g = iterate2d(m, "A", 3).cells
    assert all(np.array_equal(r, g[i]) for i, r in enumerate(iter_rows(m, "A", 3)))


def test_memory_guard():
    m = cantor_morphism2d(3)
    with pytest.raises(MemoryError):
        m.apply(np.zeros((1100, 1100), dtype=np.uint8))
    assert MAX_CELLS == 9_000_000


@pytest.mark.parametrize("p,k", [(3, 3), (3, 5), (5, 3)])
def test_structure(p, k):
    results = structure_checks(p, k, samples=40)
    assert all(results.values()), {k: v for k, v in results.items() if not v}


def test_windows():
    assert (large_window(3, 2) == CANTOR_LETTERS.index("0")).all()
    W = small_window(3, 2)
    assert W.shape == (9, 9)
    assert not apply_coding(zero_coding(), W)[1:-1, 1:-1].any()
    assert apply_coding(zero_coding(), W)[0].all()


@pytest.mark.parametrize("p,k", [(3, 3), (5, 2), (7, 2)])
def test_profile_equality_small(p, k):
    assert verify_profile_equality(p, k).ok


def test_cantor_orbits():
    orbs = [{CANTOR_LETTERS[i] for i in o} for o in orbits(cantor_action(3))]
    assert {"0", "F"} in orbs and {"A", "B"} in orbs
    assert {"E_N", "E_E", "E_S", "E_W"} in orbs
    assert len(orbs) == 4


@given(st.lists(st.integers(0, 11), min_size=9, max_size=9), st.sampled_from(["rho", "eta", "iota"]))
def test_cantor_equivariance(cells, g):
    m, act = cantor_morphism2d(3), cantor_action(3)
    X = np.array(cells, dtype=np.uint8).reshape(3, 3)
    assert np.array_equal(m.apply(act.on_grid(g, X)), act.on_grid(g, m.apply(X)))


def test_thue_morse_alphabet_and_orbits():
    m = thue_morse_morphism2d()
    assert m.alphabet == THUE_MORSE_LETTERS and len(m.alphabet) == 15
    assert m.image("a0").rows() == [["a0", "c0"], ["d_a", "b0"]]
    assert len(orbits(thue_morse_action())) == 4


@given(st.sampled_from(THUE_MORSE_LETTERS), st.sampled_from(["rho", "eta", "iota"]))
def test_thue_morse_equivariance(x, g):
    m, act = thue_morse_morphism2d(), thue_morse_action()
    code = m.code(x)
    lhs = m.images[act.on_letter(g, code)]
    rhs = act.on_grid(g, m.images[code])
    assert np.array_equal(lhs, rhs)


def test_thue_morse_coding_rotates():
    c = thue_morse_coding()
    for x in "abc":
        base = c.blocks[THUE_MORSE_LETTERS.index(f"{x}0")]
        for i in range(4):
            assert np.array_equal(c.blocks[THUE_MORSE_LETTERS.index(f"{x}{i}")], np.rot90(base, -i))


def test_transition_matrix_and_roots():
    M = transition_matrix(thue_morse_morphism2d(), TM_CLASSES)
    q = Fraction
    assert M == [[q(1), q(3, 4), q(0), q(0)], [q(0), q(1, 4), q(1, 4), q(0)],
                 [q(0), q(0), q(1, 2), q(1)], [q(0), q(0), q(1, 4), q(0)]]
    for row in zip(*M):
        assert sum(row) == 1
    roots = set(char_poly_roots(M))
    r5 = sympy.sqrt(5)
    want = {sympy.Integer(1), sympy.Rational(1, 4), (1 + r5) / 4, (1 - r5) / 4}
    assert {sympy.nsimplify(r) for r in roots} == want


def test_o_density_counted_equals_matrix():
    for k in range(1, 8):
        assert o_density_counted(k) == o_density_exact(k)


def test_o_density_eigen_form():
    r5 = math.sqrt(5)
    lm, lp = (1 - r5) / 4, (1 + r5) / 4
    for k in range(0, 14):
        val = 1 + 0.8 / 4 ** k - (9 - 3 * r5) / 10 * lm ** k - (9 + 3 * r5) / 10 * lp ** k
        assert abs(val - float(o_density_exact(k))) < 1e-12


def test_o_density_tends_to_one():
    assert o_density_exact(40) > 0.999
    assert abs(o_density_closed_form(120) - 1) < 1e-9


def test_largest_zero_square():
    mask = np.zeros((6, 7), dtype=bool)
    mask[1:4, 2:5] = True
    assert largest_zero_square(mask) == 3
    assert largest_zero_square(np.zeros((3, 3), dtype=bool)) == 0
