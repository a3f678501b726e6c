from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from intsimplex.exact import (
    SquaredDistanceMatrix,
    as_rational,
    border,
    det,
    det_int,
    format_rational,
    principal_submatrix,
)
from oracles import cofactor_det, leibniz_det, regular_simplex_cm


def unit_simplex(n):
    return SquaredDistanceMatrix([[0 if i == j else 1 for j in range(n)] for i in range(n)])


def test_det_swap_matrix():
    assert det([[0, 1], [1, 0]]) == -1


def test_det_bordered_two_points():
    assert det([[0, 1, 1], [1, 0, 1], [1, 1, 0]]) == 2


def test_det_bordered_unit_triangle():
    full = border(unit_simplex(3)).full
    assert regular_simplex_cm(3) == -3
    assert cofactor_det(full) == -3
    assert det(full) == -3


def test_det_empty_is_one():
    assert det([]) == 1
    assert det_int([]) == 1


def test_det_rational_entries():
    m = [[Fraction(1, 2), Fraction(1, 3)], [Fraction(2, 5), 7]]
    assert det(m) == Fraction(1, 2) * 7 - Fraction(1, 3) * Fraction(2, 5)


def test_det_needs_row_swap():
    m = [[0, 0, 1], [0, 2, 0], [3, 0, 0]]
    assert det(m) == cofactor_det(m) == -6


def test_det_rejects_non_square():
    with pytest.raises(ValueError):
        det([[1, 2]])


def test_det_matches_cofactor_expansion(rng):
    for case in range(1200):
        n = 1 + case % 6
        m = [[Fraction(rng.randint(-9, 9), rng.randint(1, 6)) for _ in range(n)] for _ in range(n)]
        assert det(m) == cofactor_det(m)


def test_det_int_matches_leibniz(rng):
    for _ in range(300):
        n = rng.randint(1, 5)
        m = [[rng.randint(-4, 4) for _ in range(n)] for _ in range(n)]
        assert det_int(m) == leibniz_det(m)


def test_duplicated_row_gives_zero(rng):
    for _ in range(200):
        m = [[Fraction(rng.randint(-20, 20), rng.randint(1, 9)) for _ in range(5)] for _ in range(5)]
        i, j = rng.sample(range(5), 2)
        m[j] = list(m[i])
        assert det(m) == 0


@pytest.mark.parametrize("n", range(1, 8))
def test_regular_simplex_closed_form(n):
    full = border(unit_simplex(n)).full
    expected = regular_simplex_cm(n)
    assert det(full) == expected == (-1) ** n * n
    assert leibniz_det(full) == expected


def test_border_smallest():
    b = border(SquaredDistanceMatrix([[0]]))
    assert b.full == ((0, 1), (1, 0))


def test_border_two_points():
    b = border(SquaredDistanceMatrix([[0, 4], [4, 0]]))
    assert b.full == ((0, 1, 1), (1, 0, 4), (1, 4, 0))


def test_border_three_points_first_row():
    a = SquaredDistanceMatrix.from_upper(3, [1, 4, 4])
    b = border(a)
    assert b.size == 4
    assert b.full[0] == (0, 1, 1, 1)
    assert all(b.full[i][0] == 1 for i in range(1, 4))


def test_principal_submatrix_identity():
    a = SquaredDistanceMatrix.from_upper(3, [1, 4, 9])
    assert principal_submatrix(a, [2, 0, 1]) == a


def test_principal_submatrix_pair():
    a = SquaredDistanceMatrix.from_upper(3, [1, 4, 9])
    assert principal_submatrix(a, {0, 2}).entries == ((0, 4), (4, 0))


def test_principal_submatrix_partition_block():
    # (2,2) partition with lambda^2 = 4
    a = SquaredDistanceMatrix.from_upper(4, [1, 4, 4, 4, 4, 1])
    assert principal_submatrix(a, [0, 1]).entries == ((0, 1), (1, 0))


def test_principal_submatrix_empty_rejected():
    with pytest.raises(ValueError):
        principal_submatrix(unit_simplex(3), [])


squared = st.fractions(min_value=Fraction(1, 12), max_value=50, max_denominator=12)


@st.composite
def sq_matrices(draw, max_n=6):
    n = draw(st.integers(1, max_n))
    upper = draw(st.lists(squared, min_size=n * (n - 1) // 2, max_size=n * (n - 1) // 2))
    return SquaredDistanceMatrix.from_upper(n, upper)


@given(sq_matrices())
def test_border_round_trip(a):
    b = border(a)
    inner = [row[1:] for row in b.full[1:]]
    assert SquaredDistanceMatrix(inner) == a
    assert b.full[0][0] == 0 and all(x == 1 for x in b.full[0][1:])


@given(sq_matrices(max_n=5))
@settings(max_examples=60)
def test_bordered_det_agrees_with_cofactor(a):
    assert det(border(a).full) == cofactor_det([list(r) for r in border(a).full])


def test_matrix_validation():
    with pytest.raises(ValueError, match="symmetric"):
        SquaredDistanceMatrix([[0, 1], [2, 0]])
    with pytest.raises(ValueError, match="diagonal"):
        SquaredDistanceMatrix([[1, 1], [1, 0]])
    with pytest.raises(ValueError, match="positive"):
        SquaredDistanceMatrix([[0, 0], [0, 0]])


def test_rational_literals():
    assert as_rational("17/4") == Fraction(17, 4)
    assert as_rational(" -3 ") == -3
    assert format_rational(Fraction(6, 4)) == "3/2"
    for bad in ["0.5", "1/0", "", "x"]:
        with pytest.raises(ValueError):
            as_rational(bad)
    with pytest.raises(TypeError):
        as_rational(0.5)
