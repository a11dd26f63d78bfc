from fractions import Fraction

import pytest

from errors import PreconditionError, RationalFormatError
from linalg import EchelonBasis, RationalMatrix, is_constant, kernel_basis, primitive_integer_vector, rank
from rational import format_bound, format_rational, parse_bound, parse_rational, to_fraction


@pytest.mark.parametrize(
    "text, expected",
    [("0", Fraction(0)), ("-7", Fraction(-7)), ("6/4", Fraction(3, 2)), ("-10/15", Fraction(-2, 3))],
)
def test_parse_rational_is_canonical(text, expected):
    assert parse_rational(text) == expected
    assert parse_rational(format_rational(expected)) == expected


@pytest.mark.parametrize("text", ["1.5", " 1", "+1", "", "1/0", "1/-2", "inf", "1e3"])
def test_parse_rational_rejects(text):
    with pytest.raises(RationalFormatError):
        parse_rational(text)


def test_parse_rational_reports_location():
    with pytest.raises(RationalFormatError) as excinfo:
        parse_rational("3/0", "edges[2].b")
    assert excinfo.value.location == "edges[2].b"


def test_infinite_bounds_only_on_their_side():
    assert parse_bound("inf", upper=True) is None
    assert parse_bound("-inf", upper=False) is None
    with pytest.raises(RationalFormatError):
        parse_bound("inf", upper=False)
    with pytest.raises(RationalFormatError):
        parse_bound("-inf", upper=True)
    assert format_bound(None, upper=True) == "inf"
    assert format_bound(None, upper=False) == "-inf"
    assert format_bound(Fraction(1, 3), upper=True) == "1/3"


def test_floats_are_refused():
    with pytest.raises(TypeError):
        to_fraction(0.5)
    assert to_fraction("2/4") == Fraction(1, 2)


def test_rank_of_trivial_matrices():
    assert rank(RationalMatrix.zeros(3, 4)) == 0
    assert rank(RationalMatrix.identity(5)) == 5
    assert kernel_basis(RationalMatrix.identity(3)) == []


def test_rref_and_kernel():
    m = RationalMatrix([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    reduced, pivots = m.rref()
    assert pivots == (0, 1)
    assert reduced.row(0) == (1, 0, 1)
    assert reduced.row(1) == (0, 1, 1)
    (vector,) = m.kernel_basis()
    assert not any(m.apply(vector))
    assert vector == (-1, -1, 1)


def test_solve_particular_solution():
    m = RationalMatrix([[1, 1], [1, -1]])
    assert m.solve([3, 1]) == (2, 1)
    assert RationalMatrix([[1, 1], [2, 2]]).solve([1, 3]) is None
    # free variable set to zero
    assert RationalMatrix([[1, 1]]).solve([5]) == (5, 0)


def test_inverse():
    m = RationalMatrix([[2, 1], [1, 1]])
    assert m.inverse() == RationalMatrix([[1, -1], [-1, 2]])
    assert m @ m.inverse() == RationalMatrix.identity(2)
    with pytest.raises(PreconditionError):
        RationalMatrix([[1, 2], [2, 4]]).inverse()


def test_matmul_and_transpose():
    a = RationalMatrix([[1, 2, 3]])
    assert a.T.shape == (3, 1)
    assert (a @ a.T).to_lists() == [[14]]
    assert a.stack(a).shape == (2, 3)
    assert a.select_rows([0]) == a


def test_echelon_basis_grows_only_on_independent_rows():
    basis = EchelonBasis(3)
    assert basis.add([1, 0, 1])
    assert not basis.add([2, 0, 2])
    assert basis.add([0, 1, 0])
    assert len(basis) == 2
    assert basis.contains([1, 1, 1])
    assert not basis.contains([0, 0, 1])


def test_primitive_integer_vector():
    assert primitive_integer_vector([0, Fraction(-1, 2), 1]) == (0, 1, -2)
    assert primitive_integer_vector([Fraction(2, 3), Fraction(4, 3)]) == (1, 2)
    with pytest.raises(ValueError):
        primitive_integer_vector([0, 0])


def test_is_constant():
    assert is_constant([Fraction(2), 2, 2])
    assert not is_constant([0, 1])
