from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from translie.linalg import (
    Matrix,
    SingularMatrixError,
    determinant,
    family_member,
    find_invertible_in_family,
    inverse,
    kernel_basis,
    quotient,
    rank,
    rref,
    solve_affine,
)

small = st.integers(-4, 4)


@st.composite
def matrices(draw, max_rows=5, max_cols=5):
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    return Matrix([[draw(small) for _ in range(c)] for _ in range(r)])


@st.composite
def square_matrices(draw, max_n=4):
    n = draw(st.integers(1, max_n))
    return Matrix([[draw(small) for _ in range(n)] for _ in range(n)])


def to_sympy(m: Matrix):
    return sympy.Matrix(m.nrows, m.ncols, [sympy.Rational(x.numerator, x.denominator) for r in m.rows for x in r])


# --- frozen examples -------------------------------------------------------


def test_rank_examples():
    assert rank(Matrix.identity(2)) == 2
    assert rank(Matrix.zeros(3, 4)) == 0
    assert rank(Matrix([[1, 2], [2, 4]])) == 1


def test_kernel_examples():
    assert kernel_basis(Matrix.identity(3)).ncols == 0
    assert kernel_basis(Matrix.zeros(2, 2)).ncols == 2
    k = kernel_basis(Matrix([[1, 2], [2, 4]]))
    assert k.ncols == 1
    (v,) = k.columns()
    # proportional to (2, -1)
    assert v[0] * -1 == v[1] * 2


def test_solve_affine_examples():
    sol = solve_affine(Matrix.identity(2), (1, 2))
    assert sol.particular == (1, 2) and sol.kernel.ncols == 0
    assert solve_affine(Matrix.zeros(2, 2), (1, 0)) is None
    sol = solve_affine(Matrix([[1, 1]]), (1,))
    assert sol.particular == (1, 0)
    (v,) = sol.kernel.columns()
    assert v[0] == -v[1] != 0


def test_quotient_examples():
    q = quotient(2, Matrix.from_columns([(1, 0)], 2))
    assert q.quotient_dim == 1
    assert q.projection == Matrix([[0, 1]])
    q = quotient(3, Matrix.zeros(3, 0))
    assert q.projection == Matrix.identity(3)
    q = quotient(3, Matrix.from_columns([(1, 1, 0)], 3))
    assert q.quotient_dim == 2
    assert q.project((1, 1, 0)) == (0, 0)


def test_find_invertible_examples():
    r = find_invertible_in_family(Matrix.identity(3), [])
    assert r.status == "found" and r.coefficients == ()
    r = find_invertible_in_family(Matrix([[0]]), [Matrix([[1]])])
    assert r.found and r.coefficients[0] != 0
    r = find_invertible_in_family(Matrix([[0, 1], [0, 0]]), [Matrix([[1, 0], [0, 0]]), Matrix([[0, 0], [0, 1]])])
    assert r.found
    c1, c2 = r.coefficients
    assert c1 * c2 != 0


def test_find_invertible_certifies_none():
    # every member has a zero last row
    r = find_invertible_in_family(Matrix([[1, 0], [0, 0]]), [Matrix([[0, 1], [0, 0]])])
    assert r.status == "none"


def test_find_invertible_undecided_above_cap():
    zero = Matrix.zeros(2, 2)
    r = find_invertible_in_family(zero, [zero] * 3, max_parameters=2)
    assert r.status == "undecided"
    # above the cap a random probe may still succeed
    dirs = [Matrix([[1, 0], [0, 0]]), Matrix([[0, 0], [0, 1]]), zero]
    assert find_invertible_in_family(zero, dirs, max_parameters=2).found


def test_inverse_singular_raises():
    with pytest.raises(SingularMatrixError):
        inverse(Matrix([[1, 2], [2, 4]]))


def test_shapes_of_empty_matrices():
    m = Matrix((), 3)
    assert m.T.shape == (3, 0)
    assert kernel_basis(m).shape == (3, 3)
    assert rank(m) == 0


# --- properties, sympy as oracle -------------------------------------------


@given(matrices())
def test_rank_matches_sympy(m):
    assert rank(m) == to_sympy(m).rank()


@given(matrices())
def test_rref_matches_sympy(m):
    r, pivots = rref(m)
    sr, spiv = to_sympy(m).rref()
    assert pivots == tuple(spiv)
    assert to_sympy(r) == sr


@given(matrices())
def test_kernel_is_kernel_of_full_dimension(m):
    k = kernel_basis(m)
    assert k.ncols == m.ncols - rank(m)
    assert (m @ k).is_zero() if k.ncols else True
    assert rank(k) == k.ncols


@given(square_matrices())
def test_determinant_matches_sympy(m):
    assert determinant(m) == to_sympy(m).det()


@given(square_matrices())
def test_inverse_roundtrip(m):
    if determinant(m) == 0:
        return
    assert m @ inverse(m) == Matrix.identity(m.nrows)
    assert inverse(m) @ m == Matrix.identity(m.nrows)


@given(matrices(), st.lists(small, min_size=5, max_size=5))
def test_solve_affine_consistent_systems(m, x):
    x = x[: m.ncols]
    b = m.apply(x)
    sol = solve_affine(m, b)
    assert sol is not None
    assert m.apply(sol.particular) == b
    assert sol.kernel.ncols == m.ncols - rank(m)


@given(matrices(max_cols=3), st.lists(small, min_size=5, max_size=5))
def test_solve_affine_agrees_with_rank_test(m, b):
    b = tuple(Fraction(v) for v in b[: m.nrows])
    augmented = m.hstack(Matrix.from_columns([b], m.nrows))
    solvable = rank(augmented) == rank(m)
    assert (solve_affine(m, b) is not None) == solvable


@given(matrices(max_rows=4, max_cols=3))
def test_quotient_kills_subspace_and_is_canonical(s):
    q = quotient(s.nrows, s)
    assert q.quotient_dim == s.nrows - rank(s)
    for col in s.columns():
        assert all(c == 0 for c in q.project(col))
    # same subspace, different spanning set: identical projection
    doubled = Matrix.from_columns([tuple(2 * c for c in col) for col in reversed(s.columns())], s.nrows)
    assert quotient(s.nrows, doubled).projection == q.projection
    for coords in [(1,) * q.quotient_dim]:
        assert q.project(q.lift(coords)) == tuple(Fraction(c) for c in coords)


@settings(max_examples=40)
@given(square_matrices(max_n=3), st.lists(square_matrices(max_n=3), max_size=2))
def test_invertible_search_is_sound(offset, dirs):
    dirs = [d for d in dirs if d.shape == offset.shape]
    r = find_invertible_in_family(offset, dirs)
    if r.found:
        assert determinant(family_member(offset, dirs, r.coefficients)) != 0
    else:
        # oracle: symbolic determinant identically zero
        cs = sympy.symbols(f"c0:{len(dirs) + 1}")
        total = to_sympy(offset)
        for c, d in zip(cs, dirs):
            total += c * to_sympy(d)
        assert r.status == "none"
        assert sympy.expand(total.det()) == 0
