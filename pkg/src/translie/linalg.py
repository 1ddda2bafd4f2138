"""Exact rational linear algebra.

Everything here works over :class:`fractions.Fraction`; there is no floating
point anywhere in the package.  Vectors are plain tuples of ``Fraction`` and
matrices are immutable :class:`Matrix` objects.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

Vector = tuple  # tuple[Fraction, ...]


class SingularMatrixError(ValueError):
    pass


def as_fraction(x) -> Fraction:
    """Coerce ints, Fractions and strings such as ``"3/4"`` to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def fraction_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def vector(values: Iterable) -> Vector:
    return tuple(as_fraction(v) for v in values)


def zero_vector(n: int) -> Vector:
    return (Fraction(0),) * n


def vec_add(u: Vector, v: Vector) -> Vector:
    if len(u) != len(v):
        raise ValueError(f"length mismatch: {len(u)} vs {len(v)}")
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u: Vector, v: Vector) -> Vector:
    if len(u) != len(v):
        raise ValueError(f"length mismatch: {len(u)} vs {len(v)}")
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c, u: Vector) -> Vector:
    c = as_fraction(c)
    return tuple(c * a for a in u)


def is_zero_vector(u: Vector) -> bool:
    return all(a == 0 for a in u)


class Matrix:
    """Immutable dense matrix of Fractions."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable], ncols: Optional[int] = None):
        rows = tuple(vector(r) for r in rows)
        if ncols is None:
            if not rows:
                raise ValueError("ncols is required for a matrix with no rows")
            ncols = len(rows[0])
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged matrix rows")
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = ncols

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(((1 if i == j else 0) for j in range(n)) for i in range(n)) if n else cls((), 0)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "Matrix":
        return cls(((0,) * ncols for _ in range(nrows)), ncols)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], nrows: int) -> "Matrix":
        columns = [vector(c) for c in columns]
        for c in columns:
            if len(c) != nrows:
                raise ValueError("column length does not match nrows")
        return cls((tuple(c[i] for c in columns) for i in range(nrows)), len(columns))

    @classmethod
    def scalar(cls, n: int, c) -> "Matrix":
        c = as_fraction(c)
        return cls(((c if i == j else 0) for j in range(n)) for i in range(n)) if n else cls((), 0)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    @property
    def T(self) -> "Matrix":
        return Matrix((self.column(j) for j in range(self.ncols)), self.nrows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.ncols)]

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def is_zero(self) -> bool:
        return all(a == 0 for r in self.rows for a in r)

    def apply(self, v: Sequence) -> Vector:
        if len(v) != self.ncols:
            raise ValueError(f"vector of length {len(v)} does not fit {self.nrows}x{self.ncols} matrix")
        return tuple(sum((a * b for a, b in zip(r, v)), Fraction(0)) for r in self.rows)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
            cols = other.columns()
            return Matrix(
                (tuple(sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in cols) for r in self.rows),
                other.ncols,
            )
        return self.apply(other)

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return Matrix((vec_add(a, b) for a, b in zip(self.rows, other.rows)), self.ncols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return Matrix((vec_sub(a, b) for a, b in zip(self.rows, other.rows)), self.ncols)

    def __neg__(self) -> "Matrix":
        return self.scale(-1)

    def scale(self, c) -> "Matrix":
        return Matrix((vec_scale(c, r) for r in self.rows), self.ncols)

    def __eq__(self, other) -> bool:
        return isinstance(other, Matrix) and self.shape == other.shape and self.rows == other.rows

    def __hash__(self) -> int:
        return hash((self.shape, self.rows))

    def __repr__(self) -> str:
        body = ", ".join("[" + ", ".join(fraction_str(a) for a in r) + "]" for r in self.rows)
        return f"Matrix([{body}])"

    def tolist(self) -> list[list[str]]:
        return [[fraction_str(a) for a in r] for r in self.rows]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix((tuple(self.rows[i][j] for j in cols) for i in rows), len(cols))

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.nrows != other.nrows:
            raise ValueError("row count mismatch in hstack")
        return Matrix((a + b for a, b in zip(self.rows, other.rows)), self.ncols + other.ncols)

    def det(self) -> Fraction:
        return determinant(self)

    def inverse(self) -> "Matrix":
        return inverse(self)


def rref(m: Matrix) -> tuple[Matrix, tuple[int, ...]]:
    """Reduced row echelon form and pivot columns."""
    a = [list(r) for r in m.rows]
    pivots = []
    r = 0
    for c in range(m.ncols):
        if r == m.nrows:
            break
        p = next((i for i in range(r, m.nrows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv if x else x for x in a[r]]
        for i in range(m.nrows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y if y else x for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return Matrix(a, m.ncols), tuple(pivots)


def rank(m: Matrix) -> int:
    return len(rref(m)[1])


def kernel_basis(m: Matrix) -> Matrix:
    """Columns form a basis of the null space; one column per free variable."""
    reduced, pivots = rref(m)
    free = [c for c in range(m.ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * m.ncols
        x[f] = Fraction(1)
        for row, p in enumerate(pivots):
            x[p] = -reduced.rows[row][f]
        basis.append(x)
    return Matrix.from_columns(basis, m.ncols)


def column_space_basis(m: Matrix) -> Matrix:
    """The pivot columns of ``m``: a basis of its column space drawn from its own columns."""
    _, pivots = rref(m)
    return Matrix.from_columns([m.column(j) for j in pivots], m.nrows)


@dataclass(frozen=True)
class AffineSolution:
    particular: Vector
    kernel: Matrix


def solve_affine(a: Matrix, b: Sequence) -> Optional[AffineSolution]:
    """All solutions of ``a x = b``; ``None`` when the system is inconsistent."""
    b = vector(b)
    if len(b) != a.nrows:
        raise ValueError(f"rhs of length {len(b)} for a matrix with {a.nrows} rows")
    augmented = Matrix((r + (bi,) for r, bi in zip(a.rows, b)), a.ncols + 1)
    reduced, pivots = rref(augmented)
    if pivots and pivots[-1] == a.ncols:
        return None
    x = [Fraction(0)] * a.ncols
    for row, p in enumerate(pivots):
        x[p] = reduced.rows[row][a.ncols]
    return AffineSolution(tuple(x), kernel_basis(a))


def determinant(m: Matrix) -> Fraction:
    if not m.is_square():
        raise ValueError("determinant of a non-square matrix")
    a = [list(r) for r in m.rows]
    n = m.nrows
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        inv = 1 / a[c][c]
        for i in range(c + 1, n):
            if a[i][c] != 0:
                f = a[i][c] * inv
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return det


def inverse(m: Matrix) -> Matrix:
    if not m.is_square():
        raise ValueError("inverse of a non-square matrix")
    n = m.nrows
    reduced, pivots = rref(m.hstack(Matrix.identity(n)))
    if pivots[:n] != tuple(range(n)):
        raise SingularMatrixError("matrix is singular")
    return Matrix((r[n:] for r in reduced.rows), n)


def is_invertible(m: Matrix) -> bool:
    return m.is_square() and rank(m) == m.nrows


@dataclass(frozen=True)
class QuotientPresentation:
    """``ambient / span(subspace_basis)`` together with a surjection onto it.

    The projection rows are in reduced row echelon form, so coordinates in
    the quotient are reproducible.
    """

    ambient_dim: int
    subspace_basis: Matrix
    projection: Matrix
    quotient_dim: int

    def project(self, v: Sequence) -> Vector:
        return self.projection.apply(vector(v))

    def lift(self, coords: Sequence) -> Vector:
        """Some preimage of ``coords`` under the projection."""
        sol = solve_affine(self.projection, coords)
        assert sol is not None  # projection has full row rank
        return sol.particular


def quotient(ambient_dim: int, subspace_basis: Matrix) -> QuotientPresentation:
    if subspace_basis.nrows != ambient_dim:
        raise ValueError(
            f"subspace basis has {subspace_basis.nrows} rows, ambient dimension is {ambient_dim}"
        )
    # rows of the projection span the annihilator of the subspace
    annihilator = kernel_basis(subspace_basis.T)
    if annihilator.ncols:
        projection, _ = rref(annihilator.T)
    else:
        projection = Matrix((), ambient_dim)
    return QuotientPresentation(ambient_dim, subspace_basis, projection, projection.nrows)


@dataclass(frozen=True)
class InvertibleSearch:
    """Outcome of :func:`find_invertible_in_family`.

    ``status`` is ``"found"`` (``coefficients`` is a witness), ``"none"``
    (certified: no member of the family is invertible) or ``"undecided"``.
    """

    status: str
    coefficients: Optional[tuple[Fraction, ...]] = None

    @property
    def found(self) -> bool:
        return self.status == "found"


def family_member(offset: Matrix, directions: Sequence[Matrix], coefficients: Sequence) -> Matrix:
    m = offset
    for c, d in zip(coefficients, directions):
        if c:
            m = m + d.scale(c)
    return m


def find_invertible_in_family(
    offset: Matrix,
    directions: Sequence[Matrix],
    max_parameters: int = 4,
    random_trials: int = 64,
    seed: int = 0,
) -> InvertibleSearch:
    """Look for coefficients making ``offset + sum c_i directions_i`` invertible.

    The determinant is a polynomial of total degree at most ``n`` in the
    coefficients, so it vanishes identically iff it vanishes on the grid
    ``{0..n}^k``.  Exhausting that grid certifies ``"none"``.  With more than
    ``max_parameters`` directions the grid is not attempted; a seeded random
    probe may still find a witness, otherwise the result is ``"undecided"``.
    """
    n = offset.nrows
    if not offset.is_square():
        raise ValueError("family matrices must be square")
    for d in directions:
        if d.shape != offset.shape:
            raise ValueError("all family matrices must have the same shape")
    k = len(directions)
    if k > max_parameters:
        rng = random.Random(seed)
        for _ in range(random_trials):
            coeffs = tuple(Fraction(rng.randint(-3 * n - 3, 3 * n + 3)) for _ in range(k))
            if determinant(family_member(offset, directions, coeffs)) != 0:
                return InvertibleSearch("found", coeffs)
        return InvertibleSearch("undecided")
    for point in itertools.product(range(n + 1), repeat=k):
        coeffs = tuple(Fraction(p) for p in point)
        if determinant(family_member(offset, directions, coeffs)) != 0:
            return InvertibleSearch("found", coeffs)
    return InvertibleSearch("none")
