"""Finite-dimensional Lie algebras over Q and their Chevalley-Eilenberg homology.

Structure constants follow ``[e_i, e_j] = sum_k c[i][j][k] e_k``.  Homology
is taken with trivial coefficients, which is where ``H_1(g) = g/[g,g]``
lives.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .linalg import (
    Matrix,
    QuotientPresentation,
    Vector,
    column_space_basis,
    determinant,
    inverse,
    is_invertible,
    kernel_basis,
    quotient,
    rank,
    solve_affine,
    vec_add,
    vector,
    zero_vector,
)


class LieAlgebraError(ValueError):
    pass


class LieAlgebra:
    """A Lie algebra given by exact structure constants.

    Antisymmetry and the Jacobi identity are checked on construction.
    """

    __slots__ = ("dim", "structure_constants", "name")

    def __init__(self, dim: int, structure_constants: Sequence, name: Optional[str] = None):
        consts = tuple(tuple(vector(structure_constants[i][j]) for j in range(dim)) for i in range(dim))
        for i in range(dim):
            for j in range(dim):
                if len(consts[i][j]) != dim:
                    raise LieAlgebraError(f"[e{i}, e{j}] has {len(consts[i][j])} components, expected {dim}")
        self.dim = dim
        self.structure_constants = consts
        self.name = name
        self._check_axioms()

    @classmethod
    def from_brackets(cls, dim: int, brackets: Mapping[tuple[int, int], Sequence], name=None) -> "LieAlgebra":
        """Build from ``{(i, j): [e_i, e_j]}`` with ``i < j``; unspecified pairs vanish."""
        c = [[zero_vector(dim) for _ in range(dim)] for _ in range(dim)]
        for (i, j), value in brackets.items():
            if not (0 <= i < j < dim):
                raise LieAlgebraError(f"bracket index pair ({i}, {j}) must satisfy 0 <= i < j < {dim}")
            value = vector(value)
            if len(value) != dim:
                raise LieAlgebraError(f"[e{i}, e{j}] has {len(value)} components, expected {dim}")
            c[i][j] = value
            c[j][i] = tuple(-x for x in value)
        return cls(dim, c, name=name)

    def _check_axioms(self) -> None:
        n, c = self.dim, self.structure_constants
        for i in range(n):
            if any(c[i][i]):
                raise LieAlgebraError(f"[e{i}, e{i}] must vanish")
            for j in range(i + 1, n):
                if any(a + b for a, b in zip(c[i][j], c[j][i])):
                    raise LieAlgebraError(f"antisymmetry fails for (e{i}, e{j})")
        basis = [self.basis_vector(i) for i in range(n)]
        for i, j, k in itertools.combinations(range(n), 3):
            ei, ej, ek = basis[i], basis[j], basis[k]
            total = vec_add(
                vec_add(self.bracket(self.bracket(ei, ej), ek), self.bracket(self.bracket(ej, ek), ei)),
                self.bracket(self.bracket(ek, ei), ej),
            )
            if any(total):
                raise LieAlgebraError(f"Jacobi identity fails on (e{i}, e{j}, e{k})")

    def basis_vector(self, i: int) -> Vector:
        return tuple(Fraction(int(k == i)) for k in range(self.dim))

    def bracket(self, u: Sequence, v: Sequence) -> Vector:
        if len(u) != self.dim or len(v) != self.dim:
            raise ValueError(f"bracket arguments must have length {self.dim}")
        out = [Fraction(0)] * self.dim
        for i, ui in enumerate(u):
            if not ui:
                continue
            row = self.structure_constants[i]
            for j, vj in enumerate(v):
                if not vj:
                    continue
                coeff = ui * vj
                for k, ck in enumerate(row[j]):
                    if ck:
                        out[k] += coeff * ck
        return tuple(out)

    def is_abelian(self) -> bool:
        return all(not any(v) for row in self.structure_constants for v in row)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LieAlgebra)
            and self.dim == other.dim
            and self.structure_constants == other.structure_constants
        )

    def __hash__(self) -> int:
        return hash((self.dim, self.structure_constants))

    def __repr__(self) -> str:
        return f"LieAlgebra({self.name or 'dim=' + str(self.dim)})"


def change_basis(g: LieAlgebra, p: Matrix) -> LieAlgebra:
    """Same algebra in the basis ``f_i = sum_k p[k][i] e_k``."""
    p_inv = inverse(p)
    cols = p.columns()
    consts = [
        [p_inv.apply(g.bracket(cols[i], cols[j])) for j in range(g.dim)]
        for i in range(g.dim)
    ]
    return LieAlgebra(g.dim, consts, name=g.name)


def direct_sum(g: LieAlgebra, h: LieAlgebra) -> LieAlgebra:
    n = g.dim + h.dim
    consts = [[zero_vector(n) for _ in range(n)] for _ in range(n)]
    for i in range(g.dim):
        for j in range(g.dim):
            consts[i][j] = g.structure_constants[i][j] + zero_vector(h.dim)
    for i in range(h.dim):
        for j in range(h.dim):
            consts[g.dim + i][g.dim + j] = zero_vector(g.dim) + h.structure_constants[i][j]
    name = f"{g.name}+{h.name}" if g.name and h.name else None
    return LieAlgebra(n, consts, name=name)


def abelian(n: int) -> LieAlgebra:
    return LieAlgebra.from_brackets(n, {}, name=f"abelian{n}")


def heisenberg() -> LieAlgebra:
    """Basis (e1, e2, e3) with [e1, e2] = e3."""
    return LieAlgebra.from_brackets(3, {(0, 1): (0, 0, 1)}, name="heisenberg")


def sl2() -> LieAlgebra:
    """Basis (h, e, f) with [h, e] = 2e, [h, f] = -2f, [e, f] = h."""
    return LieAlgebra.from_brackets(3, {(0, 1): (0, 2, 0), (0, 2): (0, 0, -2), (1, 2): (1, 0, 0)}, name="sl2")


BUILTIN_ALGEBRAS = {
    "abelian1": lambda: abelian(1),
    "abelian2": lambda: abelian(2),
    "abelian3": lambda: abelian(3),
    "heisenberg": heisenberg,
    "sl2": sl2,
}


def builtin_algebra(name: str) -> LieAlgebra:
    try:
        return BUILTIN_ALGEBRAS[name]()
    except KeyError:
        raise KeyError(f"unknown builtin Lie algebra {name!r}; known: {sorted(BUILTIN_ALGEBRAS)}") from None


@dataclass(frozen=True)
class LieMap:
    source: LieAlgebra
    target: LieAlgebra
    matrix: Matrix

    def __post_init__(self):
        if self.matrix.shape != (self.target.dim, self.source.dim):
            raise ValueError(
                f"matrix shape {self.matrix.shape} does not match "
                f"{self.source!r} -> {self.target!r}"
            )

    @classmethod
    def endo(cls, g: LieAlgebra, matrix: Matrix) -> "LieMap":
        return cls(g, g, matrix)


def is_homomorphism(phi: LieMap) -> bool:
    """``phi([e_i, e_j]) == [phi e_i, phi e_j]`` on all basis pairs."""
    src, tgt, m = phi.source, phi.target, phi.matrix
    images = m.columns()
    for i in range(src.dim):
        for j in range(i + 1, src.dim):
            lhs = m.apply(src.structure_constants[i][j])
            if lhs != tgt.bracket(images[i], images[j]):
                return False
    return True


def is_automorphism(phi: LieMap) -> bool:
    return phi.source == phi.target and is_invertible(phi.matrix) and is_homomorphism(phi)


def derived_subalgebra(g: LieAlgebra) -> Matrix:
    """Basis (as columns) of ``[g, g]``."""
    brackets = [g.structure_constants[i][j] for i in range(g.dim) for j in range(i + 1, g.dim)]
    if not brackets:
        return Matrix.zeros(g.dim, 0)
    return column_space_basis(Matrix.from_columns(brackets, g.dim))


def wedge_basis(n: int, k: int) -> list[tuple[int, ...]]:
    return list(itertools.combinations(range(n), k))


def _wedge_with(m: int, rest: tuple[int, ...]) -> tuple[int, tuple[int, ...]]:
    """Express ``e_m ^ e_rest`` as ``sign * e_sorted``; sign 0 if ``m`` repeats."""
    if m in rest:
        return 0, ()
    pos = sum(1 for r in rest if r < m)
    return (-1) ** pos, tuple(sorted(rest + (m,)))


@dataclass(frozen=True)
class ChainComplex:
    """``boundaries[k]`` is the matrix of ``C_k -> C_{k-1}`` (``boundaries[0]`` has no rows)."""

    dims: tuple[int, ...]
    boundaries: tuple[Matrix, ...]

    def check(self) -> None:
        for k in range(1, len(self.dims)):
            if not (self.boundaries[k - 1] @ self.boundaries[k]).is_zero():
                raise LieAlgebraError(f"d_{k - 1} o d_{k} != 0")


@functools.lru_cache(maxsize=64)
def ce_complex(g: LieAlgebra) -> ChainComplex:
    """Chevalley-Eilenberg chain complex of ``g`` with trivial coefficients.

    ``d(x_1 ^ ... ^ x_k) = sum_{p<q} (-1)^(p+q) [x_p, x_q] ^ x_1 ^ ..^x_p^..^x_q^.. ^ x_k``.
    """
    n = g.dim
    bases = [wedge_basis(n, k) for k in range(n + 1)]
    index = [{t: i for i, t in enumerate(b)} for b in bases]
    dims = tuple(len(b) for b in bases)
    boundaries = [Matrix.zeros(0, dims[0])]
    for k in range(1, n + 1):
        cols = []
        for t in bases[k]:
            col = [Fraction(0)] * dims[k - 1]
            for p, q in itertools.combinations(range(k), 2):
                sign = (-1) ** (p + q)
                rest = tuple(x for i, x in enumerate(t) if i != p and i != q)
                for m, cm in enumerate(g.structure_constants[t[p]][t[q]]):
                    if not cm:
                        continue
                    s, target = _wedge_with(m, rest)
                    if s:
                        col[index[k - 1][target]] += sign * s * cm
            cols.append(col)
        boundaries.append(Matrix.from_columns(cols, dims[k - 1]))
    c = ChainComplex(dims, tuple(boundaries))
    c.check()
    return c


def homology_dims(c: ChainComplex) -> list[int]:
    c.check()
    out = []
    for k, dim in enumerate(c.dims):
        cycles = dim - rank(c.boundaries[k])
        bounds = rank(c.boundaries[k + 1]) if k + 1 < len(c.dims) else 0
        out.append(cycles - bounds)
    return out


@dataclass(frozen=True)
class HomologyPresentation:
    """A chosen basis of ``H_k`` as the quotient ``Z_k / B_k``.

    Chains are mapped to coordinates by writing them in the cycle basis and
    then applying the quotient projection.
    """

    degree: int
    chain_dim: int
    cycle_basis: Matrix
    quotient: QuotientPresentation

    @property
    def dim(self) -> int:
        return self.quotient.quotient_dim

    def coordinates(self, cycle: Sequence) -> Vector:
        sol = solve_affine(self.cycle_basis, vector(cycle))
        if sol is None:
            raise ValueError("chain is not a cycle")
        return self.quotient.project(sol.particular)

    def representative(self, coords: Sequence) -> Vector:
        return self.cycle_basis.apply(self.quotient.lift(coords))


@functools.lru_cache(maxsize=256)
def homology_presentation(g: LieAlgebra, k: int) -> HomologyPresentation:
    c = ce_complex(g)
    if not 0 <= k < len(c.dims):
        raise ValueError(f"degree {k} outside 0..{g.dim}")
    z = kernel_basis(c.boundaries[k])
    if k + 1 < len(c.dims):
        b = column_space_basis(c.boundaries[k + 1])
    else:
        b = Matrix.zeros(c.dims[k], 0)
    b_in_z = []
    for col in b.columns():
        sol = solve_affine(z, col)
        assert sol is not None
        b_in_z.append(sol.particular)
    q = quotient(z.ncols, Matrix.from_columns(b_in_z, z.ncols))
    return HomologyPresentation(k, c.dims[k], z, q)


def wedge_power(m: Matrix, k: int) -> Matrix:
    """Matrix of ``Lambda^k m`` on the increasing-tuple basis (entries are minors)."""
    rows_basis = wedge_basis(m.nrows, k)
    cols_basis = wedge_basis(m.ncols, k)
    if k == 0:
        return Matrix.identity(1)
    return Matrix(
        (tuple(determinant(m.submatrix(r, c)) for c in cols_basis) for r in rows_basis),
        len(cols_basis),
    )


def induced_on_homology(phi: LieMap, k: int) -> Matrix:
    """Matrix of ``H_k(phi)`` in the bases fixed by :func:`homology_presentation`."""
    if not is_homomorphism(phi):
        raise LieAlgebraError("map is not a Lie algebra homomorphism")
    src = homology_presentation(phi.source, k)
    tgt = homology_presentation(phi.target, k)
    action = wedge_power(phi.matrix, k)
    cols = []
    for i in range(src.dim):
        unit = [0] * src.dim
        unit[i] = 1
        cols.append(tgt.coordinates(action.apply(src.representative(unit))))
    return Matrix.from_columns(cols, tgt.dim)


def h1_projection(g: LieAlgebra) -> Matrix:
    """The surjection ``g -> H_1(g)`` in the basis used by :func:`induced_on_homology`."""
    pres = homology_presentation(g, 1)
    cols = [pres.coordinates(g.basis_vector(i)) for i in range(g.dim)]
    return Matrix.from_columns(cols, pres.dim)
