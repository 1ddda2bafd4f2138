"""Flat bundles over a simplicial complex and their twisted cohomology.

A local system assigns an invertible transport ``rho(a -> b)`` to every edge
``a < b``; the reverse direction uses the inverse.  A k-cochain assigns to
each k-simplex a vector in the fibre over its *last* vertex, which fixes the
coboundary as

    (dc)(v0..v_{k+1}) = sum_{i<=k} (-1)^i c(v0..^v_i..v_{k+1})
                        + (-1)^(k+1) rho(v_k -> v_{k+1}) c(v0..v_k).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .lie import LieAlgebra, LieMap, induced_on_homology, homology_presentation
from .linalg import (
    Matrix,
    QuotientPresentation,
    Vector,
    column_space_basis,
    inverse,
    is_invertible,
    is_zero_vector,
    kernel_basis,
    quotient,
    rank,
    rref,
    solve_affine,
    vec_add,
    vec_scale,
    vec_sub,
    vector,
    zero_vector,
)
from .nerve import SimplicialComplex, SimplicialMap, Violation


class NotFlatError(ValueError):
    pass


class LocalSystem:
    """Invertible edge transports over ``base`` with fibre ``Q^fiber_dim``."""

    __slots__ = ("base", "fiber_dim", "_transports", "_inverses", "_quotients")

    def __init__(self, base: SimplicialComplex, fiber_dim: int, transports: Mapping = ()):
        ident = Matrix.identity(fiber_dim)
        table = {e: ident for e in base.edges}
        for edge, m in dict(transports).items():
            edge = tuple(edge)
            if edge not in table:
                raise ValueError(f"{list(edge)} is not an edge of the base complex")
            if m.shape != (fiber_dim, fiber_dim):
                raise ValueError(f"transport on {list(edge)} has shape {m.shape}, expected {fiber_dim}x{fiber_dim}")
            if not is_invertible(m):
                raise ValueError(f"transport on {list(edge)} is not invertible")
            table[edge] = m
        self.base = base
        self.fiber_dim = fiber_dim
        self._transports = table
        self._inverses: dict = {}
        self._quotients: dict = {}  # degree -> cohomology_quotient result

    @classmethod
    def trivial(cls, base: SimplicialComplex, fiber_dim: int) -> "LocalSystem":
        return cls(base, fiber_dim)

    @property
    def transports(self) -> dict:
        return dict(self._transports)

    def transport(self, a: int, b: int) -> Matrix:
        """Transport from the fibre over ``a`` to the fibre over ``b`` along an edge."""
        if a == b:
            return Matrix.identity(self.fiber_dim)
        if a < b:
            return self._transports[(a, b)]
        if (b, a) not in self._inverses:
            self._inverses[(b, a)] = inverse(self._transports[(b, a)])
        return self._inverses[(b, a)]

    def check_flat(self) -> Optional[Violation]:
        for v0, v1, v2 in self.base.triangles:
            if self.transport(v1, v2) @ self.transport(v0, v1) != self.transport(v0, v2):
                return Violation(
                    "not_flat", (v0, v1, v2), "rho(v1->v2) rho(v0->v1) != rho(v0->v2)"
                )
        return None

    def is_flat(self) -> bool:
        return self.check_flat() is None

    def conjugate(self, vertex_matrices: Mapping[int, Matrix]) -> "LocalSystem":
        """Change of frame ``rho'(a -> b) = h_b rho(a -> b) h_a^-1``."""
        h = {v: vertex_matrices.get(v, Matrix.identity(self.fiber_dim)) for v in self.base.vertices}
        return LocalSystem(
            self.base,
            self.fiber_dim,
            {(a, b): h[b] @ m @ inverse(h[a]) for (a, b), m in self._transports.items()},
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LocalSystem)
            and self.base == other.base
            and self.fiber_dim == other.fiber_dim
            and self._transports == other._transports
        )

    __hash__ = None

    def __repr__(self) -> str:
        nontrivial = sum(1 for m in self._transports.values() if m != Matrix.identity(self.fiber_dim))
        return f"LocalSystem(fiber_dim={self.fiber_dim}, edges={len(self._transports)}, nontrivial={nontrivial})"


def check_flat(rho: LocalSystem) -> Optional[Violation]:
    return rho.check_flat()


def _sort_with_sign(simplex: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    s = list(simplex)
    sign = 1
    for i in range(len(s)):
        for j in range(len(s) - 1 - i):
            if s[j] > s[j + 1]:
                s[j], s[j + 1] = s[j + 1], s[j]
                sign = -sign
    return sign, tuple(s)


class TwistedCochain:
    """A k-cochain with values in a local system; missing simplices read as zero."""

    __slots__ = ("system", "degree", "values")

    def __init__(self, system: LocalSystem, degree: int, values: Mapping = ()):
        n = system.fiber_dim
        simplices = system.base.of_dim(degree)
        table = {s: zero_vector(n) for s in simplices}
        for s, v in dict(values).items():
            s = tuple(s)
            if s not in table:
                raise ValueError(f"{list(s)} is not a {degree}-simplex of the base complex")
            v = vector(v)
            if len(v) != n:
                raise ValueError(f"value on {list(s)} has length {len(v)}, expected {n}")
            table[s] = v
        self.system = system
        self.degree = degree
        self.values = table

    @classmethod
    def zero(cls, system: LocalSystem, degree: int) -> "TwistedCochain":
        return cls(system, degree)

    @classmethod
    def from_vector(cls, system: LocalSystem, degree: int, flat: Sequence) -> "TwistedCochain":
        n = system.fiber_dim
        simplices = system.base.of_dim(degree)
        if len(flat) != n * len(simplices):
            raise ValueError("flat vector has the wrong length")
        return cls(system, degree, {s: flat[i * n:(i + 1) * n] for i, s in enumerate(simplices)})

    def to_vector(self) -> Vector:
        out: tuple = ()
        for s in self.system.base.of_dim(self.degree):
            out += self.values[s]
        return out

    def __getitem__(self, simplex) -> Vector:
        return self.values[tuple(simplex)]

    def evaluate(self, ordered: Sequence[int]) -> Vector:
        """Value on an arbitrarily ordered tuple, in the fibre over its last entry.

        Degenerate tuples give zero; reordering contributes the permutation
        sign and a transport between the two last vertices.
        """
        n = self.system.fiber_dim
        if len(set(ordered)) != len(ordered):
            return zero_vector(n)
        sign, s = _sort_with_sign(ordered)
        value = self.values[s]
        if s[-1] != ordered[-1]:
            value = self.system.transport(s[-1], ordered[-1]).apply(value)
        return vec_scale(sign, value)

    def _check_same(self, other: "TwistedCochain") -> None:
        if self.degree != other.degree or self.system != other.system:
            raise ValueError("cochains live in different groups")

    def __add__(self, other: "TwistedCochain") -> "TwistedCochain":
        self._check_same(other)
        return TwistedCochain(self.system, self.degree, {s: vec_add(v, other.values[s]) for s, v in self.values.items()})

    def __sub__(self, other: "TwistedCochain") -> "TwistedCochain":
        self._check_same(other)
        return TwistedCochain(self.system, self.degree, {s: vec_sub(v, other.values[s]) for s, v in self.values.items()})

    def __neg__(self) -> "TwistedCochain":
        return self.scale(-1)

    def scale(self, c) -> "TwistedCochain":
        return TwistedCochain(self.system, self.degree, {s: vec_scale(c, v) for s, v in self.values.items()})

    def is_zero(self) -> bool:
        return all(is_zero_vector(v) for v in self.values.values())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TwistedCochain)
            and self.degree == other.degree
            and self.system == other.system
            and self.values == other.values
        )

    __hash__ = None

    def __repr__(self) -> str:
        nonzero = {s: v for s, v in self.values.items() if not is_zero_vector(v)}
        return f"TwistedCochain(degree={self.degree}, nonzero={len(nonzero)})"


def coboundary(c: TwistedCochain) -> TwistedCochain:
    rho, k = c.system, c.degree
    out = {}
    for s in rho.base.of_dim(k + 1):
        total = zero_vector(rho.fiber_dim)
        for i in range(k + 1):
            face = s[:i] + s[i + 1:]
            term = c.values[face]
            total = vec_add(total, term) if i % 2 == 0 else vec_sub(total, term)
        last = rho.transport(s[k], s[k + 1]).apply(c.values[s[:-1]])
        total = vec_add(total, last) if (k + 1) % 2 == 0 else vec_sub(total, last)
        out[s] = total
    return TwistedCochain(rho, k + 1, out)


def coboundary_matrix(rho: LocalSystem, k: int) -> Matrix:
    """Matrix of ``C^k -> C^{k+1}`` on the flattened (simplex, fibre index) ordering."""
    n = rho.fiber_dim
    src = rho.base.of_dim(k)
    dst = rho.base.of_dim(k + 1)
    col_of = {s: i for i, s in enumerate(src)}
    rows = [[Fraction(0)] * (n * len(src)) for _ in range(n * len(dst))]
    for r, s in enumerate(dst):
        for i in range(k + 1):
            c0 = col_of[s[:i] + s[i + 1:]] * n
            sign = 1 if i % 2 == 0 else -1
            for a in range(n):
                rows[r * n + a][c0 + a] += sign
        c0 = col_of[s[:-1]] * n
        sign = 1 if (k + 1) % 2 == 0 else -1
        t = rho.transport(s[k], s[k + 1])
        for a in range(n):
            for b in range(n):
                if t[a, b]:
                    rows[r * n + a][c0 + b] += sign * t[a, b]
    return Matrix(rows, n * len(src))


def _require_flat(rho: LocalSystem) -> None:
    v = rho.check_flat()
    if v is not None:
        raise NotFlatError(str(v))


def cohomology_dim(rho: LocalSystem, k: int) -> int:
    _require_flat(rho)
    if k < 0 or not rho.base.of_dim(k):
        return 0
    ck = rho.fiber_dim * len(rho.base.of_dim(k))
    cocycles = ck - rank(coboundary_matrix(rho, k))
    coboundaries = rank(coboundary_matrix(rho, k - 1)) if k > 0 else 0
    return cocycles - coboundaries


def cohomology_dims(rho: LocalSystem, max_degree: int = 2) -> list[int]:
    return [cohomology_dim(rho, k) for k in range(max_degree + 1)]


def is_exact(c: TwistedCochain) -> Optional[TwistedCochain]:
    """A primitive ``m`` with ``dm = c``, or None when ``c`` is not exact."""
    if c.degree == 0:
        raise ValueError("degree-0 cochains have no primitives")
    if not coboundary(c).is_zero():
        raise ValueError("cochain is not a cocycle")
    sol = solve_affine(coboundary_matrix(c.system, c.degree - 1), c.to_vector())
    if sol is None:
        return None
    return TwistedCochain.from_vector(c.system, c.degree - 1, sol.particular)


def cohomology_quotient(rho: LocalSystem, k: int) -> tuple[Matrix, QuotientPresentation]:
    """Cocycle basis of ``C^k`` and the quotient by coboundaries, in cocycle coordinates."""
    if k in rho._quotients:
        return rho._quotients[k]
    _require_flat(rho)
    z = kernel_basis(coboundary_matrix(rho, k))
    if k > 0:
        b = column_space_basis(coboundary_matrix(rho, k - 1))
    else:
        b = Matrix.zeros(z.nrows, 0)
    # express every coboundary in cocycle coordinates with one elimination
    reduced, pivots = rref(Matrix((zr + br for zr, br in zip(z.rows, b.rows)), z.ncols + b.ncols))
    assert pivots == tuple(range(z.ncols))
    b_in_z = Matrix(reduced.rows[: z.ncols], z.ncols + b.ncols).columns()[z.ncols :]
    result = z, quotient(z.ncols, Matrix.from_columns(b_in_z, z.ncols))
    rho._quotients[k] = result
    return result


class CohomologyClass:
    """Class of a twisted cocycle; equality means the difference is exact."""

    __slots__ = ("representative",)

    def __init__(self, representative: TwistedCochain):
        if not coboundary(representative).is_zero():
            raise ValueError("representative is not a cocycle")
        self.representative = representative

    @property
    def system(self) -> LocalSystem:
        return self.representative.system

    @property
    def degree(self) -> int:
        return self.representative.degree

    def is_zero(self) -> bool:
        if self.degree == 0:
            return self.representative.is_zero()
        return is_exact(self.representative) is not None

    def coordinates(self) -> Vector:
        """Coordinates in ``H^k`` with respect to the canonical quotient basis."""
        z, q = cohomology_quotient(self.system, self.degree)
        sol = solve_affine(z, self.representative.to_vector())
        assert sol is not None
        return q.project(sol.particular)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CohomologyClass):
            return NotImplemented
        if other.system != self.system or other.degree != self.degree:
            return False
        return CohomologyClass(self.representative - other.representative).is_zero()

    __hash__ = None

    def __repr__(self) -> str:
        return f"CohomologyClass(degree={self.degree}, zero={self.is_zero()})"


def tree_frames(rho: LocalSystem, root: int = 0) -> dict[int, Matrix]:
    """Transport from ``root`` to every vertex along the BFS spanning tree."""
    parent = rho.base.spanning_tree(root)
    if len(parent) != rho.base.vertex_count:
        raise ValueError("base complex is disconnected")
    frames = {root: Matrix.identity(rho.fiber_dim)}
    order = sorted(parent, key=lambda v: _depth(parent, v))
    for v in order:
        p = parent[v]
        if p is not None:
            frames[v] = rho.transport(p, v) @ frames[p]
    return frames


def _depth(parent: Mapping[int, Optional[int]], v: int) -> int:
    d = 0
    while parent[v] is not None:
        v = parent[v]
        d += 1
    return d


def non_tree_edges(K: SimplicialComplex, root: int = 0) -> list[tuple[int, int]]:
    parent = K.spanning_tree(root)
    tree = {tuple(sorted((v, p))) for v, p in parent.items() if p is not None}
    return [e for e in K.edges if e not in tree]


def generator_edges(K: SimplicialComplex, root: int = 0) -> list[tuple[int, int]]:
    """Non-tree edges left after eliminating those forced by triangles.

    A triangle with exactly one undetermined edge expresses that edge's loop
    through the other two, so that edge is eliminated.  When elimination
    stalls, the smallest open edge becomes a generator.  The generators'
    loops generate the fundamental group at ``root``.
    """
    parent = K.spanning_tree(root)
    determined = {tuple(sorted((v, p))) for v, p in parent.items() if p is not None}
    generators = []
    while True:
        changed = True
        while changed:
            changed = False
            for a, b, c in K.triangles:
                open_edges = [e for e in ((a, b), (b, c), (a, c)) if e not in determined]
                if len(open_edges) == 1:
                    determined.add(open_edges[0])
                    changed = True
        remaining = [e for e in K.edges if e not in determined]
        if not remaining:
            return generators
        generators.append(remaining[0])
        determined.add(remaining[0])


def holonomy(rho: LocalSystem, reduced: bool = False) -> list[Matrix]:
    """Loop transports at vertex 0, one per edge off the BFS spanning tree.

    For a non-tree edge ``(a, b)`` this is ``g_b^-1 rho(a -> b) g_a`` where
    ``g_v`` transports from vertex 0 to ``v`` along the tree.  With
    ``reduced=True`` only the edges from :func:`generator_edges` are listed.
    """
    frames = tree_frames(rho)
    edges = generator_edges(rho.base) if reduced else non_tree_edges(rho.base)
    return [inverse(frames[b]) @ rho.transport(a, b) @ frames[a] for a, b in edges]


def induced_system(g: LieAlgebra, edge_autos: Mapping, base: SimplicialComplex, k: int) -> LocalSystem:
    """Flat system with fibre ``H_k(g)`` induced by edge automorphisms of ``g``."""
    source = LocalSystem(base, g.dim, edge_autos)
    violation = source.check_flat()
    if violation is not None:
        raise NotFlatError(f"edge automorphisms violate the cocycle condition: {violation}")
    dim = homology_presentation(g, k).dim
    transports = {e: induced_on_homology(LieMap.endo(g, m), k) for e, m in source.transports.items()}
    out = LocalSystem(base, dim, transports)
    _require_flat(out)
    return out


def pullback_system(rho: LocalSystem, f: SimplicialMap) -> LocalSystem:
    if f.target != rho.base:
        raise ValueError("map does not land in the base of the local system")
    violation = f.validate()
    if violation is not None:
        raise ValueError(f"invalid simplicial map: {violation}")
    return LocalSystem(f.source, rho.fiber_dim, {(a, b): rho.transport(f(a), f(b)) for a, b in f.source.edges})


def pullback_cochain(c: TwistedCochain, f: SimplicialMap, pulled: Optional[LocalSystem] = None) -> TwistedCochain:
    if pulled is None:
        pulled = pullback_system(c.system, f)
    values = {s: c.evaluate(tuple(f(v) for v in s)) for s in f.source.of_dim(c.degree)}
    return TwistedCochain(pulled, c.degree, values)
