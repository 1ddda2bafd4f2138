"""Transitive Lie algebroids as transition data over a nerve.

A descriptor stores, for the structure algebra ``g`` over a complex ``K``:

* a Lie algebra automorphism ``phi(a -> b)`` for every edge ``a < b``; these
  form a flat local system with fibre ``g``;
* a ``g``-valued twisted 2-cocycle ``omega`` (fibre over the last vertex of
  each triangle).

This is the locally constant, pure-Cech form of the smooth transition
matrices ``[[phi, omega], [0, 1]]``.  Changing trivializations acts by
vertex automorphisms ``eta`` and an edge cochain ``m``::

    phi'(a -> b) = eta_b phi(a -> b) eta_a^-1
    omega'       = eta . omega + d_{phi'}(eta . m)
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .lie import LieAlgebra, LieMap, h1_projection, is_automorphism, is_homomorphism
from .linalg import (
    Matrix,
    Vector,
    column_space_basis,
    family_member,
    find_invertible_in_family,
    inverse,
    is_invertible,
    solve_affine,
    vec_add,
    vector,
    zero_vector,
)
from .local_system import (
    CohomologyClass,
    LocalSystem,
    TwistedCochain,
    coboundary,
    cohomology_dim,
    holonomy,
    induced_system,
    is_exact,
    non_tree_edges,
    pullback_cochain,
    tree_frames,
)
from .nerve import SimplicialComplex, SimplicialMap, Violation


class InvalidDescriptorError(ValueError):
    def __init__(self, violations: Sequence[Violation]):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


class NotAbelianError(ValueError):
    pass


class InvalidGaugeError(ValueError):
    pass


@dataclass(frozen=True)
class TransitionMatrix:
    """The block ``[[phi, omega], [0, 1]]`` acting on ``(u, X)``."""

    phi: Matrix
    omega: Vector

    @classmethod
    def identity(cls, n: int) -> "TransitionMatrix":
        return cls(Matrix.identity(n), zero_vector(n))


def compose_transitions(t2: TransitionMatrix, t1: TransitionMatrix) -> TransitionMatrix:
    """Block product ``t2 . t1``: ``(phi2 phi1, phi2 omega1 + omega2)``."""
    if t2.phi.shape != t1.phi.shape or len(t1.omega) != len(t2.omega):
        raise ValueError("transition matrices have different fibre dimensions")
    return TransitionMatrix(t2.phi @ t1.phi, vec_add(t2.phi.apply(t1.omega), vector(t2.omega)))


class AlgebroidDescriptor:
    """Combinatorial transition data of a transitive Lie algebroid.

    Omitted edges carry the identity and omitted triangles carry zero.
    Construction only checks shapes; :func:`validate` checks the cocycle
    conditions.
    """

    __slots__ = ("g", "base", "edge_phi", "omega2", "_system")

    def __init__(self, g: LieAlgebra, base: SimplicialComplex, edge_phi: Mapping = (), omega2: Mapping = ()):
        n = g.dim
        ident = Matrix.identity(n)
        phis = {e: ident for e in base.edges}
        for e, m in dict(edge_phi).items():
            e = tuple(e)
            if e not in phis:
                raise ValueError(f"{list(e)} is not an edge of the base complex")
            if m.shape != (n, n):
                raise ValueError(f"matrix on edge {list(e)} has shape {m.shape}, expected {n}x{n}")
            phis[e] = m
        omegas = {t: zero_vector(n) for t in base.triangles}
        for t, v in dict(omega2).items():
            t = tuple(t)
            if t not in omegas:
                raise ValueError(f"{list(t)} is not a triangle of the base complex")
            v = vector(v)
            if len(v) != n:
                raise ValueError(f"omega on {list(t)} has length {len(v)}, expected {n}")
            omegas[t] = v
        self.g = g
        self.base = base
        self.edge_phi = phis
        self.omega2 = omegas
        self._system = None

    @property
    def system(self) -> LocalSystem:
        """The flat system with fibre ``g`` built from the edge automorphisms."""
        if self._system is None:
            self._system = LocalSystem(self.base, self.g.dim, self.edge_phi)
        return self._system

    @property
    def omega(self) -> TwistedCochain:
        return TwistedCochain(self.system, 2, self.omega2)

    def transition(self, edge: tuple[int, int], omega_part: Optional[Sequence] = None) -> TransitionMatrix:
        n = self.g.dim
        return TransitionMatrix(self.edge_phi[tuple(edge)], vector(omega_part) if omega_part else zero_vector(n))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, AlgebroidDescriptor)
            and self.g == other.g
            and self.base == other.base
            and self.edge_phi == other.edge_phi
            and self.omega2 == other.omega2
        )

    __hash__ = None

    def __repr__(self) -> str:
        return f"AlgebroidDescriptor(g={self.g!r}, vertices={self.base.vertex_count})"


def validate(d: AlgebroidDescriptor) -> list[Violation]:
    """Every failure of: edge maps in Aut(g), the triangle cocycle, and d omega = 0."""
    out = []
    for e, m in sorted(d.edge_phi.items()):
        if not is_invertible(m):
            out.append(Violation("not_automorphism", e, "edge matrix is singular"))
        elif not is_homomorphism(LieMap.endo(d.g, m)):
            out.append(Violation("not_automorphism", e, "edge matrix is not a Lie algebra homomorphism"))
    if out:
        return out
    for v0, v1, v2 in d.base.triangles:
        if d.edge_phi[(v1, v2)] @ d.edge_phi[(v0, v1)] != d.edge_phi[(v0, v2)]:
            out.append(Violation("cocycle", (v0, v1, v2), "phi(v1->v2) phi(v0->v1) != phi(v0->v2)"))
    if out:
        return out
    closure = coboundary(d.omega)
    for s, v in sorted(closure.values.items()):
        if any(v):
            out.append(Violation("omega_not_closed", s, "twisted coboundary of omega is nonzero"))
    return out


def is_valid(d: AlgebroidDescriptor) -> bool:
    return not validate(d)


def _require_valid(d: AlgebroidDescriptor) -> None:
    violations = validate(d)
    if violations:
        raise InvalidDescriptorError(violations)


def trivial_descriptor(g: LieAlgebra, K: SimplicialComplex) -> AlgebroidDescriptor:
    return AlgebroidDescriptor(g, K)


@dataclass(frozen=True)
class GaugeDatum:
    """Vertex automorphisms ``eta`` and an edge cochain ``m`` (missing entries: id / 0)."""

    eta: Mapping = field(default_factory=dict)
    m: Mapping = field(default_factory=dict)

    def eta_at(self, v: int, n: int) -> Matrix:
        return self.eta.get(v, Matrix.identity(n))

    def m_at(self, e: tuple[int, int], n: int) -> Vector:
        return vector(self.m[e]) if e in self.m else zero_vector(n)


def _check_gauge(d: AlgebroidDescriptor, h: GaugeDatum) -> None:
    n = d.g.dim
    for v, eta in h.eta.items():
        if v not in d.base.vertices:
            raise InvalidGaugeError(f"gauge names vertex {v}, which is not in the base")
        if eta.shape != (n, n) or not is_automorphism(LieMap.endo(d.g, eta)):
            raise InvalidGaugeError(f"eta at vertex {v} is not an automorphism of g")
    for e, val in h.m.items():
        if tuple(e) not in d.edge_phi:
            raise InvalidGaugeError(f"gauge names {list(e)}, which is not an edge of the base")
        if len(val) != n:
            raise InvalidGaugeError(f"m on {list(e)} has length {len(val)}, expected {n}")


def gauge_transform(d: AlgebroidDescriptor, h: GaugeDatum) -> AlgebroidDescriptor:
    _check_gauge(d, h)
    n = d.g.dim
    eta = {v: h.eta_at(v, n) for v in d.base.vertices}
    eta_inv = {v: inverse(m) for v, m in eta.items()}
    phis = {(a, b): eta[b] @ m @ eta_inv[a] for (a, b), m in d.edge_phi.items()}
    system = LocalSystem(d.base, n, phis)
    pushed = {t: eta[t[-1]].apply(v) for t, v in d.omega2.items()}
    shift = coboundary(TwistedCochain(system, 1, {e: eta[e[1]].apply(h.m_at(e, n)) for e in d.base.edges}))
    omegas = {t: vec_add(v, shift.values[t]) for t, v in pushed.items()}
    return AlgebroidDescriptor(d.g, d.base, phis, omegas)


def compose_gauges(h2: GaugeDatum, h1: GaugeDatum, n: int, base: SimplicialComplex) -> GaugeDatum:
    """Datum acting as ``h2`` after ``h1``: ``(eta2 eta1, m1 + eta1^-1 . m2)``."""
    eta = {v: h2.eta_at(v, n) @ h1.eta_at(v, n) for v in base.vertices}
    m = {
        e: vec_add(h1.m_at(e, n), inverse(h1.eta_at(e[1], n)).apply(h2.m_at(e, n)))
        for e in base.edges
    }
    return GaugeDatum(eta, m)


def normalize(d: AlgebroidDescriptor) -> tuple[AlgebroidDescriptor, GaugeDatum]:
    """Gauge so that every BFS-tree edge carries the identity.

    Non-tree edges then carry the holonomy and omega is expressed in the
    frame of vertex 0.
    """
    frames = tree_frames(d.system)
    h = GaugeDatum({v: inverse(f) for v, f in frames.items()})
    return gauge_transform(d, h), h


@dataclass
class ClassificationResult:
    """Invariants of a descriptor with abelian ``g``.

    ``holonomy`` lists loop transports at vertex 0 along the generating
    edges of :func:`~translie.local_system.generator_edges`.
    ``coordinates`` are the coordinates of the class in ``H^2`` of the
    tree-normalized system; with trivial holonomy on a closed surface they
    are pairings with the fundamental cycle, oriented so that the first
    triangle in lexicographic order has coefficient +1.
    """

    holonomy: list
    omega_class: CohomologyClass
    h2_dim: int
    exact: bool
    coordinates: Vector


def classify_commutative(d: AlgebroidDescriptor) -> ClassificationResult:
    if not d.g.is_abelian():
        raise NotAbelianError("full classification needs an abelian g; use induced_class instead")
    _require_valid(d)
    normalized, _ = normalize(d)
    cls = CohomologyClass(d.omega)
    coords = CohomologyClass(normalized.omega).coordinates()
    return ClassificationResult(
        holonomy=holonomy(d.system, reduced=True),
        omega_class=cls,
        h2_dim=cohomology_dim(d.system, 2),
        exact=cls.is_zero(),
        coordinates=coords,
    )


def equivalent_given_eta(d1: AlgebroidDescriptor, d2: AlgebroidDescriptor, eta: Mapping) -> Optional[GaugeDatum]:
    """Complete ``eta`` to a gauge datum carrying ``d1`` to ``d2``, if possible.

    Solves ``d_{phi2} m' = omega2 - eta . omega1`` and returns
    ``GaugeDatum(eta, eta^-1 . m')`` (the form :func:`gauge_transform`
    consumes), or None when no ``m'`` exists.
    """
    if d1.g != d2.g or d1.base != d2.base:
        raise ValueError("descriptors differ in Lie algebra or base")
    n = d1.g.dim
    full_eta = {v: eta.get(v, Matrix.identity(n)) for v in d1.base.vertices}
    for v, m in full_eta.items():
        if not is_automorphism(LieMap.endo(d1.g, m)):
            raise InvalidGaugeError(f"eta at vertex {v} is not an automorphism of g")
    for (a, b), m in d1.edge_phi.items():
        if full_eta[b] @ m @ inverse(full_eta[a]) != d2.edge_phi[(a, b)]:
            raise InvalidGaugeError(f"eta does not conjugate phi1 onto phi2 on edge {[a, b]}")
    pushed = TwistedCochain(d2.system, 2, {t: full_eta[t[-1]].apply(v) for t, v in d1.omega2.items()})
    primitive = is_exact(d2.omega - pushed)
    if primitive is None:
        return None
    m = {e: inverse(full_eta[e[1]]).apply(v) for e, v in primitive.values.items()}
    return GaugeDatum(full_eta, m)


@dataclass
class EquivalenceResult:
    status: str  # "equivalent" | "inequivalent" | "undecided"
    witness: Optional[GaugeDatum] = None
    reason: str = ""

    @property
    def equivalent(self) -> bool:
        return self.status == "equivalent"


def _flat_index(i: int, j: int, n: int) -> int:
    return i * n + j


def equivalent_abelian(
    d1: AlgebroidDescriptor, d2: AlgebroidDescriptor, max_parameters: int = 4
) -> EquivalenceResult:
    """Decide whether two descriptors with the same abelian ``g`` are gauge equivalent.

    After tree normalization a gauge between the two is a single matrix
    ``E`` (at every vertex) intertwining the holonomies, together with an edge
    cochain absorbing ``omega2 - E omega1``.  Those conditions are linear in
    ``(E, m)``; the invertible members of the resulting affine family of
    ``E`` are found or ruled out by :func:`find_invertible_in_family`.
    """
    if d1.g != d2.g:
        raise ValueError("descriptors have different Lie algebras")
    if d1.base != d2.base:
        raise ValueError("descriptors have different base complexes")
    if not d1.g.is_abelian():
        raise NotAbelianError("equivalence decision is only available for abelian g")
    if not d1.base.is_connected():
        raise ValueError("base complex must be connected")
    _require_valid(d1)
    _require_valid(d2)

    n, K = d1.g.dim, d1.base
    n1, nu1 = normalize(d1)
    n2, nu2 = normalize(d2)
    edges = K.edges
    edge_col = {e: n * n + i * n for i, e in enumerate(edges)}
    ncols = n * n + n * len(edges)
    rows, rhs = [], []

    for e in non_tree_edges(K):
        h1, h2 = n1.edge_phi[e], n2.edge_phi[e]
        # (h2 E - E h1)[i][j] = 0
        for i in range(n):
            for j in range(n):
                row = [Fraction(0)] * ncols
                for k in range(n):
                    row[_flat_index(k, j, n)] += h2[i, k]
                    row[_flat_index(i, k, n)] -= h1[k, j]
                rows.append(row)
                rhs.append(Fraction(0))

    # E omega1(t) + (d_{phi2} m)(t) = omega2(t), with d as in local_system.coboundary
    for t in K.triangles:
        w1, w2 = n1.omega2[t], n2.omega2[t]
        transport = n2.system.transport(t[1], t[2])
        for i in range(n):
            row = [Fraction(0)] * ncols
            for j in range(n):
                row[_flat_index(i, j, n)] += w1[j]
            row[edge_col[(t[1], t[2])] + i] += 1
            row[edge_col[(t[0], t[2])] + i] -= 1
            for j in range(n):
                row[edge_col[(t[0], t[1])] + j] += transport[i, j]
            rows.append(row)
            rhs.append(w2[i])

    system = Matrix(rows, ncols) if rows else Matrix.zeros(0, ncols)
    sol = solve_affine(system, rhs)
    if sol is None:
        return EquivalenceResult("inequivalent", reason="no intertwiner matches the omega classes")

    def as_matrix(flat: Sequence) -> Matrix:
        return Matrix((flat[i * n:(i + 1) * n] for i in range(n)), n)

    offset = as_matrix(sol.particular[: n * n])
    dirs_flat = [col[: n * n] for col in sol.kernel.columns()]
    if dirs_flat:
        dirs_basis = column_space_basis(Matrix.from_columns(dirs_flat, n * n)).columns()
    else:
        dirs_basis = []
    directions = [as_matrix(c) for c in dirs_basis]
    search = find_invertible_in_family(offset, directions, max_parameters=max_parameters)
    if search.status == "none":
        return EquivalenceResult("inequivalent", reason="every admissible intertwiner is singular")
    if search.status == "undecided":
        return EquivalenceResult(
            "undecided", reason=f"intertwiner family has {len(directions)} parameters (cap {max_parameters})"
        )
    E = family_member(offset, directions, search.coefficients)
    # d1 --nu1--> n1 --E--> n2 --nu2^-1--> d2
    eta = {v: inverse(nu2.eta_at(v, n)) @ E @ nu1.eta_at(v, n) for v in K.vertices}
    witness = equivalent_given_eta(d1, d2, eta)
    if witness is None or gauge_transform(d1, witness) != d2:
        raise AssertionError("constructed gauge does not reproduce the second descriptor")
    return EquivalenceResult("equivalent", witness=witness)


def induced_class(d: AlgebroidDescriptor) -> CohomologyClass:
    """Image of ``omega`` in ``H^2`` with coefficients in the induced ``H_1(g)`` system."""
    _require_valid(d)
    system = induced_system(d.g, d.edge_phi, d.base, 1)
    proj = h1_projection(d.g)
    rep = TwistedCochain(system, 2, {t: proj.apply(v) for t, v in d.omega2.items()})
    if not coboundary(rep).is_zero():
        raise AssertionError("projection of omega is not a twisted cocycle")
    return CohomologyClass(rep)


def pullback_descriptor(d: AlgebroidDescriptor, f: SimplicialMap) -> AlgebroidDescriptor:
    if f.target != d.base:
        raise ValueError("map does not land in the base of the descriptor")
    violation = f.validate()
    if violation is not None:
        raise ValueError(f"invalid simplicial map: {violation}")
    _require_valid(d)
    phis = {(a, b): d.system.transport(f(a), f(b)) for a, b in f.source.edges}
    pulled = AlgebroidDescriptor(d.g, f.source, phis)
    omega = pullback_cochain(d.omega, f, pulled.system)
    out = AlgebroidDescriptor(d.g, f.source, phis, omega.values)
    _require_valid(out)
    return out
