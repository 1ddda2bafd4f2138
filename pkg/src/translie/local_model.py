"""One chart of a trivial transitive Lie algebroid ``TU + (U x g)``.

Smooth functions on the chart are modelled by polynomials with rational
coefficients, so every identity below is checked exactly.  Sections are
pairs ``(X, u)`` of a vector field and a ``g``-valued function, with bracket

    [(X, u), (Y, v)] = ([X, Y], [u, v] + X(v) - Y(u)).

A gauge map ``(X, u) -> (X, phi(x) u + omega(X))`` preserves this bracket
exactly when

    phi [u1, u2] = [phi u1, phi u2]
    d omega(X1, X2) + [omega(X1), omega(X2)] = 0
    (d phi)(X) u = [phi u, omega(X)]

The middle condition uses the pointwise bracket of the values with no 1/2
factor; that is what the bracket above produces.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .lie import LieAlgebra
from .linalg import Matrix, as_fraction, is_invertible


class Poly:
    """Polynomial in ``nvars`` variables with rational coefficients."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[tuple[int, ...], object] = ()):
        clean = {}
        for exps, coeff in dict(terms).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars or any(e < 0 for e in exps):
                raise ValueError(f"bad exponent tuple {exps} for {nvars} variables")
            c = as_fraction(coeff)
            if c:
                clean[exps] = clean.get(exps, Fraction(0)) + c
                if not clean[exps]:
                    del clean[exps]
        self.nvars = nvars
        self.terms = clean

    @classmethod
    def zero(cls, nvars: int) -> "Poly":
        return cls(nvars)

    @classmethod
    def const(cls, nvars: int, c) -> "Poly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, nvars: int, i: int) -> "Poly":
        exps = [0] * nvars
        exps[i] = 1
        return cls(nvars, {tuple(exps): 1})

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")
            return other
        return Poly.const(self.nvars, other)

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + c
        return Poly(self.nvars, terms)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Poly":
        other = self._coerce(other)
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return Poly(self.nvars, terms)

    __rmul__ = __mul__

    def diff(self, i: int) -> "Poly":
        terms = {}
        for e, c in self.terms.items():
            if e[i]:
                lowered = list(e)
                lowered[i] -= 1
                terms[tuple(lowered)] = c * e[i]
        return Poly(self.nvars, terms)

    def evaluate(self, point: Sequence) -> Fraction:
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for x, k in zip(point, e):
                term *= as_fraction(x) ** k
            total += term
        return total

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Poly.const(self.nvars, other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.nvars, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            mono = "*".join(f"x{i}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k)
            parts.append(f"{self.terms[e]}" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)


PolyVector = tuple  # tuple[Poly, ...]


def _check_len(v: Sequence, n: int, what: str) -> None:
    if len(v) != n:
        raise ValueError(f"{what} has {len(v)} components, expected {n}")


def _vadd(u: PolyVector, v: PolyVector) -> PolyVector:
    return tuple(a + b for a, b in zip(u, v))


def _vsub(u: PolyVector, v: PolyVector) -> PolyVector:
    return tuple(a - b for a, b in zip(u, v))


def _zeros(nvars: int, n: int) -> PolyVector:
    return tuple(Poly.zero(nvars) for _ in range(n))


@dataclass(frozen=True)
class VectorField:
    """``X = sum_i components[i] * d/dx_i``."""

    components: PolyVector

    @property
    def nvars(self) -> int:
        return len(self.components)

    @classmethod
    def coordinate(cls, nvars: int, i: int) -> "VectorField":
        return cls(tuple(Poly.const(nvars, int(j == i)) for j in range(nvars)))

    @classmethod
    def zero(cls, nvars: int) -> "VectorField":
        return cls(_zeros(nvars, nvars))

    def derive(self, f: Poly) -> Poly:
        """Directional derivative ``X(f)``."""
        out = Poly.zero(self.nvars)
        for i, c in enumerate(self.components):
            if c:
                out = out + c * f.diff(i)
        return out

    def derive_all(self, fs: PolyVector) -> PolyVector:
        return tuple(self.derive(f) for f in fs)


@dataclass(frozen=True)
class GSection:
    """A ``g``-valued polynomial function, one polynomial per basis vector of ``g``."""

    components: PolyVector

    @classmethod
    def constant(cls, nvars: int, values: Sequence) -> "GSection":
        return cls(tuple(Poly.const(nvars, v) for v in values))

    @classmethod
    def zero(cls, nvars: int, n: int) -> "GSection":
        return cls(_zeros(nvars, n))

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)


@dataclass(frozen=True)
class LocalSection:
    horizontal: VectorField
    vertical: GSection


@dataclass(frozen=True)
class GOneForm:
    """``omega = sum_i components[i] dx_i`` with ``components[i]`` a GSection."""

    components: tuple

    def __call__(self, X: VectorField) -> GSection:
        _check_len(X.components, len(self.components), "vector field")
        n = len(self.components[0].components) if self.components else 0
        out = _zeros(X.nvars, n)
        for coeff, w in zip(X.components, self.components):
            if coeff:
                out = _vadd(out, tuple(coeff * p for p in w.components))
        return GSection(out)


@dataclass(frozen=True)
class GaugeMap:
    """Block map ``[[phi(x), omega], [0, 1]]`` on ``(u, X)``."""

    phi: tuple  # n x n nested tuple of Poly
    omega: GOneForm

    @property
    def nvars(self) -> int:
        return len(self.omega.components)

    @property
    def fiber_dim(self) -> int:
        return len(self.phi)

    def phi_apply(self, u: PolyVector) -> PolyVector:
        return tuple(
            sum((p * x for p, x in zip(row, u)), Poly.zero(self.nvars)) for row in self.phi
        )

    def phi_at_origin(self) -> Matrix:
        origin = (0,) * self.nvars
        return Matrix((tuple(p.evaluate(origin) for p in row) for row in self.phi), self.fiber_dim)

    def check_shape(self, g: LieAlgebra) -> None:
        _check_len(self.phi, g.dim, "phi")
        for row in self.phi:
            _check_len(row, g.dim, "phi row")
        for w in self.omega.components:
            _check_len(w.components, g.dim, "omega component")

    @classmethod
    def identity(cls, nvars: int, n: int) -> "GaugeMap":
        phi = tuple(tuple(Poly.const(nvars, int(i == j)) for j in range(n)) for i in range(n))
        return cls(phi, GOneForm(tuple(GSection.zero(nvars, n) for _ in range(nvars))))


def _pointwise_bracket(g: LieAlgebra, u: PolyVector, v: PolyVector) -> PolyVector:
    nvars = u[0].nvars if u else 0
    out = [Poly.zero(nvars) for _ in range(g.dim)]
    for i, ui in enumerate(u):
        if not ui:
            continue
        for j, vj in enumerate(v):
            if not vj:
                continue
            prod = ui * vj
            for k, c in enumerate(g.structure_constants[i][j]):
                if c:
                    out[k] = out[k] + prod * c
    return tuple(out)


def vf_bracket(X: VectorField, Y: VectorField) -> VectorField:
    """Commutator ``[X, Y]`` of polynomial vector fields."""
    if X.nvars != Y.nvars:
        raise ValueError(f"variable count mismatch: {X.nvars} vs {Y.nvars}")
    return VectorField(_vsub(X.derive_all(Y.components), Y.derive_all(X.components)))


def section_bracket(g: LieAlgebra, s1: LocalSection, s2: LocalSection) -> LocalSection:
    X, u = s1.horizontal, s1.vertical.components
    Y, v = s2.horizontal, s2.vertical.components
    _check_len(u, g.dim, "first section")
    _check_len(v, g.dim, "second section")
    vertical = _vsub(_vadd(_pointwise_bracket(g, u, v), X.derive_all(v)), Y.derive_all(u))
    return LocalSection(vf_bracket(X, Y), GSection(vertical))


def apply_gauge(A: GaugeMap, s: LocalSection) -> LocalSection:
    u = s.vertical.components
    _check_len(u, A.fiber_dim, "section")
    vertical = _vadd(A.phi_apply(u), A.omega(s.horizontal).components)
    return LocalSection(s.horizontal, GSection(vertical))


def exterior_derivative_eval(omega: GOneForm, X: VectorField, Y: VectorField) -> GSection:
    """``d omega(X, Y) = X(omega(Y)) - Y(omega(X)) - omega([X, Y])``."""
    if X.nvars != len(omega.components) or Y.nvars != len(omega.components):
        raise ValueError("vector fields and form live on charts of different dimension")
    a = X.derive_all(omega(Y).components)
    b = Y.derive_all(omega(X).components)
    c = omega(vf_bracket(X, Y)).components
    return GSection(_vsub(_vsub(a, b), c))


@dataclass
class Eq1Report:
    """Residual polynomials of the three gauge compatibility conditions.

    ``homomorphism[(a, b)]`` is ``phi[e_a, e_b] - [phi e_a, phi e_b]``;
    ``maurer_cartan[(i, j)]`` is ``d omega(d_i, d_j) + [omega(d_i), omega(d_j)]``;
    ``derivative[(i, a)]`` is ``(d_i phi) e_a - [phi e_a, omega(d_i)]``.
    """

    homomorphism: dict = field(default_factory=dict)
    maurer_cartan: dict = field(default_factory=dict)
    derivative: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not (self.failures())

    def failures(self) -> list[tuple[str, tuple, PolyVector]]:
        out = []
        for name in ("homomorphism", "maurer_cartan", "derivative"):
            for key, res in sorted(getattr(self, name).items()):
                if any(p for p in res):
                    out.append((name, key, res))
        return out


def check_eq1(g: LieAlgebra, A: GaugeMap) -> Eq1Report:
    A.check_shape(g)
    d, n = A.nvars, g.dim
    report = Eq1Report()
    basis = [GSection.constant(d, g.basis_vector(a)).components for a in range(n)]
    images = [A.phi_apply(e) for e in basis]
    for a in range(n):
        for b in range(a + 1, n):
            lhs = A.phi_apply(GSection.constant(d, g.structure_constants[a][b]).components)
            report.homomorphism[(a, b)] = _vsub(lhs, _pointwise_bracket(g, images[a], images[b]))
    coords = [VectorField.coordinate(d, i) for i in range(d)]
    for i in range(d):
        for j in range(i + 1, d):
            dw = exterior_derivative_eval(A.omega, coords[i], coords[j]).components
            br = _pointwise_bracket(g, A.omega(coords[i]).components, A.omega(coords[j]).components)
            report.maurer_cartan[(i, j)] = _vadd(dw, br)
    for i in range(d):
        w_i = A.omega(coords[i]).components
        dphi = tuple(tuple(p.diff(i) for p in row) for row in A.phi)
        for a in range(n):
            lhs = tuple(sum((p * x for p, x in zip(row, basis[a])), Poly.zero(d)) for row in dphi)
            report.derivative[(i, a)] = _vsub(lhs, _pointwise_bracket(g, images[a], w_i))
    return report


def spanning_pairs(nvars: int, n: int) -> list[tuple[LocalSection, LocalSection]]:
    """All pairs from ``{(d_i, 0)} + {(0, e_a)}``.

    Every term of the homomorphism defect is function-bilinear, so testing
    these pairs is equivalent to testing all sections.
    """
    gens = [LocalSection(VectorField.coordinate(nvars, i), GSection.zero(nvars, n)) for i in range(nvars)]
    for a in range(n):
        e = [0] * n
        e[a] = 1
        gens.append(LocalSection(VectorField.zero(nvars), GSection.constant(nvars, e)))
    return [(gens[p], gens[q]) for p in range(len(gens)) for q in range(p + 1, len(gens))]


def bracket_defect(g: LieAlgebra, A: GaugeMap, s1: LocalSection, s2: LocalSection) -> LocalSection:
    """``A[s1, s2] - [A s1, A s2]`` (horizontal part is always zero)."""
    lhs = apply_gauge(A, section_bracket(g, s1, s2))
    rhs = section_bracket(g, apply_gauge(A, s1), apply_gauge(A, s2))
    return LocalSection(
        VectorField(_vsub(lhs.horizontal.components, rhs.horizontal.components)),
        GSection(_vsub(lhs.vertical.components, rhs.vertical.components)),
    )


def is_bracket_homomorphism(
    g: LieAlgebra, A: GaugeMap, trials: Iterable[tuple[LocalSection, LocalSection]]
) -> bool:
    A.check_shape(g)
    for s1, s2 in trials:
        defect = bracket_defect(g, A, s1, s2)
        if any(p for p in defect.horizontal.components) or any(p for p in defect.vertical.components):
            return False
    return True


def phi_invertible_at_origin(A: GaugeMap) -> bool:
    return is_invertible(A.phi_at_origin())
