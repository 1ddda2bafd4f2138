import random
from fractions import Fraction

import pytest
import sympy

from translie.algebroid import AlgebroidDescriptor
from translie.lie import LieMap, is_automorphism
from translie.linalg import Matrix, determinant, inverse
from translie.nerve import SimplicialComplex

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return random.Random(20260415)


def sphere3() -> SimplicialComplex:
    """Boundary of the 4-simplex: the only fixture with 3-simplices."""
    from itertools import combinations

    return SimplicialComplex.from_maximal(5, combinations(range(5), 4))


def rand_int_matrix(rng, n, lo=-2, hi=2):
    return Matrix([[rng.randint(lo, hi) for _ in range(n)] for _ in range(n)])


def rand_invertible(rng, n, lo=-2, hi=2):
    while True:
        m = rand_int_matrix(rng, n, lo, hi)
        if determinant(m) != 0:
            return m


def rand_heisenberg_auto(rng):
    while True:
        a, b, c, d = (rng.randint(-2, 2) for _ in range(4))
        det = a * d - b * c
        if det:
            x, y = rng.randint(-2, 2), rng.randint(-2, 2)
            return Matrix([[a, b, 0], [c, d, 0], [x, y, det]])


def sl2_conjugation(a):
    """Matrix of X -> a X a^-1 on sl2 in the basis (h, e, f)."""
    a = sympy.Matrix(a)
    ai = a.inv()
    basis = [sympy.Matrix([[1, 0], [0, -1]]), sympy.Matrix([[0, 1], [0, 0]]), sympy.Matrix([[0, 0], [1, 0]])]
    cols = []
    for x in basis:
        y = a * x * ai
        cols.append((y[0, 0], y[0, 1], y[1, 0]))
    return Matrix.from_columns([[Fraction(int(c.p), int(c.q)) for c in col] for col in cols], 3)


def rand_sl2_auto(rng):
    while True:
        a = [[rng.randint(-2, 2) for _ in range(2)] for _ in range(2)]
        if a[0][0] * a[1][1] - a[0][1] * a[1][0]:
            return sl2_conjugation(a)


def rand_automorphism(rng, g):
    if g.is_abelian():
        return rand_invertible(rng, g.dim)
    if g.name == "heisenberg":
        return rand_heisenberg_auto(rng)
    if g.name == "sl2":
        return rand_sl2_auto(rng)
    raise NotImplementedError(g.name)


def mat_power(m, k):
    out = Matrix.identity(m.nrows)
    base = m if k >= 0 else inverse(m)
    for _ in range(abs(k)):
        out = out @ base
    return out


def integer_cocycles(K):
    """Integer basis of ker(d_1) on untwisted 1-cochains (sympy)."""
    edges = K.edges
    tris = K.triangles
    eidx = {e: i for i, e in enumerate(edges)}
    d1 = sympy.zeros(max(len(tris), 1), len(edges))
    for r, (a, b, c) in enumerate(tris):
        d1[r, eidx[(b, c)]] += 1
        d1[r, eidx[(a, c)]] -= 1
        d1[r, eidx[(a, b)]] += 1
    out = []
    for v in d1.nullspace():
        den = sympy.ilcm(*[sympy.fraction(x)[1] for x in v])
        out.append([int(x * den) for x in v])
    return out


def rand_flat_transports(rng, K, g, nontrivial=True):
    """Flat automorphism transports: powers of one automorphism along an integer cocycle,
    then a random change of frame at every vertex."""
    M = rand_automorphism(rng, g)
    expo = [0] * len(K.edges)
    if nontrivial:
        cocycles = integer_cocycles(K)
        coeffs = [rng.choice([-1, 0, 1]) for _ in cocycles]
        for c, z in zip(coeffs, cocycles):
            expo = [e + c * zi for e, zi in zip(expo, z)]
        if any(abs(e) > 3 for e in expo):
            expo = [0] * len(K.edges)
    eta = {v: rand_automorphism(rng, g) for v in K.vertices}
    out = {}
    for (a, b), k in zip(K.edges, expo):
        out[(a, b)] = eta[b] @ mat_power(M, k) @ inverse(eta[a])
    assert all(is_automorphism(LieMap.endo(g, m)) for m in out.values())
    return out


def rand_vector(rng, n, lo=-3, hi=3):
    return tuple(Fraction(rng.randint(lo, hi)) for _ in range(n))


def rand_descriptor(rng, g, K, nontrivial=True, omega_density=0.5):
    """Random valid descriptor (omega drawn from the cocycles when K has 3-simplices)."""
    phis = rand_flat_transports(rng, g=g, K=K, nontrivial=nontrivial)
    d = AlgebroidDescriptor(g, K, phis)
    if not K.of_dim(3):
        omega = {t: rand_vector(rng, g.dim) for t in K.triangles if rng.random() < omega_density}
        return AlgebroidDescriptor(g, K, phis, omega)
    from translie.linalg import kernel_basis
    from translie.local_system import TwistedCochain, coboundary_matrix

    z = kernel_basis(coboundary_matrix(d.system, 2))
    flat = [Fraction(0)] * z.nrows
    for col in z.columns():
        c = rng.randint(-2, 2)
        flat = [a + c * b for a, b in zip(flat, col)]
    omega = TwistedCochain.from_vector(d.system, 2, flat)
    return AlgebroidDescriptor(g, K, phis, omega.values)
