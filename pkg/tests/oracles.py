"""Independent reference computations for the test-suite.

Nothing here imports the library's linear algebra or cochain code: matrices
are assembled from raw data with sympy and ranked by sympy.
"""

from fractions import Fraction
from itertools import combinations

import sympy


def perm_sign(seq):
    """Sign of the permutation sorting ``seq`` (0 on repeats), by inversion count."""
    if len(set(seq)) != len(seq):
        return 0
    inversions = sum(1 for a, b in combinations(range(len(seq)), 2) if seq[a] > seq[b])
    return -1 if inversions % 2 else 1


def ce_boundary_matrices(n, consts):
    """Full CE boundary matrices d_k : Lambda^k -> Lambda^{k-1} for k = 1..n.

    ``consts[i][j]`` is a list of n numbers with [e_i, e_j] = sum_k consts[i][j][k] e_k.
    Wedges are expanded as formal words and sorted with ``perm_sign``.
    """
    bases = [list(combinations(range(n), k)) for k in range(n + 1)]
    mats = {}
    for k in range(1, n + 1):
        index = {t: i for i, t in enumerate(bases[k - 1])}
        m = sympy.zeros(len(bases[k - 1]), len(bases[k]))
        for col, t in enumerate(bases[k]):
            for p in range(k):
                for q in range(p + 1, k):
                    rest = [t[i] for i in range(k) if i not in (p, q)]
                    for r in range(n):
                        c = sympy.Rational(consts[t[p]][t[q]][r])
                        if c == 0:
                            continue
                        word = [r] + rest
                        s = perm_sign(word)
                        if s:
                            m[index[tuple(sorted(word))], col] += (-1) ** (p + q) * s * c
        mats[k] = m
    return bases, mats


def ce_homology_dims(n, consts):
    bases, mats = ce_boundary_matrices(n, consts)
    ranks = {k: mats[k].rank() for k in mats}
    ranks[0] = 0
    ranks[n + 1] = 0
    return [len(bases[k]) - ranks[k] - ranks[k + 1] for k in range(n + 1)]


def simplices_of(maximal, k):
    out = set()
    for s in maximal:
        s = sorted(s)
        out.update(combinations(s, k + 1))
    return sorted(out)


def twisted_coboundary(maximal, fiber_dim, transports, k):
    """Coboundary C^k -> C^{k+1} with values in the fibre over the last vertex.

    ``transports[(a, b)]`` (a < b) is a list-of-lists matrix; missing edges are
    identity.
    """
    n = fiber_dim
    src = simplices_of(maximal, k)
    dst = simplices_of(maximal, k + 1)
    col = {s: i for i, s in enumerate(src)}
    m = sympy.zeros(n * len(dst), n * len(src))
    eye = sympy.eye(n)
    for r, s in enumerate(dst):
        for i in range(k + 2):
            face = s[:i] + s[i + 1:]
            block = eye
            if i == k + 1:
                t = transports.get((s[k], s[k + 1]))
                block = sympy.Matrix(t) if t is not None else eye
            sign = (-1) ** i
            for a in range(n):
                for b in range(n):
                    m[r * n + a, col[face] * n + b] += sign * block[a, b]
    return m


def twisted_cohomology_dims(maximal, fiber_dim, transports, max_degree):
    dims = []
    for k in range(max_degree + 1):
        ck = fiber_dim * len(simplices_of(maximal, k))
        if ck == 0:
            dims.append(0)
            continue
        dk = twisted_coboundary(maximal, fiber_dim, transports, k)
        rk = dk.rank() if dk.rows else 0
        rprev = twisted_coboundary(maximal, fiber_dim, transports, k - 1).rank() if k > 0 else 0
        dims.append(ck - rk - rprev)
    return dims


def fundamental_cycle(triangles):
    """Rational 2-cycle spanning ker d_2 (assumed 1-dimensional), scaled so the first triangle has +1."""
    edges = sorted({e for t in triangles for e in combinations(t, 2)})
    eidx = {e: i for i, e in enumerate(edges)}
    d2 = sympy.zeros(len(edges), len(triangles))
    for j, (a, b, c) in enumerate(triangles):
        d2[eidx[(b, c)], j] += 1
        d2[eidx[(a, c)], j] -= 1
        d2[eidx[(a, b)], j] += 1
    null = d2.nullspace()
    assert len(null) == 1
    z = null[0] / null[0][0]
    return {t: Fraction(int(z[j].p), int(z[j].q)) for j, t in enumerate(triangles)}
