"""Finite simplicial complexes standing in for nerves of good covers.

Vertices are charts, edges double overlaps, triangles triple overlaps.  All
overlaps are assumed contractible; nothing here checks that.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence


@dataclass(frozen=True)
class Violation:
    kind: str
    location: tuple
    message: str

    def __str__(self) -> str:
        return f"{self.kind} at {list(self.location)}: {self.message}"


def _faces(simplex: tuple[int, ...]) -> Iterable[tuple[int, ...]]:
    for r in range(1, len(simplex)):
        yield from itertools.combinations(simplex, r)


@dataclass(frozen=True)
class SimplicialComplex:
    vertex_count: int
    simplices: frozenset

    @classmethod
    def from_maximal(cls, vertex_count: int, maximal: Iterable[Sequence[int]]) -> "SimplicialComplex":
        """Close a list of simplices under faces and add all vertices."""
        out = {(v,) for v in range(vertex_count)}
        for s in maximal:
            s = tuple(sorted(int(v) for v in s))
            if len(set(s)) != len(s):
                raise ValueError(f"simplex {list(s)} repeats a vertex")
            if s and (s[0] < 0 or s[-1] >= vertex_count):
                raise ValueError(f"simplex {list(s)} uses a vertex outside 0..{vertex_count - 1}")
            out.add(s)
            out.update(_faces(s))
        return cls(vertex_count, frozenset(out))

    def of_dim(self, k: int) -> tuple[tuple[int, ...], ...]:
        return tuple(sorted(s for s in self.simplices if len(s) == k + 1))

    @property
    def dimension(self) -> int:
        return max((len(s) - 1 for s in self.simplices), default=-1)

    @property
    def vertices(self) -> range:
        return range(self.vertex_count)

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return self.of_dim(1)

    @property
    def triangles(self) -> tuple[tuple[int, int, int], ...]:
        return self.of_dim(2)

    def counts(self) -> tuple[int, ...]:
        return tuple(len(self.of_dim(k)) for k in range(self.dimension + 1))

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * c for k, c in enumerate(self.counts()))

    def __contains__(self, simplex) -> bool:
        return tuple(simplex) in self.simplices

    def maximal_simplices(self) -> list[tuple[int, ...]]:
        out = []
        for s in sorted(self.simplices, key=lambda t: (len(t), t)):
            if not any(len(t) > len(s) and set(s) <= set(t) for t in self.simplices):
                out.append(s)
        return sorted(out)

    def validate(self) -> Optional[Violation]:
        """First defect found (ordering, vertex range, missing face), or None."""
        for s in sorted(self.simplices, key=lambda t: (len(t), t)):
            if not s:
                return Violation("empty_simplex", (), "empty tuple is not a simplex")
            if any(a >= b for a, b in zip(s, s[1:])):
                return Violation("unordered_simplex", s, "vertices must be strictly increasing")
            if s[0] < 0 or s[-1] >= self.vertex_count:
                return Violation("vertex_out_of_range", s, f"vertices must lie in 0..{self.vertex_count - 1}")
        for v in range(self.vertex_count):
            if (v,) not in self.simplices:
                return Violation("missing_vertex", (v,), "every vertex must be a simplex")
        for s in sorted(self.simplices, key=lambda t: (len(t), t)):
            for f in _faces(s):
                if f not in self.simplices:
                    return Violation("missing_face", f, f"face of {list(s)} is absent")
        return None

    def neighbors(self, v: int) -> list[int]:
        return sorted({b if a == v else a for a, b in self.edges if v in (a, b)})

    def spanning_tree(self, root: int = 0) -> dict[int, Optional[int]]:
        """BFS parent map from ``root``, visiting neighbours in increasing order."""
        parent: dict[int, Optional[int]] = {root: None}
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for w in self.neighbors(v):
                if w not in parent:
                    parent[w] = v
                    queue.append(w)
        return parent

    def is_connected(self) -> bool:
        return self.vertex_count == 0 or len(self.spanning_tree()) == self.vertex_count


def _circle3() -> SimplicialComplex:
    return SimplicialComplex.from_maximal(3, [(0, 1), (1, 2), (0, 2)])


def _sphere_tetra() -> SimplicialComplex:
    return SimplicialComplex.from_maximal(4, itertools.combinations(range(4), 3))


def _torus7() -> SimplicialComplex:
    # Moebius-Csaszar 7-vertex torus
    tris = []
    for i in range(7):
        tris.append((i, (i + 1) % 7, (i + 3) % 7))
        tris.append((i, (i + 2) % 7, (i + 3) % 7))
    return SimplicialComplex.from_maximal(7, tris)


BUILTIN_COMPLEXES = {
    "circle3": _circle3,
    "sphere_tetra": _sphere_tetra,
    "torus7": _torus7,
}


def builtin(name: str) -> SimplicialComplex:
    try:
        return BUILTIN_COMPLEXES[name]()
    except KeyError:
        raise KeyError(f"unknown builtin complex {name!r}; known: {sorted(BUILTIN_COMPLEXES)}") from None


@dataclass(frozen=True)
class SimplicialMap:
    source: SimplicialComplex
    target: SimplicialComplex
    vertex_map: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertex_map", tuple(int(v) for v in self.vertex_map))
        if len(self.vertex_map) != self.source.vertex_count:
            raise ValueError(
                f"vertex map has {len(self.vertex_map)} entries for {self.source.vertex_count} vertices"
            )

    @classmethod
    def identity(cls, K: SimplicialComplex) -> "SimplicialMap":
        return cls(K, K, tuple(range(K.vertex_count)))

    @classmethod
    def constant(cls, source: SimplicialComplex, target: SimplicialComplex, v: int) -> "SimplicialMap":
        return cls(source, target, (v,) * source.vertex_count)

    def __call__(self, v: int) -> int:
        return self.vertex_map[v]

    def image(self, simplex: Sequence[int]) -> tuple[int, ...]:
        """Image simplex, sorted and deduplicated."""
        return tuple(sorted({self.vertex_map[v] for v in simplex}))

    def compose(self, first: "SimplicialMap") -> "SimplicialMap":
        """``self o first``."""
        if first.target != self.source:
            raise ValueError("maps are not composable")
        return SimplicialMap(first.source, self.target, tuple(self.vertex_map[v] for v in first.vertex_map))

    def validate(self) -> Optional[Violation]:
        for v, w in enumerate(self.vertex_map):
            if not 0 <= w < self.target.vertex_count:
                return Violation("vertex_out_of_range", (v,), f"vertex {v} maps to {w}, outside the target")
        for s in sorted(self.source.simplices, key=lambda t: (len(t), t)):
            img = self.image(s)
            if img not in self.target.simplices:
                return Violation("not_simplicial", s, f"image {list(img)} is not a simplex of the target")
        return None


def validate_map(f: SimplicialMap) -> Optional[Violation]:
    return f.validate()
