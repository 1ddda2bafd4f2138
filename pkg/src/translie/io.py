"""JSON formats for algebras, complexes, local systems, descriptors and gauges.

Rationals are written as bare integers when integral and as ``"p/q"``
strings otherwise.  Complexes and Lie algebras may also be given by name
(``"builtin:torus7"``, ``"builtin:heisenberg"``).  Parse failures raise
:class:`InputError` naming the offending field.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional

from .algebroid import AlgebroidDescriptor
from .lie import LieAlgebra, LieAlgebraError, builtin_algebra
from .linalg import Matrix, as_fraction
from .local_model import GaugeMap, GOneForm, GSection, Poly
from .local_system import LocalSystem
from .nerve import SimplicialComplex, SimplicialMap, builtin


class InputError(ValueError):
    pass


def _fail(path: str, msg: str) -> InputError:
    return InputError(f"{path}: {msg}" if path else msg)


def encode_rational(x: Fraction):
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def encode_vector(v) -> list:
    return [encode_rational(a) for a in v]


def encode_matrix(m: Matrix) -> list:
    return [encode_vector(r) for r in m.rows]


def parse_rational(x: Any, path: str = "") -> Fraction:
    if isinstance(x, float):
        raise _fail(path, f"floating point value {x!r}; write rationals as integers or \"p/q\" strings")
    try:
        return as_fraction(x)
    except (ValueError, TypeError, ZeroDivisionError):
        raise _fail(path, f"invalid rational {x!r}") from None


def _list(x: Any, path: str) -> list:
    if not isinstance(x, list):
        raise _fail(path, f"expected a list, got {type(x).__name__}")
    return x


def _obj(x: Any, path: str) -> dict:
    if not isinstance(x, dict):
        raise _fail(path, f"expected an object, got {type(x).__name__}")
    return x


def _int(x: Any, path: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise _fail(path, f"expected an integer, got {x!r}")
    return x


def _field(obj: dict, key: str, path: str):
    if key not in obj:
        raise _fail(path, f"missing field {key!r}")
    return obj[key]


def parse_vector(x: Any, n: Optional[int], path: str) -> tuple:
    items = _list(x, path)
    if n is not None and len(items) != n:
        raise _fail(path, f"expected {n} entries, got {len(items)}")
    return tuple(parse_rational(a, f"{path}[{i}]") for i, a in enumerate(items))


def parse_matrix(x: Any, n: int, path: str) -> Matrix:
    rows = _list(x, path)
    if len(rows) != n:
        raise _fail(path, f"expected {n} rows, got {len(rows)}")
    return Matrix((parse_vector(r, n, f"{path}[{i}]") for i, r in enumerate(rows)), n)


def _builtin_name(x: Any) -> Optional[str]:
    if isinstance(x, str):
        return x[len("builtin:"):] if x.startswith("builtin:") else x
    return None


# -- Lie algebras -----------------------------------------------------------

def parse_lie_algebra(x: Any, path: str = "lie_algebra") -> LieAlgebra:
    name = _builtin_name(x)
    if name is not None:
        try:
            return builtin_algebra(name)
        except KeyError as e:
            raise _fail(path, str(e.args[0])) from None
    obj = _obj(x, path)
    n = _int(_field(obj, "dim", path), f"{path}.dim")
    brackets = {}
    for k, entry in enumerate(_list(obj.get("brackets", []), f"{path}.brackets")):
        p = f"{path}.brackets[{k}]"
        entry = _obj(entry, p)
        i = _int(_field(entry, "i", p), f"{p}.i")
        j = _int(_field(entry, "j", p), f"{p}.j")
        if not 0 <= i < j < n:
            raise _fail(p, f"need 0 <= i < j < {n}, got i={i}, j={j}")
        if (i, j) in brackets:
            raise _fail(p, f"bracket [e{i}, e{j}] given twice")
        brackets[(i, j)] = parse_vector(_field(entry, "value", p), n, f"{p}.value")
    try:
        return LieAlgebra.from_brackets(n, brackets, name=obj.get("name"))
    except LieAlgebraError as e:
        raise _fail(path, str(e)) from None


def dump_lie_algebra(g: LieAlgebra) -> dict:
    brackets = []
    for i in range(g.dim):
        for j in range(i + 1, g.dim):
            v = g.structure_constants[i][j]
            if any(v):
                brackets.append({"i": i, "j": j, "value": encode_vector(v)})
    out = {"dim": g.dim, "brackets": brackets}
    if g.name:
        out["name"] = g.name
    return out


# -- complexes and maps -----------------------------------------------------

def parse_complex(x: Any, path: str = "complex") -> SimplicialComplex:
    name = _builtin_name(x)
    if name is not None:
        try:
            return builtin(name)
        except KeyError as e:
            raise _fail(path, str(e.args[0])) from None
    obj = _obj(x, path)
    n = _int(_field(obj, "vertices", path), f"{path}.vertices")
    simplices = []
    for k, s in enumerate(_list(obj.get("simplices", []), f"{path}.simplices")):
        simplices.append([_int(v, f"{path}.simplices[{k}][{i}]") for i, v in enumerate(_list(s, f"{path}.simplices[{k}]"))])
    try:
        return SimplicialComplex.from_maximal(n, simplices)
    except ValueError as e:
        raise _fail(path, str(e)) from None


def dump_complex(K: SimplicialComplex) -> dict:
    return {"vertices": K.vertex_count, "simplices": [list(s) for s in K.maximal_simplices() if len(s) > 1]}


def parse_map(x: Any, target: SimplicialComplex, path: str = "map") -> SimplicialMap:
    obj = _obj(x, path)
    source = parse_complex(_field(obj, "source", path), f"{path}.source")
    if "target" in obj:
        declared = parse_complex(obj["target"], f"{path}.target")
        if declared != target:
            raise _fail(f"{path}.target", "does not match the base of the descriptor")
    vm = [_int(v, f"{path}.vertex_map[{i}]") for i, v in enumerate(_list(_field(obj, "vertex_map", path), f"{path}.vertex_map"))]
    if len(vm) != source.vertex_count:
        raise _fail(f"{path}.vertex_map", f"expected {source.vertex_count} entries, got {len(vm)}")
    return SimplicialMap(source, target, tuple(vm))


def _edge(x: Any, K: SimplicialComplex, k: int, path: str) -> tuple:
    s = tuple(_int(v, f"{path}[{i}]") for i, v in enumerate(_list(x, path)))
    if len(s) != k + 1 or tuple(sorted(s)) != s or s not in K.simplices:
        raise _fail(path, f"{list(s)} is not an increasing {k}-simplex of the complex")
    return s


# -- local systems ----------------------------------------------------------

def parse_local_system(x: Any, path: str = "") -> LocalSystem:
    obj = _obj(x, path)
    K = parse_complex(_field(obj, "complex", path), f"{path}.complex".lstrip("."))
    n = _int(_field(obj, "fiber_dim", path), f"{path}.fiber_dim".lstrip("."))
    transports = {}
    for k, entry in enumerate(_list(obj.get("transports", []), "transports")):
        p = f"transports[{k}]"
        entry = _obj(entry, p)
        e = _edge(_field(entry, "edge", p), K, 1, f"{p}.edge")
        transports[e] = parse_matrix(_field(entry, "matrix", p), n, f"{p}.matrix")
    try:
        return LocalSystem(K, n, transports)
    except ValueError as e:
        raise _fail("transports", str(e)) from None


def dump_local_system(rho: LocalSystem) -> dict:
    ident = Matrix.identity(rho.fiber_dim)
    return {
        "complex": dump_complex(rho.base),
        "fiber_dim": rho.fiber_dim,
        "transports": [
            {"edge": list(e), "matrix": encode_matrix(m)}
            for e, m in sorted(rho.transports.items())
            if m != ident
        ],
    }


# -- descriptors ------------------------------------------------------------

def parse_descriptor(x: Any) -> AlgebroidDescriptor:
    obj = _obj(x, "")
    g = parse_lie_algebra(_field(obj, "lie_algebra", ""), "lie_algebra")
    K = parse_complex(_field(obj, "complex", ""), "complex")
    n = g.dim
    phis, omegas = {}, {}
    for k, entry in enumerate(_list(obj.get("edge_phi", []), "edge_phi")):
        p = f"edge_phi[{k}]"
        entry = _obj(entry, p)
        e = _edge(_field(entry, "edge", p), K, 1, f"{p}.edge")
        if e in phis:
            raise _fail(p, f"edge {list(e)} given twice")
        phis[e] = parse_matrix(_field(entry, "matrix", p), n, f"{p}.matrix")
    for k, entry in enumerate(_list(obj.get("omega2", []), "omega2")):
        p = f"omega2[{k}]"
        entry = _obj(entry, p)
        t = _edge(_field(entry, "triangle", p), K, 2, f"{p}.triangle")
        if t in omegas:
            raise _fail(p, f"triangle {list(t)} given twice")
        omegas[t] = parse_vector(_field(entry, "value", p), n, f"{p}.value")
    return AlgebroidDescriptor(g, K, phis, omegas)


def dump_descriptor(d: AlgebroidDescriptor) -> dict:
    ident = Matrix.identity(d.g.dim)
    return {
        "lie_algebra": dump_lie_algebra(d.g),
        "complex": dump_complex(d.base),
        "edge_phi": [
            {"edge": list(e), "matrix": encode_matrix(m)} for e, m in sorted(d.edge_phi.items()) if m != ident
        ],
        "omega2": [
            {"triangle": list(t), "value": encode_vector(v)} for t, v in sorted(d.omega2.items()) if any(v)
        ],
    }


# -- polynomials and local gauges -------------------------------------------

def parse_poly(x: Any, nvars: int, path: str) -> Poly:
    terms = {}
    for k, term in enumerate(_list(x, path)):
        p = f"{path}[{k}]"
        term = _obj(term, p)
        exps = tuple(_int(e, f"{p}.exponents[{i}]") for i, e in enumerate(_list(_field(term, "exponents", p), f"{p}.exponents")))
        if len(exps) != nvars or any(e < 0 for e in exps):
            raise _fail(f"{p}.exponents", f"need {nvars} non-negative exponents")
        terms[exps] = terms.get(exps, 0) + parse_rational(_field(term, "coeff", p), f"{p}.coeff")
    return Poly(nvars, terms)


def dump_poly(p: Poly) -> list:
    return [{"exponents": list(e), "coeff": encode_rational(c)} for e, c in sorted(p.terms.items())]


def parse_gauge_map(x: Any, n: int, path: str) -> GaugeMap:
    obj = _obj(x, path)
    d = _int(_field(obj, "variables", path), f"{path}.variables")
    phi_rows = _list(_field(obj, "phi", path), f"{path}.phi")
    if len(phi_rows) != n:
        raise _fail(f"{path}.phi", f"expected {n} rows, got {len(phi_rows)}")
    phi = []
    for i, row in enumerate(phi_rows):
        row = _list(row, f"{path}.phi[{i}]")
        if len(row) != n:
            raise _fail(f"{path}.phi[{i}]", f"expected {n} entries, got {len(row)}")
        phi.append(tuple(parse_poly(c, d, f"{path}.phi[{i}][{j}]") for j, c in enumerate(row)))
    omega_comps = _list(obj.get("omega", [[[]] * n] * d), f"{path}.omega")
    if len(omega_comps) != d:
        raise _fail(f"{path}.omega", f"expected {d} components (one per variable), got {len(omega_comps)}")
    comps = []
    for i, comp in enumerate(omega_comps):
        comp = _list(comp, f"{path}.omega[{i}]")
        if len(comp) != n:
            raise _fail(f"{path}.omega[{i}]", f"expected {n} entries, got {len(comp)}")
        comps.append(GSection(tuple(parse_poly(c, d, f"{path}.omega[{i}][{j}]") for j, c in enumerate(comp))))
    return GaugeMap(tuple(phi), GOneForm(tuple(comps)))


def dump_gauge_map(A: GaugeMap) -> dict:
    return {
        "variables": A.nvars,
        "phi": [[dump_poly(p) for p in row] for row in A.phi],
        "omega": [[dump_poly(p) for p in w.components] for w in A.omega.components],
    }


def parse_local_gauges(x: Any) -> tuple[LieAlgebra, list[tuple[str, GaugeMap]]]:
    obj = _obj(x, "")
    g = parse_lie_algebra(_field(obj, "lie_algebra", ""), "lie_algebra")
    out = []
    for k, entry in enumerate(_list(_field(obj, "local_gauges", ""), "local_gauges")):
        p = f"local_gauges[{k}]"
        name = _obj(entry, p).get("name", str(k))
        out.append((str(name), parse_gauge_map(entry, g.dim, p)))
    return g, out


# -- files ------------------------------------------------------------------

def load_json(path) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise InputError(f"{path}: {e.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: line {e.lineno} column {e.colno}: {e.msg}") from None


def dumps(obj: Any) -> str:
    """Canonical JSON text: sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, separators=(",", ": ")) + "\n"
