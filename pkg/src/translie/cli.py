"""Command-line front end.

Every command writes a JSON report to stdout (sorted keys, exact rationals)
and a one-line summary to stderr.  Exit codes: 0 success / valid, 1 negative
verdict (invalid, inequivalent, failing residuals), 2 input error,
3 undecided.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import io
from .algebroid import (
    InvalidDescriptorError,
    NotAbelianError,
    classify_commutative,
    equivalent_abelian,
    induced_class,
    pullback_descriptor,
    validate,
)
from .lie import LieAlgebraError, ce_complex, homology_dims
from .local_model import check_eq1
from .local_system import LocalSystem, NotFlatError, cohomology_dims, holonomy

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_UNDECIDED = 0, 1, 2, 3


class _Result:
    def __init__(self, report: dict, summary: str, code: int = EXIT_OK):
        self.report = report
        self.summary = summary
        self.code = code


def _violations(vs) -> list:
    return [{"kind": v.kind, "location": list(v.location), "message": v.message} for v in vs]


def _load_descriptor(path):
    return io.parse_descriptor(io.load_json(path))


def _load_algebra(source: str):
    if source.startswith("builtin:"):
        return io.parse_lie_algebra(source, "algebra")
    return io.parse_lie_algebra(io.load_json(source), "algebra")


def cmd_check(args) -> _Result:
    d = _load_descriptor(args.descriptor)
    vs = validate(d)
    report = {"command": "check", "valid": not vs, "violations": _violations(vs)}
    if vs:
        return _Result(report, f"invalid: {len(vs)} violation(s); first: {vs[0]}", EXIT_NEGATIVE)
    return _Result(report, "valid")


def cmd_lie_homology(args) -> _Result:
    g = _load_algebra(args.algebra)
    dims = homology_dims(ce_complex(g))
    report = {"command": "lie-homology", "dim": g.dim, "homology_dims": dims}
    return _Result(report, " ".join(str(d) for d in dims))


def cmd_cohomology(args) -> _Result:
    if args.system:
        rho = io.parse_local_system(io.load_json(args.system))
    else:
        if not args.complex:
            raise io.InputError("give a local system file or --complex")
        rho = LocalSystem.trivial(io.parse_complex(args.complex, "--complex"), args.fiber_dim)
    violation = rho.check_flat()
    if violation is not None:
        report = {"command": "cohomology", "flat": False, "violations": _violations([violation])}
        return _Result(report, f"not flat: {violation}", EXIT_NEGATIVE)
    dims = cohomology_dims(rho, args.max_degree)
    report = {
        "command": "cohomology",
        "flat": True,
        "fiber_dim": rho.fiber_dim,
        "cohomology_dims": dims,
        "holonomy": [io.encode_matrix(m) for m in holonomy(rho, reduced=True)] if rho.base.is_connected() else None,
    }
    return _Result(report, " ".join(str(d) for d in dims))


def cmd_classify(args) -> _Result:
    d = _load_descriptor(args.descriptor)
    vs = validate(d)
    if vs:
        report = {"command": "classify", "valid": False, "violations": _violations(vs)}
        return _Result(report, f"invalid descriptor: {vs[0]}", EXIT_NEGATIVE)
    if d.g.is_abelian():
        r = classify_commutative(d)
        report = {
            "command": "classify",
            "mode": "commutative",
            "valid": True,
            "holonomy": [io.encode_matrix(m) for m in r.holonomy],
            "h2_dim": r.h2_dim,
            "class": "exact" if r.exact else "not exact",
            "class_coordinates": io.encode_vector(r.coordinates),
        }
        summary = f"{report['class']}, h2_dim {r.h2_dim}, coordinates {report['class_coordinates']}"
        return _Result(report, summary)
    c = induced_class(d)
    report = {
        "command": "classify",
        "mode": "induced",
        "notice": "g is not abelian; reporting the induced class in H^2 with H_1(g) coefficients",
        "valid": True,
        "fiber_dim": c.system.fiber_dim,
        "induced_system": io.dump_local_system(c.system)["transports"],
        "h2_dim": cohomology_dims(c.system, 2)[2],
        "class": "exact" if c.is_zero() else "not exact",
        "class_coordinates": io.encode_vector(c.coordinates()),
    }
    summary = f"induced class over fiber dim {c.system.fiber_dim}: {report['class']}"
    return _Result(report, summary)


def cmd_equiv(args) -> _Result:
    d1 = _load_descriptor(args.first)
    d2 = _load_descriptor(args.second)
    r = equivalent_abelian(d1, d2, max_parameters=args.search_cap)
    report = {"command": "equiv", "verdict": r.status, "reason": r.reason, "witness": None}
    if r.witness is not None:
        n = d1.g.dim
        report["witness"] = {
            "eta": [{"vertex": v, "matrix": io.encode_matrix(r.witness.eta_at(v, n))} for v in d1.base.vertices],
            "m": [{"edge": list(e), "value": io.encode_vector(r.witness.m_at(e, n))} for e in d1.base.edges],
        }
    code = {"equivalent": EXIT_OK, "inequivalent": EXIT_NEGATIVE, "undecided": EXIT_UNDECIDED}[r.status]
    return _Result(report, r.status + (f" ({r.reason})" if r.reason else ""), code)


def cmd_pullback(args) -> _Result:
    d = _load_descriptor(args.descriptor)
    f = io.parse_map(io.load_json(args.map), d.base)
    violation = f.validate()
    if violation is not None:
        raise io.InputError(f"map: {violation}")
    vs = validate(d)
    if vs:
        report = {"command": "pullback", "valid": False, "violations": _violations(vs)}
        return _Result(report, f"invalid descriptor: {vs[0]}", EXIT_NEGATIVE)
    pulled = pullback_descriptor(d, f)
    text = io.dumps(io.dump_descriptor(pulled))
    if args.out:
        Path(args.out).write_text(text)
    report = {
        "command": "pullback",
        "valid": True,
        "out": args.out,
        "descriptor": None if args.out else io.dump_descriptor(pulled),
    }
    return _Result(report, f"pulled back to {f.source.vertex_count} vertices" + (f", wrote {args.out}" if args.out else ""))


def _residual_entries(report) -> list:
    out = []
    for family, key, res in report.failures():
        out.append({"family": family, "index": list(key), "residual": [io.dump_poly(p) for p in res]})
    return out


def cmd_eq1_check(args) -> _Result:
    g, gauges = io.parse_local_gauges(io.load_json(args.gauges))
    results = []
    for name, A in gauges:
        rep = check_eq1(g, A)
        results.append({"name": name, "passed": rep.passed, "residuals": _residual_entries(rep)})
    failed = [r["name"] for r in results if not r["passed"]]
    report = {"command": "eq1-check", "gauges": results}
    if failed:
        return _Result(report, f"{len(failed)} of {len(results)} gauge(s) fail: {', '.join(failed)}", EXIT_NEGATIVE)
    return _Result(report, f"all {len(results)} gauge(s) pass")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="translie", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="validate a descriptor")
    p.add_argument("descriptor")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("lie-homology", help="Chevalley-Eilenberg homology dimensions")
    p.add_argument("algebra", help="Lie algebra JSON file or builtin:NAME")
    p.set_defaults(func=cmd_lie_homology)

    p = sub.add_parser("cohomology", help="twisted cohomology dimensions of a local system")
    p.add_argument("system", nargs="?", help="local system JSON file")
    p.add_argument("--complex", help="base complex (JSON file or builtin:NAME) for a trivial system")
    p.add_argument("--fiber-dim", type=int, default=1)
    p.add_argument("--max-degree", type=int, default=2)
    p.set_defaults(func=cmd_cohomology)

    p = sub.add_parser("classify", help="holonomy and omega class of a descriptor")
    p.add_argument("descriptor")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("equiv", help="decide gauge equivalence of two abelian descriptors")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--search-cap", type=int, default=4, help="max free parameters for the invertibility grid")
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("pullback", help="pull a descriptor back along a simplicial map")
    p.add_argument("descriptor")
    p.add_argument("map")
    p.add_argument("--out")
    p.set_defaults(func=cmd_pullback)

    p = sub.add_parser("eq1-check", help="residuals of the local gauge compatibility conditions")
    p.add_argument("gauges", help="JSON with lie_algebra and local_gauges")
    p.set_defaults(func=cmd_eq1_check)
    return parser


def _resolve_complex_arg(args) -> None:
    if getattr(args, "complex", None) and not args.complex.startswith("builtin:"):
        args.complex = io.load_json(args.complex)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _resolve_complex_arg(args)
        result = args.func(args)
    except (io.InputError, LieAlgebraError, NotAbelianError, NotFlatError, InvalidDescriptorError, ValueError) as e:
        sys.stdout.write(io.dumps({"command": args.command, "error": str(e)}))
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(io.dumps(result.report))
    print(result.summary, file=sys.stderr)
    return result.code


if __name__ == "__main__":
    sys.exit(main())
