"""Command-line front end.

Exit codes: 0 success, 1 property violation or a relation that is not
realisable under the requested axiom, 2 usage or parse errors.
"""

from __future__ import annotations

import argparse
import sys

from .constructions import nontransitive_demo, realise_t0, realise_t1
from .enumeration import build_catalog, write_catalog
from .errors import (
    DiagClosureError,
    GroundSetFiniteError,
    InvalidAddressError,
    NotATopologyError,
    NotDisjointError,
    NotRealisableError,
    SpecSyntaxError,
)
from .finite_topology import FiniteTopology, cl_delta, is_t0, is_t1, is_t2, parse_topology, tau_r
from .relations import FinitePartition, parse_point, parse_spec
from .symbolic_sets import ResidueClassSet
from .verify import verify_construction


def _usage_error(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return 2


def _parse_bounds(text: str) -> tuple[int, int]:
    parts = text.split(",")
    if len(parts) != 2 or not all(p.strip().isdigit() for p in parts):
        raise SpecSyntaxError(f"bad bounds (expected 'B,E'): {text!r}")
    return int(parts[0]), int(parts[1])


def _realise(spec, axiom):
    return realise_t1(spec) if axiom == "t1" else realise_t0(spec)


def _cmd_realise(args) -> int:
    try:
        spec = parse_spec(args.spec)
        bounds = _parse_bounds(args.bounds)
    except (SpecSyntaxError, GroundSetFiniteError) as exc:
        return _usage_error(str(exc))
    try:
        c = _realise(spec, args.axiom)
    except NotRealisableError as exc:
        print(exc)
        return 1
    report = verify_construction(c, spec, n_pairs=args.pairs, bounds=bounds, seed=args.seed)
    if args.json_lines:
        print(report.render_json_line())
    else:
        print(f"construction: {c.kind}")
        print(report.render_text())
        print(f"result: {'PASS' if report.passed() else 'FAIL'}")
    return 0 if report.passed() else 1


def _cmd_separable(args) -> int:
    try:
        spec = parse_spec(args.spec)
        p = parse_point(args.p)
        q = parse_point(args.q)
    except (SpecSyntaxError, GroundSetFiniteError, InvalidAddressError) as exc:
        return _usage_error(str(exc))
    try:
        c = _realise(spec, args.axiom)
    except NotRealisableError as exc:
        print(exc)
        return 1
    try:
        sep = c.separable(p, q)
    except InvalidAddressError as exc:
        return _usage_error(str(exc))
    if sep:
        print("separable")
        print(c.witness(p, q).render())
    else:
        print("inseparable")
    return 0


def _cmd_enumerate(args) -> int:
    if args.n > 7 and not args.force:
        return _usage_error(f"n={args.n} is above the soft limit 7; pass --force to proceed")
    catalog = build_catalog(args.n, t0_only=args.t0, up_to_iso=args.iso, workers=args.workers)
    if args.out:
        write_catalog(catalog, args.out)
    print(f"topologies: {catalog.total_topologies}")
    print(f"distinct closures: {len(catalog.records)}")
    print(f"non-transitive closures: {sum(1 for r in catalog.records if not r.transitive)}")
    return 0


def _parse_designated(items):
    if items is None:
        return None
    out = []
    for item in items:
        item = item.strip()
        if not item:
            continue
        parts = item.split(",")
        if len(parts) != 2 or not all(p.strip().isdigit() for p in parts):
            raise SpecSyntaxError(f"bad designated set (expected 'offset,modulus'): {item!r}")
        out.append(ResidueClassSet(int(parts[0]), int(parts[1])))
    return out


def _cmd_example(args) -> int:
    try:
        designated = _parse_designated(args.d)
        report = nontransitive_demo(designated)
    except (SpecSyntaxError, NotDisjointError, ValueError) as exc:
        return _usage_error(str(exc))
    print(report.render())
    return 0 if report.ok else 1


def _parse_partition_literal(text: str) -> FinitePartition:
    blocks = []
    points = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            raise SpecSyntaxError(f"empty block in partition literal: {text!r}")
        block = []
        for item in chunk.split(","):
            item = item.strip()
            if not item.isdigit():
                raise SpecSyntaxError(f"bad point in partition literal: {item!r}")
            block.append(int(item))
        blocks.append(block)
        points.extend(block)
    n = max(points) + 1
    try:
        return FinitePartition(n, blocks)
    except ValueError as exc:
        raise SpecSyntaxError(str(exc)) from exc


def _cmd_finite(args) -> int:
    try:
        if args.opens:
            with open(args.opens, "r", encoding="utf-8") as fh:
                topology = parse_topology(fh.read())
        else:
            topology = tau_r(_parse_partition_literal(args.partition))
    except (OSError, SpecSyntaxError, NotATopologyError) as exc:
        return _usage_error(str(exc))
    if args.show in ("closure", "all"):
        closure = cl_delta(topology)
        print("closure:")
        for i in range(closure.n):
            print("".join("1" if closure.has(i, j) else "0" for j in range(closure.n)))
    if args.show in ("axioms", "all"):
        flags = (is_t0(topology), is_t1(topology), is_t2(topology))
        print("axioms: " + " ".join(f"T{i}={'true' if f else 'false'}" for i, f in enumerate(flags)))
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="diagclosure",
        description="Diagonal closures of topologies: realisation oracles, finite catalogs, demos.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("realise", help="build a realisation and verify it by sampling")
    p.add_argument("--spec", required=True, help="partition spec, e.g. 'singletons=omega;fin=[3];inf=0'")
    p.add_argument("--axiom", choices=("t0", "t1"), default="t1")
    p.add_argument("--pairs", type=int, default=10_000)
    p.add_argument("--bounds", default="50,50", help="max block,element index sampled")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json-lines", action="store_true")
    p.set_defaults(func=_cmd_realise)

    p = sub.add_parser("separable", help="decide one point pair and print the certificate")
    p.add_argument("--spec", required=True)
    p.add_argument("--axiom", choices=("t0", "t1"), default="t1")
    p.add_argument("-p", required=True, help="first point, e.g. i:0:5")
    p.add_argument("-q", required=True, help="second point")
    p.set_defaults(func=_cmd_separable)

    p = sub.add_parser("enumerate", help="classify diagonal closures over all topologies on n points")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t0", action="store_true", help="restrict to T0 topologies")
    p.add_argument("--iso", action="store_true", help="canonicalise closures up to point permutation")
    p.add_argument("--out", help="write the catalog TSV here")
    p.add_argument("--force", action="store_true")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser("example", help="worked demonstrations")
    p.add_argument("demo", choices=("nontransitive",))
    p.add_argument(
        "--d",
        action="append",
        help="designated residue class 'offset,modulus'; repeatable; pass --d '' for none",
    )
    p.set_defaults(func=_cmd_example)

    p = sub.add_parser("finite", help="diagonal closure and axioms of a finite topology")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--opens", help="file with one open set per line ('-' for the empty set)")
    group.add_argument("--partition", help="partition literal like '0,1;2' (block topology)")
    p.add_argument("--show", choices=("closure", "axioms", "all"), default="all")
    p.set_defaults(func=_cmd_finite)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DiagClosureError as exc:
        return _usage_error(str(exc))


if __name__ == "__main__":
    sys.exit(main())
