"""Command-line interface.

Exit codes: 0 success, 1 verification or certification failure, 2 usage or
input error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

from . import __version__
from .blocks import block_partition
from .chartab import TableError, compute_table, format_ctx
from .cyclotomic import CyclotomicError
from .groups import GroupError, group_create
from .partitions import Partition, PartitionError, alternating_witness, in_principal_2block_Sn, is_self_conjugate, two_core
from .verify import FixtureIntegrityError, default_fixture_dir, load_fixture, read_manifest, sha256_file, verify_theorem
from .witnesses import NoWitness, WitnessError, certify_witness, construct, dumps, recheck_certificate

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


_SPEC = re.compile(r"^(?P<fam>[A-Za-z]+[+-]?)(?P<n1>\d+)?(?::(?P<n2>\d+))?:(?P<q>-?\d+)(?::(?P<eps>[+-]1?))?$")


def parse_group_spec(text: str):
    """FAMILY:n:q[:eps], also FAMILYn:q (e.g. SL2:3); a negative q or eps '-' selects the unitary form."""
    m = _SPEC.match(text.strip())
    if not m or (m["n1"] is None) == (m["n2"] is None):
        raise UsageError(f"cannot parse group spec {text!r}; expected FAMILY:n:q[:eps], e.g. Sp:2:3")
    fam = m["fam"]
    n = int(m["n1"] or m["n2"])
    q = int(m["q"])
    eps = -1 if (m["eps"] or "+").startswith("-") else 1
    if q < 0:
        q, eps = -q, -eps
    if eps == -1:
        swap = {"GL": "GU", "SL": "SU"}
        if fam.upper() not in swap:
            raise UsageError(f"eps = -1 only applies to GL and SL, not {fam}")
        fam = swap[fam.upper()]
    try:
        return group_create(fam, n, q)
    except GroupError as exc:
        raise UsageError(str(exc)) from None


def _parse_eps(token: str | None) -> int:
    if token is None:
        return 1
    if token in ("+", "+1", "1"):
        return 1
    if token in ("-", "-1"):
        return -1
    raise UsageError(f"eps must be + or -, got {token!r}")


def _resolve_table_path(source: str) -> Path:
    p = Path(source)
    if p.exists():
        return p
    alt = default_fixture_dir() / p.name
    if alt.exists():
        return alt
    raise UsageError(f"table file {source} not found")


def _load_source(args):
    if args.compute:
        return compute_table(parse_group_spec(args.compute))
    if not args.source:
        raise UsageError("give a table file or --compute SPEC")
    path = _resolve_table_path(args.source)
    if path.name in read_manifest(path.parent):
        T, _ = load_fixture(path.parent, path.name)
        return T
    from .chartab import ingest_table
    return ingest_table(path)


def cmd_blocks(args) -> int:
    T = _load_source(args)
    P = block_partition(T, args.prime, args.factor_index)
    report = P.to_json()
    report["n_classes"] = T.n_classes
    report["order"] = T.order
    others = [i for i in report["real_blocks"] if i != P.principal]
    report["nonprincipal_real"] = others
    if args.json:
        print(json.dumps(report, indent=2, sort_keys=True))
        return EXIT_OK
    print(f"{T.label}: order {T.order}, {T.n_classes} classes, {P.n_blocks} {args.prime}-block(s)")
    for i, b in enumerate(P.blocks):
        if args.real and not P.real[i]:
            continue
        tags = []
        if i == P.principal:
            tags.append("principal")
        tags.append("real" if P.real[i] else "not real")
        degrees = [T.degree(c) for c in b]
        print(f"  block {i}: defect {P.defects[i]}, {len(b)} character(s), degrees {degrees} [{', '.join(tags)}]")
    if args.real:
        print(f"non-principal real blocks: {others if others else 'none'}")
    return EXIT_OK


def cmd_table(args) -> int:
    T = _load_source(args)
    text = format_ctx(T)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_witness(args) -> int:
    eps = _parse_eps(args.eps)
    try:
        w = construct(args.type, args.n, args.q, eps)
    except (WitnessError, GroupError) as exc:
        raise UsageError(str(exc)) from None
    cert = certify_witness(w)
    text = dumps(cert)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)
    if isinstance(w, NoWitness):
        return EXIT_OK if args.expect_none else EXIT_FAIL
    if args.expect_none:
        return EXIT_FAIL
    required = args.require.upper()
    passed = all(cert["conditions"][k]["pass"] for k in required)
    ok, problems = recheck_certificate(cert)
    for msg in problems:
        print(f"recheck: {msg}", file=sys.stderr)
    return EXIT_OK if passed and ok else EXIT_FAIL


def cmd_recheck(args) -> int:
    try:
        cert = json.loads(Path(args.certificate).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read certificate: {exc}") from None
    ok, problems = recheck_certificate(cert)
    for msg in problems:
        print(msg)
    print("certificate OK" if ok else "certificate REJECTED")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify(args) -> int:
    if args.fixtures and not Path(args.fixtures).is_dir():
        raise UsageError(f"fixture directory {args.fixtures} does not exist")
    report = verify_theorem(args.grid, args.fixtures)
    data = report.to_json(timings=not args.no_timestamp)
    if args.json:
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        for t in data["targets"]:
            extra = f"  ({t['runtime_s']:.2f}s)" if "runtime_s" in t else ""
            print(f"{t['status']:8s} {t['kind']:15s} {t['name']:24s} expected={t['expected']} observed={t['observed']}{extra}")
        print(f"result: {data['result']}  {data['summary']}" + ("" if data["complete"] else "  [incomplete]"))
    return report.exit_code


def cmd_partition(args) -> int:
    if args.witness is not None:
        w = alternating_witness(args.witness)
        print(json.dumps(w.to_json(), sort_keys=True))
        return EXIT_OK if w.holds else EXIT_FAIL
    if args.parts is None:
        raise UsageError("give a partition or --witness n")
    lam = Partition.parse(args.parts)
    out = {"partition": list(lam.parts), "n": lam.n, "two_core": list(two_core(lam).parts),
           "self_conjugate": is_self_conjugate(lam), "in_principal_2block": in_principal_2block_Sn(lam),
           "transpose": list(lam.transpose().parts)}
    print(json.dumps(out, sort_keys=True))
    return EXIT_OK


def cmd_fixtures(args) -> int:
    directory = Path(args.fixtures) if args.fixtures else default_fixture_dir()
    manifest = read_manifest(directory)
    bad = 0
    for name, digest in manifest.items():
        path = directory / name
        if not path.exists():
            status = "MISSING"
            bad = max(bad, EXIT_FAIL)
        elif sha256_file(path) != digest:
            status = "MISMATCH"
            bad = EXIT_USAGE
        else:
            status = "OK"
        print(f"{status:8s} {name}")
    return bad


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="blockforge", description="Real 2-blocks: tables, blocks, witnesses.")
    ap.add_argument("--version", action="version", version=f"blockforge {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    b = sub.add_parser("blocks", help="block partition of a character table")
    b.add_argument("source", nargs="?", help="CTX table file")
    b.add_argument("--compute", metavar="SPEC", help="compute the table of a group, e.g. SL2:3 or Sp:2:3")
    b.add_argument("--prime", type=int, default=2)
    b.add_argument("--factor-index", type=int, default=0, help="which prime ideal above the prime to use")
    b.add_argument("--real", action="store_true", help="show only real blocks")
    b.add_argument("--json", action="store_true")
    b.set_defaults(func=cmd_blocks)

    t = sub.add_parser("table", help="print a character table in CTX format")
    t.add_argument("source", nargs="?")
    t.add_argument("--compute", metavar="SPEC")
    t.add_argument("--out")
    t.set_defaults(func=cmd_table)

    w = sub.add_parser("witness", help="construct and certify a witness element")
    w.add_argument("type", choices=["A", "B", "C", "D", "a", "b", "c", "d"])
    w.add_argument("n", type=int)
    w.add_argument("q", type=int)
    w.add_argument("eps", nargs="?", help="+ or - (types A and D)")
    w.add_argument("--expect-none", action="store_true", help="succeed only if no witness exists")
    w.add_argument("--require", default="ABC", help="conditions that must pass (default ABC)")
    w.add_argument("--out")
    w.set_defaults(func=cmd_witness)

    r = sub.add_parser("recheck", help="re-validate a certificate JSON file")
    r.add_argument("certificate")
    r.set_defaults(func=cmd_recheck)

    v = sub.add_parser("verify", help="run the end-to-end verification harness")
    v.add_argument("--grid", choices=["small", "full"], default="full")
    v.add_argument("--fixtures", help="fixture directory (default: $BLOCKFORGE_FIXTURES or bundled)")
    v.add_argument("--no-timestamp", action="store_true", help="omit timestamp and timings")
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_verify)

    p = sub.add_parser("partition", help="2-core and block data of a partition")
    p.add_argument("parts", nargs="?", help="comma-separated parts, either orientation")
    p.add_argument("--witness", type=int, metavar="N", help="alternating-group witness for A_N")
    p.set_defaults(func=cmd_partition)

    f = sub.add_parser("fixtures", help="check fixture digests against the MANIFEST")
    f.add_argument("--fixtures")
    f.set_defaults(func=cmd_fixtures)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except FixtureIntegrityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, TableError, CyclotomicError, PartitionError, GroupError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
