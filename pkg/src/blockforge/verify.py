"""End-to-end verification harness: computed tables, fixtures, witness grid, partitions."""

from __future__ import annotations

import datetime as _dt
import hashlib
import os
import time
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .blocks import block_partition, has_nonprincipal_real_2block
from .chartab import compute_table, ingest_table
from .groups import group_create
from .partitions import alternating_witness
from .witnesses import NoWitness, certify_witness, construct, recheck_certificate


class FixtureIntegrityError(RuntimeError):
    pass


FIXTURE_TARGETS = [
    ("M11", "m11.ctx", False),
    ("M22", "m22.ctx", False),
    ("2.M22", "2m22.ctx", False),
    ("3.M22", "3m22.ctx", False),
    ("4.M22", "4m22.ctx", False),
    ("6.M22", "6m22.ctx", False),
    ("12.M22", "12m22.ctx", False),
    ("3.L3(7)", "sl3_7.ctx", True),
    ("3.U3(5)", "su3_5.ctx", True),
]

COMPUTED_TARGETS = [("SL", 2, 3), ("SU", 2, 3), ("SL", 3, 3), ("SU", 3, 3), ("GL", 2, 3), ("GL", 3, 3)]

TYPE_A_NO_WITNESS = {(2, 3), (2, -3), (3, 3), (3, -3)}
TYPE_A_B_FAILS = {(3, -5), (3, 7)}

GRIDS = {
    "small": {"ns": range(2, 5), "qs": (3, 5), "d_ns": (4,)},
    "full": {"ns": range(2, 7), "qs": (3, 5, 7, 9), "d_ns": (4, 5)},
}


def default_fixture_dir() -> Path:
    env = os.environ.get("BLOCKFORGE_FIXTURES")
    if env:
        return Path(env)
    return Path(str(resources.files("blockforge") / "data" / "fixtures"))


def read_manifest(directory: Path) -> dict[str, str]:
    path = Path(directory) / "MANIFEST"
    out = {}
    if not path.exists():
        return out
    for line in path.read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        digest, name = line.split()[:2]
        out[name] = digest
    return out


def sha256_file(path: Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def load_fixture(directory: Path, name: str):
    """Ingest a fixture after checking its MANIFEST digest; returns (table, digest)."""
    directory = Path(directory)
    path = directory / name
    if not path.exists():
        raise FileNotFoundError(path)
    digest = sha256_file(path)
    manifest = read_manifest(directory)
    if name not in manifest:
        raise FixtureIntegrityError(f"{name} is not listed in {directory / 'MANIFEST'}")
    if manifest[name] != digest:
        raise FixtureIntegrityError(f"sha256 mismatch for {name}")
    return ingest_table(path), digest


@dataclass
class Target:
    name: str
    kind: str
    expected: object
    observed: object = None
    status: str = "PENDING"
    runtime: float = 0.0
    detail: dict = field(default_factory=dict)

    def to_json(self, timings: bool) -> dict:
        out = {"name": self.name, "kind": self.kind, "expected": self.expected, "observed": self.observed,
               "status": self.status}
        if self.detail:
            out["detail"] = self.detail
        if timings:
            out["runtime_s"] = round(self.runtime, 3)
        return out


def _timed(target: Target, fn):
    t = time.perf_counter()
    try:
        fn(target)
    except FixtureIntegrityError:
        raise
    except FileNotFoundError as exc:
        target.status = "SKIPPED"
        target.observed = f"missing fixture {Path(str(exc)).name}"
    target.runtime = time.perf_counter() - t
    return target


def _block_summary(T):
    P = block_partition(T, 2)
    real, witness = has_nonprincipal_real_2block(T, P)
    return P, real, witness


def computed_targets() -> list[Target]:
    out = []
    for fam, n, q in COMPUTED_TARGETS:
        spec = group_create(fam, n, q)

        def run(t, spec=spec):
            T = compute_table(spec)
            P, real, _ = _block_summary(T)
            t.observed = real
            t.detail = {"classes": T.n_classes, "blocks": P.n_blocks,
                        "nonprincipal_defects": sorted(P.defects[i] for i in range(P.n_blocks) if i != P.principal)}
            ok = real is False
            if spec.family == "GL":
                cd = spec.matrix_group().conjugacy_data()
                semisimple_odd = sum(1 for o in cd.orders if o % 2 == 1 and o % spec.p != 0)
                t.detail["semisimple_odd_classes"] = semisimple_odd
                ok = ok and semisimple_odd == P.n_blocks
            t.status = "PASS" if ok else "FAIL"

        out.append(_timed(Target(spec.label, "computed-table", False), run))
    return out


def fixture_targets(directory: Path, digests: dict) -> list[Target]:
    out = []
    for label, name, expected in FIXTURE_TARGETS:
        def run(t, name=name, expected=expected):
            T, digest = load_fixture(directory, name)
            digests[name] = digest
            P, real, witness = _block_summary(T)
            t.observed = real
            t.detail = {"file": name, "blocks": P.n_blocks, "witness_block": witness}
            ok = real == expected
            if expected:
                ok = ok and P.n_blocks % 2 == 0
            t.status = "PASS" if ok else "FAIL"

        out.append(_timed(Target(label, "fixture-table", expected), run))
    return out


def _witness_target(kind, n, q, eps, expected):
    name = f"{kind} n={n} q={q}" + (f" eps={'+' if eps == 1 else '-'}" if kind in ("A", "D") else "")

    def run(t):
        w = construct(kind, n, q, eps)
        if isinstance(w, NoWitness):
            t.observed = "no-witness"
        else:
            cert = certify_witness(w)
            ok, problems = recheck_certificate(cert)
            c = cert["conditions"]
            t.observed = "".join(k if c[k]["pass"] else k.lower() for k in "ABC")
            if not ok:
                t.observed += " (recheck failed)"
                t.detail = {"problems": problems}
        t.status = "PASS" if t.observed == expected else "FAIL"

    return _timed(Target(name, "witness", expected), run)


def witness_targets(grid: str = "full") -> list[Target]:
    cfg = GRIDS[grid]
    out = []
    for n in cfg["ns"]:
        for q in cfg["qs"]:
            for eps in (1, -1):
                key = (n, eps * q)
                expected = "no-witness" if key in TYPE_A_NO_WITNESS else ("AbC" if key in TYPE_A_B_FAILS else "ABC")
                out.append(_witness_target("A", n, q, eps, expected))
    for kind in ("C", "B"):
        for n in cfg["ns"]:
            for q in cfg["qs"]:
                out.append(_witness_target(kind, n, q, 1, "ABC"))
    for n in cfg["d_ns"]:
        for q in cfg["qs"]:
            for eps in (1, -1):
                out.append(_witness_target("D", n, q, eps, "ABC"))
    return out


def partition_targets(lo: int = 8, hi: int = 40) -> list[Target]:
    out = []
    for n in range(lo, hi + 1):
        def run(t, n=n):
            w = alternating_witness(n)
            t.observed = w.holds
            t.detail = {"partition": list(w.partition.parts), "two_core": list(w.core.parts)}
            t.status = "PASS" if w.holds else "FAIL"

        out.append(_timed(Target(f"A{n}", "partition", True), run))
    return out


@dataclass
class VerificationReport:
    targets: list[Target]
    fixture_dir: str
    digests: dict
    grid: str
    timestamp: str | None = None

    @property
    def exit_code(self) -> int:
        return 0 if all(t.status == "PASS" for t in self.targets) else 1

    def to_json(self, timings: bool = True) -> dict:
        counts = {}
        for t in self.targets:
            counts[t.status] = counts.get(t.status, 0) + 1
        out = {
            "grid": self.grid,
            "fixtures": {"directory_name": Path(self.fixture_dir).name, "sha256": dict(sorted(self.digests.items()))},
            "targets": [t.to_json(timings) for t in self.targets],
            "summary": dict(sorted(counts.items())),
            "complete": not counts.get("SKIPPED"),
            "result": "PASS" if self.exit_code == 0 else "FAIL",
        }
        if timings and self.timestamp:
            out["timestamp"] = self.timestamp
        return out


def verify_theorem(grid: str = "full", fixtures: str | Path | None = None,
                   include=("computed", "fixtures", "witnesses", "partitions")) -> VerificationReport:
    if grid not in GRIDS:
        raise ValueError(f"unknown grid {grid!r}; expected one of {', '.join(GRIDS)}")
    directory = Path(fixtures) if fixtures else default_fixture_dir()
    digests: dict[str, str] = {}
    targets = []
    if "computed" in include:
        targets += computed_targets()
    if "fixtures" in include:
        targets += fixture_targets(directory, digests)
    if "witnesses" in include:
        targets += witness_targets(grid)
    if "partitions" in include:
        targets += partition_targets()
    stamp = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
    return VerificationReport(targets, str(directory), digests, grid, stamp)
