"""Run configuration, pipeline orchestration and the JSON report format."""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field, replace
from typing import Any, Callable

from .checks import FAIL, PASS, SKIPPED, CheckResult, jsonable, skipped
from .exactmat import ExactMatrix
from .gfspace import DEFAULT_SIZE_LIMIT, FieldSpec
from .operators import OperatorSet, build_A, build_operators, verify_operators
from .poset import Geometry, build_geometry, verify_poset
from .qpolyverify import (QPolyCertificate, verify_dual_adjacency, verify_proof_replay,
                          verify_tridiagonal_relations)
from .splitbasis import (SpanOracle, build_families, build_split_decomposition,
                         verify_actions, verify_annihilation, verify_split_bases,
                         verify_split_decompositions)
from .tmodule import decompose, lowering_raising, verify_modules

SCHEMA_VERSION = "1"

GROUPS = ("poset", "operators", "split", "actions", "decomp", "qpoly", "tridiag", "modules")
ALIASES = {"section4": "split", "section5": "operators", "section6": "actions",
           "section7": "decomp"}


class UnknownCheck(ValueError):
    pass


def normalize_checks(names) -> tuple[str, ...]:
    """Expand "all" and aliases; result is in pipeline order."""
    wanted = set()
    for raw in names:
        name = raw.strip().lower()
        if not name:
            continue
        if name == "all":
            wanted.update(GROUPS)
        elif name in GROUPS:
            wanted.add(name)
        elif name in ALIASES:
            wanted.add(ALIASES[name])
        else:
            raise UnknownCheck(f"unknown check group {raw!r}; choose from "
                               f"{', '.join(GROUPS + tuple(ALIASES) + ('all',))}")
    return tuple(g for g in GROUPS if g in wanted)


@dataclass(frozen=True)
class RunConfig:
    p: int
    N: int
    e: int = 1
    modulus: tuple[int, ...] | None = None
    size_limit: int = DEFAULT_SIZE_LIMIT
    checks: tuple[str, ...] = GROUPS
    format: str = "human"
    dump_targets: tuple[str, ...] = ()
    inject_fault: tuple[int, ...] | None = None  # () selects the default entry

    def __post_init__(self) -> None:
        if self.N < 1:
            raise ValueError(f"N must be at least 1, got {self.N}")
        if self.format not in ("human", "json"):
            raise ValueError(f"unknown format {self.format!r}")
        if self.inject_fault is not None and len(self.inject_fault) not in (0, 2):
            raise ValueError("a fault position is ROW,COL")
        object.__setattr__(self, "checks", normalize_checks(self.checks))

    @property
    def q(self) -> int:
        return self.p ** self.e

    def field(self) -> FieldSpec:
        return FieldSpec(self.p, self.e, self.modulus)

    def to_json(self) -> dict[str, Any]:
        out = asdict(self)
        out["q"] = self.q
        out["checks"] = list(self.checks)
        out["modulus"] = list(self.modulus) if self.modulus else None
        out["dump_targets"] = list(self.dump_targets)
        out["inject_fault"] = None if self.inject_fault is None else list(self.inject_fault)
        del out["format"]
        return out


@dataclass
class VerificationReport:
    config: RunConfig
    checks: list[CheckResult] = field(default_factory=list)
    details: dict[str, Any] = field(default_factory=dict)
    wall_time: float = 0.0
    group_times: dict[str, float] = field(default_factory=dict)  # includes construction

    def counts(self) -> dict[str, int]:
        return {s: sum(1 for c in self.checks if c.status == s) for s in (PASS, FAIL, SKIPPED)}

    @property
    def passed(self) -> bool:
        return not any(c.status == FAIL for c in self.checks)

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if c.status == FAIL]


def default_fault(g: Geometry) -> tuple[int, int]:
    """The entry A[y][0] for the first one-dimensional vertex y."""
    return g.level(1)[0], g.zero_index


def inject_fault(A: ExactMatrix, row: int, col: int) -> ExactMatrix:
    """Flip one entry: nonzero becomes 0 and 0 becomes 1."""
    if not (0 <= row < A.rows and 0 <= col < A.cols):
        raise ValueError(f"fault position ({row}, {col}) outside a {A.rows}x{A.cols} matrix")
    return A.with_entry(row, col, 0 if A[row, col] != 0 else 1)


class _Pipeline:
    """Lazily built shared objects; a construction error is remembered."""

    def __init__(self, config: RunConfig):
        self.config = config
        self._cache: dict[str, Any] = {}
        self._errors: dict[str, str] = {}

    def get(self, name: str, build: Callable[[], Any]):
        if name in self._errors:
            raise _Unavailable(self._errors[name])
        if name not in self._cache:
            try:
                self._cache[name] = build()
            except _Unavailable:
                raise
            except Exception as exc:  # construction failure makes dependents skipped
                self._errors[name] = f"{name} could not be built: {type(exc).__name__}: {exc}"
                raise _Unavailable(self._errors[name]) from exc
        return self._cache[name]

    def geometry(self) -> Geometry:
        cfg = self.config
        return self.get("geometry", lambda: build_geometry(cfg.field(), cfg.N, cfg.size_limit))

    def ops(self) -> OperatorSet:
        def build():
            g = self.geometry()
            A = None
            if self.config.inject_fault is not None:
                A = inject_fault(build_A(g), *self.config.inject_fault)
            return build_operators(g, A)
        return self.get("operators", build)

    def families(self):
        return self.get("families", lambda: build_families(self.geometry()))

    def decomps(self):
        def build():
            ops, fams = self.ops(), self.families()
            return {v: build_split_decomposition(ops, f) for v, f in fams.items()}
        return self.get("decompositions", build)

    def oracle(self) -> SpanOracle:
        return self.get("oracle", lambda: SpanOracle(self.ops()))

    def lowering_raising(self):
        return self.get("lowering_raising", lambda: lowering_raising(self.ops()))

    def modules(self):
        return self.get("modules", lambda: decompose(self.ops(), self.lowering_raising()))


class _Unavailable(Exception):
    pass


def _group_claims() -> dict[str, str]:
    return {
        "poset": "subspace poset structure",
        "operators": "operators and spectrum",
        "split": "split bases",
        "actions": "actions on split bases",
        "decomp": "split decompositions",
        "qpoly": "dual adjacency certificate",
        "tridiag": "tridiagonal relations",
        "modules": "irreducible module decomposition",
    }


def run(config: RunConfig) -> VerificationReport:
    """Execute the requested groups in dependency order.

    Size-limit and field errors propagate to the caller before any check
    runs; later construction errors turn the affected groups into skipped
    records, and unexpected exceptions inside a group become failed records.
    """
    start = time.perf_counter()
    g = build_geometry(config.field(), config.N, config.size_limit)
    if config.inject_fault == ():
        config = replace(config, inject_fault=default_fault(g))
    if config.inject_fault is not None:
        row, col = config.inject_fault
        if not (0 <= row < g.size and 0 <= col < g.size):
            raise ValueError(f"fault position ({row}, {col}) outside the {g.size} vertices")
    report = VerificationReport(config)
    pipe = _Pipeline(config)
    pipe._cache["geometry"] = g
    cert = QPolyCertificate()

    def poset():
        return verify_poset(pipe.geometry())

    def operators():
        return verify_operators(pipe.ops())

    def split():
        return verify_split_bases(pipe.ops(), pipe.families())

    def actions():
        ops, fams = pipe.ops(), pipe.families()
        out = []
        for fam in fams.values():
            out += verify_actions(ops, fam)
        out.append(verify_annihilation(ops, fams))
        return out

    def decomp():
        return verify_split_decompositions(pipe.ops(), pipe.families(), pipe.decomps(),
                                           pipe.oracle())

    def qpoly():
        ops = pipe.ops()
        out = verify_dual_adjacency(ops, cert)
        out += verify_proof_replay(ops, pipe.decomps(), pipe.oracle(), cert)
        report.details["certificate"] = cert
        return out

    def tridiag():
        out = verify_tridiagonal_relations(pipe.ops(), cert)
        report.details["certificate"] = cert
        return out

    def modules():
        summary = pipe.modules()
        report.details["decomposition"] = summary
        return verify_modules(pipe.ops(), summary, pipe.lowering_raising())

    runners = {"poset": poset, "operators": operators, "split": split, "actions": actions,
               "decomp": decomp, "qpoly": qpoly, "tridiag": tridiag, "modules": modules}
    claims = _group_claims()
    for group in config.checks:
        t0 = time.perf_counter()
        try:
            report.checks += runners[group]()
        except _Unavailable as exc:
            report.checks.append(skipped(f"{group}.prerequisites", claims[group], str(exc)))
        except Exception as exc:
            report.checks.append(CheckResult(
                f"{group}.error", claims[group], FAIL,
                {"exception": type(exc).__name__, "message": str(exc)},
                time.perf_counter() - t0))
        report.group_times[group] = time.perf_counter() - t0
    report.wall_time = time.perf_counter() - start
    return report


# -- serialization -------------------------------------------------------------------


def report_to_dict(report: VerificationReport) -> dict[str, Any]:
    counts = report.counts()
    details = {}
    if "certificate" in report.details:
        details["certificate"] = report.details["certificate"].to_json()
    if "decomposition" in report.details:
        details["decomposition"] = report.details["decomposition"].to_json()
    return {
        "schema_version": SCHEMA_VERSION,
        "config": report.config.to_json(),
        "checks": [
            {"id": c.id, "claim": c.claim, "status": c.status,
             "witness": jsonable(c.witness), "wall_time": round(c.wall_time, 6)}
            for c in report.checks],
        "summary": {"total": len(report.checks), "passed": counts[PASS],
                    "failed": counts[FAIL], "skipped": counts[SKIPPED],
                    "overall_pass": report.passed,
                    "wall_time": round(report.wall_time, 6)},
        "details": details,
    }


def emit_json(report: VerificationReport) -> bytes:
    return (json.dumps(report_to_dict(report), indent=2) + "\n").encode("utf-8")


def parse_report(data: bytes | str) -> dict[str, Any]:
    """Load an emitted report; raises ValueError on a foreign schema."""
    doc = json.loads(data)
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema version {doc.get('schema_version')!r}")
    for key in ("config", "checks", "summary"):
        if key not in doc:
            raise ValueError(f"report lacks {key!r}")
    return doc


def render_human(doc: dict[str, Any]) -> str:
    cfg, summary = doc["config"], doc["summary"]
    lines = [f"L_{cfg['N']}({cfg['q']})  groups: {', '.join(cfg['checks']) or '(none)'}"]
    if cfg.get("inject_fault"):
        lines.append(f"fault injected at A{tuple(cfg['inject_fault'])}")
    for c in doc["checks"]:
        lines.append(f"  [{c['status'].upper():7}] {c['id']:<40} {c['wall_time']:8.3f}s  "
                     f"{c['claim']}")
        if c["witness"] and c["status"] != PASS:
            lines.append(f"            witness: {json.dumps(c['witness'])}")
    verdict = "PASS" if summary["overall_pass"] else "FAIL"
    lines.append(f"{verdict}: {summary['passed']} passed, {summary['failed']} failed, "
                 f"{summary['skipped']} skipped in {summary['wall_time']:.2f}s")
    return "\n".join(lines) + "\n"


def strip_timing(doc: Any) -> Any:
    """Copy of a report document with every wall_time field removed."""
    if isinstance(doc, dict):
        return {k: strip_timing(v) for k, v in doc.items() if k != "wall_time"}
    if isinstance(doc, list):
        return [strip_timing(v) for v in doc]
    return doc
