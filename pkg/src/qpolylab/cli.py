"""Command line: ``qpolylab verify | dump | report``.

Exit status is 0 only when every executed check passed; 1 when a check
failed; 2 for configuration errors (bad field, size limit, unknown group).
"""

from __future__ import annotations

import argparse
import io
import json
import sys
from pathlib import Path
from typing import Sequence, TextIO

from .gfspace import DEFAULT_SIZE_LIMIT, FieldError, SizeLimitExceeded, is_prime
from .operators import build_operators
from .poset import build_geometry, write_edge_list
from .report import (GROUPS, ALIASES, RunConfig, UnknownCheck, emit_json, parse_report,
                     render_human, report_to_dict, run)
from .tmodule import lowering_raising

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.replace(" ", "").split(",") if x != "")
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma separated integers: {text!r}") from exc


def _fault(text: str) -> tuple[int, ...]:
    pos = _int_list(text)
    if len(pos) != 2:
        raise argparse.ArgumentTypeError("fault position must be ROW,COL")
    return pos


def _split_q(q: int, e: int | None) -> tuple[int, int]:
    """Accept either --q p with --ext-degree e, or --q p^e directly."""
    if e is not None:
        return q, e
    if is_prime(q):
        return q, 1
    for p in range(2, q + 1):
        if q % p == 0 and is_prime(p):
            k, m = 0, q
            while m % p == 0:
                m //= p
                k += 1
            if m == 1:
                return p, k
            break
    raise FieldError(f"q = {q} is not a prime power")


def _add_field_args(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--q", type=int, required=True,
                    help="field characteristic p (or the prime power p^e)")
    sp.add_argument("--ext-degree", type=int, default=None,
                    help="extension degree e (default 1, or inferred from --q)")
    sp.add_argument("--modulus", type=_int_list, default=None,
                    help="monic irreducible modulus, constant term first, e.g. 1,1,1")
    sp.add_argument("--N", type=int, required=True, help="ambient dimension")
    sp.add_argument("--size-limit", type=int, default=DEFAULT_SIZE_LIMIT,
                    help=f"refuse geometries with more vertices (default {DEFAULT_SIZE_LIMIT})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qpolylab",
        description="Exact verification of the Q-polynomial structure of the subspace "
                    "lattice L_N(q).")
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="run verification groups and print a report")
    _add_field_args(verify)
    verify.add_argument("--checks", default="all",
                        help="comma separated groups: " + ", ".join(GROUPS + ("all",))
                        + " (aliases: " + ", ".join(ALIASES) + ")")
    verify.add_argument("--format", choices=("human", "json"), default="human")
    verify.add_argument("--inject-fault", nargs="?", const=(), default=None, type=_fault,
                        metavar="ROW,COL",
                        help="flip one entry of A before verifying (default entry: "
                             "first one-dimensional vertex, zero vertex)")
    verify.add_argument("--output", type=Path, default=None, help="write the report here")

    dump = sub.add_parser("dump", help="print matrices in the exact text format")
    _add_field_args(dump)
    dump.add_argument("targets", nargs="+",
                      help="A, Astar, S, E<i>, Estar<i>, L, R or hasse (edge list)")
    dump.add_argument("--out-dir", type=Path, default=None,
                      help="write <target>.txt files instead of printing")

    rep = sub.add_parser("report", help="render a saved JSON report")
    rep.add_argument("path", type=Path)
    rep.add_argument("--format", choices=("human", "json"), default="human")
    return parser


def _config(args, **extra) -> RunConfig:
    p, e = _split_q(args.q, args.ext_degree)
    modulus = tuple(args.modulus) if args.modulus else None
    return RunConfig(p=p, e=e, modulus=modulus, N=args.N, size_limit=args.size_limit, **extra)


def _error(exc: Exception, fmt: str, err: TextIO, out: TextIO) -> int:
    if fmt == "json":
        out.write(json.dumps({"error": {"type": type(exc).__name__, "message": str(exc)}})
                  + "\n")
    err.write(f"error: {exc}\n")
    return EXIT_ERROR


def cmd_verify(args, out: TextIO, err: TextIO) -> int:
    try:
        config = _config(args, checks=tuple(args.checks.split(",")), format=args.format,
                         inject_fault=args.inject_fault)
        report = run(config)
    except (FieldError, SizeLimitExceeded, UnknownCheck, ValueError) as exc:
        return _error(exc, args.format, err, out)
    if args.format == "json":
        text = emit_json(report).decode("utf-8")
    else:
        text = render_human(report_to_dict(report))
    if args.output is not None:
        args.output.write_text(text, encoding="utf-8")
    out.write(text)
    return EXIT_OK if report.passed else EXIT_FAIL


def dump_targets(config: RunConfig, targets: Sequence[str]) -> dict[str, str]:
    """Render each target to text; unknown names raise ValueError."""
    g = build_geometry(config.field(), config.N, config.size_limit)
    ops = None
    rendered: dict[str, str] = {}
    for name in targets:
        buf = io.StringIO()
        if name == "hasse":
            write_edge_list(g, buf)
        else:
            if ops is None:
                ops = build_operators(g)
            mats = ops.named()
            if name in ("L", "R"):
                low, high = lowering_raising(ops)
                mats.update({"L": low, "R": high})
            if name not in mats:
                raise ValueError(f"unknown dump target {name!r}; choose from "
                                 f"{', '.join(list(mats) + ['L', 'R', 'hasse'])}")
            mats[name].dump(buf)
        rendered[name] = buf.getvalue()
    return rendered


def cmd_dump(args, out: TextIO, err: TextIO) -> int:
    try:
        config = _config(args, checks=(), dump_targets=tuple(args.targets))
        rendered = dump_targets(config, args.targets)
    except (FieldError, SizeLimitExceeded, ValueError) as exc:
        return _error(exc, "human", err, out)
    if args.out_dir is not None:
        args.out_dir.mkdir(parents=True, exist_ok=True)
        for name, text in rendered.items():
            (args.out_dir / f"{name}.txt").write_text(text, encoding="utf-8")
    elif len(rendered) == 1:
        out.write(next(iter(rendered.values())))
    else:
        for name, text in rendered.items():
            out.write(f"# {name}\n{text}")
    return EXIT_OK


def cmd_report(args, out: TextIO, err: TextIO) -> int:
    try:
        doc = parse_report(args.path.read_bytes())
    except (OSError, ValueError) as exc:
        return _error(exc, "human", err, out)
    if args.format == "json":
        out.write(json.dumps(doc, indent=2) + "\n")
    else:
        out.write(render_human(doc))
    return EXIT_OK if doc["summary"]["overall_pass"] else EXIT_FAIL


def main(argv: Sequence[str] | None = None, out: TextIO | None = None,
         err: TextIO | None = None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    args = build_parser().parse_args(argv)
    handler = {"verify": cmd_verify, "dump": cmd_dump, "report": cmd_report}[args.command]
    return handler(args, out, err)


if __name__ == "__main__":
    sys.exit(main())
