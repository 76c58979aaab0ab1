"""Command-line driver.

Subcommands: ``check`` elaborates files in order against one growing
signature, ``eval`` prints the normal form of a definition, ``gen`` emits
semi-simplicial scaffolding, ``delta`` prints monotone-map tables.
Exit codes: 0 success, 1 diagnostics or generation failure, 2 usage
errors.  Diagnostics go to stderr; requested artifacts go to stdout.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Optional

from . import conv, core, parse, pretty
from .delta import enumerate_mono
from .diagnostics import Diagnostic
from .elab import Config, elaborate_signature
from .prelude import initial_signature
from .sstgen import GenPlan, LevelCapExceeded, gen_segal_scaffold, gen_spine, gen_sst


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="tt2",
        description="two-level type theory checker and scaffolding generator",
    )
    top.add_argument("--universes", type=int, default=3, metavar="L",
                     help="number of universe levels per layer (default 3)")
    top.add_argument("--collapse-fibrant-universes", action="store_true",
                     help="place every fibrant universe inside the first strict one")
    top.add_argument("--json-diagnostics", action="store_true",
                     help="emit one JSON object per diagnostic")
    top.add_argument("--include", action="append", default=[], metavar="DIR",
                     help="extra directory to resolve input files against")
    sub = top.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="elaborate files against a shared signature")
    p_check.add_argument("files", nargs="+", metavar="FILE")
    p_check.add_argument("--dump-core", action="store_true",
                         help="print the elaborated signature to stdout")

    p_eval = sub.add_parser("eval", help="print the normal form of a definition")
    p_eval.add_argument("file", metavar="FILE")
    p_eval.add_argument("--term", required=True, metavar="NAME")

    p_gen = sub.add_parser("gen", help="generate semi-simplicial scaffolding")
    gen_sub = p_gen.add_subparsers(dest="target", required=True)
    for target in ("sst", "spine", "segal"):
        p = gen_sub.add_parser(target)
        p.add_argument("--levels", type=int, required=True, metavar="N")
        p.add_argument("--out", metavar="FILE", help="output path (default stdout)")
        p.add_argument("--prefix", default="", metavar="P",
                       help="prefix for generated identifiers")
        if target in ("sst", "spine"):
            p.add_argument("--universe", type=int, default=0, metavar="I",
                           help="retarget generated families to U<I>")
            p.add_argument("--literal-spine", action="store_true",
                           help="also emit the spine with explicit equality components")

    p_delta = sub.add_parser("delta", help="monotone-map combinatorics")
    p_delta.add_argument("--faces", nargs=2, type=int, required=True,
                         metavar=("K", "N"), help="list all monotone [K] -> [N]")
    return top


def _color_enabled() -> bool:
    if os.environ.get("TT2_COLOR", "") == "0":
        return False
    return sys.stderr.isatty()


def _emit_diagnostic(diag: Diagnostic, source: str, filename: str, config: Config) -> None:
    if config.json_diagnostics:
        print(json.dumps(diag.to_json()), file=sys.stderr)
        return
    text = diag.render(source, filename)
    if config.color:
        text = text.replace(f"error[{diag.code}]", f"\x1b[31merror[{diag.code}]\x1b[0m", 1)
    print(text, file=sys.stderr)


def _resolve(path: str, include: list[str]) -> Optional[Path]:
    p = Path(path)
    if p.is_file():
        return p
    for base in include:
        candidate = Path(base) / path
        if candidate.is_file():
            return candidate
    return None


def _cmd_check(args, config: Config) -> int:
    sig = initial_signature(config)
    failures = 0
    postulates = 0
    for name in args.files:
        path = _resolve(name, args.include)
        if path is None:
            print(f"tt2: cannot read {name!r}", file=sys.stderr)
            return 2
        source = path.read_text(encoding="utf-8")
        try:
            decls = parse.parse_file(source)
        except Diagnostic as diag:
            _emit_diagnostic(diag, source, name, config)
            failures += 1
            continue
        postulates += sum(1 for d in decls if d.kind == "postulate")
        sig, diagnostics = elaborate_signature(decls, sig, config)
        for diag in diagnostics:
            _emit_diagnostic(diag, source, name, config)
        failures += len(diagnostics)
    checked = len(sig.entries)
    if postulates:
        print(f"tt2: {postulates} postulate(s) admitted", file=sys.stderr)
    if args.dump_core:
        for entry in sig.entries.values():
            head = f"{entry.kind.value} {entry.name} : {pretty.pretty(entry.ty, sig)}"
            if entry.body is not None:
                head += f" := {pretty.pretty(entry.body, sig)}"
            print(head)
    else:
        print(f"tt2: checked {checked} signature entries", file=sys.stderr)
    return 1 if failures else 0


def _cmd_eval(args, config: Config) -> int:
    path = _resolve(args.file, args.include)
    if path is None:
        print(f"tt2: cannot read {args.file!r}", file=sys.stderr)
        return 2
    source = path.read_text(encoding="utf-8")
    sig = initial_signature(config)
    try:
        decls = parse.parse_file(source)
    except Diagnostic as diag:
        _emit_diagnostic(diag, source, args.file, config)
        return 1
    sig, diagnostics = elaborate_signature(decls, sig, config)
    for diag in diagnostics:
        _emit_diagnostic(diag, source, args.file, config)
    if diagnostics:
        return 1
    entry = sig.lookup(args.term)
    if entry is None:
        print(f"tt2: no definition named {args.term!r}", file=sys.stderr)
        return 1
    if entry.body is None:
        print(f"tt2: {args.term!r} is a postulate and has no body", file=sys.stderr)
        return 1
    normal = conv.nf(sig, core.Context(), entry.body)
    print(pretty.pretty(normal, sig))
    return 0


def _cmd_gen(args) -> int:
    emit = frozenset({args.target})
    try:
        plan = GenPlan(
            levels=args.levels,
            emit=emit,
            names=args.prefix,
            universe=getattr(args, "universe", 0),
            literal_spine=getattr(args, "literal_spine", False),
        )
        if args.target == "sst":
            text = gen_sst(plan)
        elif args.target == "spine":
            text = gen_spine(plan)
        else:
            text = gen_segal_scaffold(plan)
    except (LevelCapExceeded, ValueError) as exc:
        print(f"tt2: {exc}", file=sys.stderr)
        return 1
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_delta(args) -> int:
    k, n = args.faces
    for mono in enumerate_mono(k, n):
        print(mono)
    return 0


def main(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        config = Config(
            universes=args.universes,
            collapse_fibrant_universes=args.collapse_fibrant_universes,
            json_diagnostics=args.json_diagnostics,
            color=_color_enabled(),
            include_paths=tuple(args.include),
        )
    except ValueError as exc:
        print(f"tt2: {exc}", file=sys.stderr)
        return 2
    if args.command == "check":
        return _cmd_check(args, config)
    if args.command == "eval":
        return _cmd_eval(args, config)
    if args.command == "gen":
        return _cmd_gen(args)
    if args.command == "delta":
        return _cmd_delta(args)
    return 2


def entry() -> None:
    sys.exit(main())
