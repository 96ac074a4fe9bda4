"""Command line: ``dimerfuk report|render|catalog``.

Exit codes: 0 all verdicts pass, 1 some verdict fails, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import catalog
from .dimer import DimerFormatError, parse_dimer, validate
from .quiver import dual_quiver
from .render import MissingPositionsError, model_svg, quiver_dot, surface_svg
from .report import build_report, dumps

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def load_model(source: str):
    """A catalog name or a path to a ``.dimer`` file."""
    if source in catalog.names():
        return catalog.get(source).model(), source
    try:
        text = Path(source).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {source}: {exc.strerror or exc}") from exc
    try:
        return parse_dimer(text), source
    except DimerFormatError as exc:
        raise InputError(f"{source}: {exc}") from exc


def cmd_report(args, out) -> int:
    model, name = load_model(args.model)
    try:
        rep = build_report(
            model,
            name,
            max_rewrite_steps=args.max_rewrite_steps,
            relation_bound=args.relation_bound,
            matching=args.matching,
            timings=args.timings,
        )
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    out.write(dumps(rep))
    return EXIT_OK if rep["verdict"] == "pass" else EXIT_FAIL


def cmd_render(args, out) -> int:
    model, name = load_model(args.model)
    bad = validate(model)
    if bad:
        raise InputError("; ".join(v.message for v in bad))
    try:
        if args.target == "quiver-dot":
            text = quiver_dot(dual_quiver(model), Path(name).stem)
        elif args.target == "model-svg":
            text = model_svg(model)
        else:
            text = surface_svg(model)
    except MissingPositionsError as exc:
        raise InputError(str(exc)) from exc
    if args.output:
        target = Path(args.output)
        if not target.is_absolute() and os.environ.get("DIMERFUK_OUTPUT_DIR"):
            target = Path(os.environ["DIMERFUK_OUTPUT_DIR"]) / target
        target.write_text(text)
    else:
        out.write(text)
    return EXIT_OK


def cmd_catalog(args, out) -> int:
    rows = []
    status = EXIT_OK
    for entry in catalog.entries():
        d = catalog.drift(entry)
        if d:
            status = EXIT_FAIL
        rows.append({"name": entry.name, "note": entry.note, "stats": entry.expected, "drift": d})
    if args.json:
        out.write(json.dumps(rows, indent=2) + "\n")
    else:
        for r in rows:
            s = r["stats"]
            flag = "ok" if not r["drift"] else "DRIFT " + json.dumps(r["drift"])
            out.write(
                f"{r['name']:<5} B={s['black']} W={s['white']} E={s['edges']} F={s['faces']} "
                f"matchings={s['matchings']} internal={s['internal']}  {flag}\n"
            )
    return status


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dimerfuk", description="Dimer models, their A-infinity categories and vanishing cycles.")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("report", help="run the full pipeline and print a JSON report")
    r.add_argument("model", help="catalog name or .dimer path")
    r.add_argument("--max-rewrite-steps", type=int, default=10_000)
    r.add_argument("--relation-bound", type=int, default=None, help="longest sequence for the relation check")
    r.add_argument("--matching", type=int, default=None, help="only this internal matching (index in the matching list)")
    r.add_argument("--timings", action="store_true", help="include wall-clock timings (output is then not reproducible)")
    r.set_defaults(func=cmd_report)

    d = sub.add_parser("render", help="write DOT or SVG")
    d.add_argument("model")
    d.add_argument("target", choices=["quiver-dot", "model-svg", "surface-svg"])
    d.add_argument("-o", "--output", help="file to write (default stdout)")
    d.set_defaults(func=cmd_render)

    c = sub.add_parser("catalog", help="list bundled models and re-check their statistics")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_catalog)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = make_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
