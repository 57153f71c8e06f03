"""Command-line interface.

Exit status: 0 on success, 1 when inputs cannot be read, parsed or
validated, 2 on bad arguments.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path

from onto2cdm import __version__
from onto2cdm.diagnostics import has_errors
from onto2cdm.dl import Datatype, normalize_name
from onto2cdm.emit import BadModelFile, atomic_write, dumps_model, read_model, to_diagram_text
from onto2cdm.engine import TransformOptions, transform
from onto2cdm.evaluate import diff, metrics
from onto2cdm.model import stats
from onto2cdm.ontology import parse_ontology, validate

_DATATYPE_HINTS = (
    ("int", Datatype.INTEGER),
    ("float", Datatype.FLOAT),
    ("real", Datatype.FLOAT),
    ("double", Datatype.FLOAT),
    ("bool", Datatype.BOOLEAN),
    ("date", Datatype.DATE),
)


def guess_datatype(name: str) -> Datatype:
    """Datatype for a class that stands in for a value type, judged by its name."""
    low = name.casefold()
    for hint, dt in _DATATYPE_HINTS:
        if hint in low:
            return dt
    return Datatype.STRING


def _split_list(text: str) -> list:
    return [part.strip() for part in text.split(",") if part.strip()]


def parse_datatype_classes(text: str) -> dict:
    """``Name[=xsd:type],...`` into a class-name to datatype map."""
    out = {}
    for item in _split_list(text):
        name, _, dt = item.partition("=")
        name = normalize_name(name)
        out[name] = Datatype.parse(dt) if dt else guess_datatype(name)
    return out


def _report(diags, source=None):
    for d in diags:
        prefix = f"{source}:" if source and d.line else ""
        print(f"{prefix}{d}", file=sys.stderr)


def _cmd_transform(args, parser) -> int:
    try:
        seeds = [normalize_name(s) for s in _split_list(args.seeds)]
    except ValueError:
        seeds = []
    if not seeds:
        parser.error("--seeds needs at least one concept name")
    try:
        dt_classes = parse_datatype_classes(args.datatype_classes or "")
    except ValueError as exc:
        parser.error(f"--datatype-classes: {exc}")

    try:
        text = Path(args.ontology).read_bytes()
    except OSError as exc:
        print(f"error: cannot read {args.ontology}: {exc.strerror}", file=sys.stderr)
        return 1
    onto, diags = parse_ontology(text)
    diags += validate(onto)
    _report(diags, args.ontology)
    if has_errors(diags):
        return 1

    opts = TransformOptions(tuple(seeds), not args.no_expand_subconcepts, args.max_iterations, dt_classes)
    model, tdiags = transform(onto, opts)
    _report(tdiags)
    if has_errors(tdiags):
        return 1

    atomic_write(args.out, dumps_model(model))
    if args.diagram:
        atomic_write(args.diagram, to_diagram_text(model))
    print(stats(model), file=sys.stderr)
    return 0


def _load(path):
    try:
        return read_model(path)
    except OSError as exc:
        print(f"error: cannot read {path}: {exc.strerror}", file=sys.stderr)
    except BadModelFile as exc:
        print(f"error {BadModelFile.code}: {path}: {exc}", file=sys.stderr)
    return None


def _save_figure(report, path):
    from onto2cdm.plotting import plot_report

    path = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.stem}.", suffix=path.suffix or ".png", dir=path.parent)
    os.close(fd)
    try:
        plot_report(report, tmp, title="generated vs gold")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _cmd_eval(args, parser) -> int:
    generated = _load(args.generated)
    gold = _load(args.gold)
    if generated is None or gold is None:
        return 1
    report = metrics(diff(generated, gold, args.strict_multiplicity))
    sys.stdout.write(report.to_text())
    if args.report:
        doc = report.to_dict()
        doc["strict_multiplicity"] = args.strict_multiplicity
        atomic_write(args.report, json.dumps(doc, indent=2, sort_keys=True) + "\n")
    if args.figure:
        _save_figure(report, args.figure)
    return 0


def _cmd_stats(args, parser) -> int:
    model = _load(args.model)
    if model is None:
        return 1
    print(stats(model))
    return 0


def _cmd_emit(args, parser) -> int:
    model = _load(args.model)
    if model is None:
        return 1
    text = to_diagram_text(model)
    if args.out:
        atomic_write(args.out, text)
    else:
        sys.stdout.write(text)
    return 0


def _positive(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="onto2cdm", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("transform", help="derive a conceptual model from an ontology")
    p.add_argument("--ontology", required=True, metavar="PATH")
    p.add_argument("--seeds", required=True, metavar="NAME[,NAME...]")
    p.add_argument("--out", required=True, metavar="PATH")
    p.add_argument("--no-expand-subconcepts", action="store_true")
    p.add_argument("--datatype-classes", metavar="NAME[=xsd:TYPE],...",
                   help="classes to turn into attributes when used as relationship targets")
    p.add_argument("--diagram", metavar="PATH", help="also write PlantUML text")
    p.add_argument("--max-iterations", type=_positive, metavar="N")
    p.set_defaults(func=_cmd_transform)

    p = sub.add_parser("eval", help="score a generated model against a gold model")
    p.add_argument("--generated", required=True, metavar="PATH")
    p.add_argument("--gold", required=True, metavar="PATH")
    p.add_argument("--strict-multiplicity", action="store_true")
    p.add_argument("--report", metavar="PATH", help="write the scores as JSON")
    p.add_argument("--figure", metavar="PATH", help="render the scores as a bar chart")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("stats", help="count model elements")
    p.add_argument("--model", required=True, metavar="PATH")
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("emit", help="render a model file")
    p.add_argument("--model", required=True, metavar="PATH")
    p.add_argument("--format", required=True, choices=["diagram"])
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=_cmd_emit)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args, parser)


if __name__ == "__main__":
    sys.exit(main())
