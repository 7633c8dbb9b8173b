"""One-shot command line for scripting and golden-file testing.

Subcommands: classify, resolve, recommend, emit, catalog, serve. Output on
stdout is machine-parseable and byte-stable for fixed inputs; engine errors
land on stderr with exit code 2 (input/parse), 3 (resolution), or 4
(internal).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .catalog import catalog_document, recommend
from .charts import serialize_spec
from .config import DEFAULT_CONFIG, EngineConfig
from .engine import Engine, canonical_json
from .errors import (AmbiguityError, CompareVizError, DatasetError,
                     EmptyResultError, NotAComparisonError, ResolutionError,
                     SchemaError, UnsupportedComparisonError)
from .lexicon import default_lexicon, load_lexicon_file

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_RESOLUTION = 3
EXIT_INTERNAL = 4

_INPUT_ERRORS = (DatasetError, SchemaError, NotAComparisonError,
                 UnsupportedComparisonError, AmbiguityError)
_RESOLUTION_ERRORS = (ResolutionError, EmptyResultError)

LEXICON_ENV = "COMPAREVIZ_LEXICON"


def _add_common(parser: argparse.ArgumentParser, need_data: bool = True):
    parser.add_argument("--data", required=need_data,
                        help="CSV file with a header row")
    parser.add_argument("--metadata",
                        help="optional JSON sidecar overriding column kinds/units")
    parser.add_argument("--lexicon",
                        help=f"lexicon JSON (default: built-in, or ${LEXICON_ENV})")
    parser.add_argument("--utterance", help="comparison utterance to process")
    parser.add_argument("--choose", action="append", default=[],
                        metavar="REF=INDEX",
                        help="pick interpretation INDEX for implicit reference REF "
                             "(repeatable; REF may carry a value:/attribute: prefix)")
    parser.add_argument("--top-k", type=int, default=DEFAULT_CONFIG.top_k,
                        help="row budget for set references (default %(default)s)")
    parser.add_argument("--format", choices=("json", "table"), default="json",
                        help="stdout format (default %(default)s)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="compareviz",
        description="Parse comparison utterances over a CSV and recommend charts.")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, helptext in [
        ("classify", "print the parse (cardinality, concreteness, references)"),
        ("resolve", "print the resolution plan for implicit references"),
        ("recommend", "print the four ranked designs"),
        ("emit", "write the four ranked chart spec documents"),
    ]:
        p = sub.add_parser(name, help=helptext)
        _add_common(p)
        if name == "emit":
            p.add_argument("--out-dir", default="specs",
                           help="directory for spec documents (default %(default)s)")

    p_catalog = sub.add_parser("catalog", help="dump the 16-design catalog")
    p_catalog.add_argument("--format", choices=("json", "table"), default="json")

    p_serve = sub.add_parser("serve", help="start the HTTP API")
    _add_common(p_serve, need_data=False)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8765)
    return parser


def _load_engine(args) -> Engine:
    config = EngineConfig(top_k=args.top_k) if args.top_k != DEFAULT_CONFIG.top_k \
        else DEFAULT_CONFIG
    lexicon_path = args.lexicon or os.environ.get(LEXICON_ENV)
    lexicon = load_lexicon_file(lexicon_path, config) if lexicon_path \
        else default_lexicon(config)
    metadata = None
    if args.metadata:
        metadata = json.loads(Path(args.metadata).read_text("utf-8"))
    data = Path(args.data).read_text("utf-8")
    return Engine.from_csv(data, metadata=metadata, lexicon=lexicon, config=config)


def _parse_choices(pairs: list[str]) -> dict[str, int]:
    chosen = {}
    for pair in pairs:
        if "=" not in pair:
            raise DatasetError(f"--choose expects REF=INDEX, got {pair!r}")
        ref, _, idx = pair.rpartition("=")
        try:
            chosen[ref] = int(idx)
        except ValueError:
            raise DatasetError(f"--choose index must be an integer, got {idx!r}")
    return chosen


def _require_utterance(args):
    if not args.utterance:
        raise DatasetError("--utterance is required for this subcommand")


def _table(rows: list[dict], columns: list[str]) -> str:
    widths = {c: max(len(c), *(len(str(r.get(c, ""))) for r in rows)) if rows else len(c)
              for c in columns}
    header = "  ".join(c.ljust(widths[c]) for c in columns)
    lines = [header, "  ".join("-" * widths[c] for c in columns)]
    for r in rows:
        lines.append("  ".join(str(r.get(c, "")).ljust(widths[c]) for c in columns))
    return "\n".join(lines)


def _cmd_classify(args) -> str:
    engine = _load_engine(args)
    _require_utterance(args)
    parsed = engine.classify(args.utterance)
    doc = parsed.to_dict()
    if args.format == "table":
        rows = [{"field": "cardinality", "value": doc["cardinality"]},
                {"field": "cell", "value": doc["concreteness"]["cell"]},
                {"field": "mixed", "value": doc["concreteness"]["mixed_flag"]},
                {"field": "attribute",
                 "value": doc["attribute"]["attribute"] or doc["attribute"]["surface"]}]
        rows += [{"field": f"value[{i}]",
                  "value": f'{v["surface"]} ({v["kind"]}/{v["plurality"]})'}
                 for i, v in enumerate(doc["values"])]
        return _table(rows, ["field", "value"])
    return canonical_json(doc).rstrip("\n")


def _cmd_resolve(args) -> str:
    engine = _load_engine(args)
    _require_utterance(args)
    parsed = engine.classify(args.utterance)
    plan = engine.plan(parsed, _parse_choices(args.choose))
    doc = plan.to_dict()
    if args.format == "table":
        rows = []
        for entry in doc["entries"]:
            for i, interp in enumerate(entry["interpretations"]):
                rows.append({
                    "reference": entry["reference"],
                    "role": entry["role"],
                    "index": i,
                    "chosen": "*" if i == entry["chosen"] else "",
                    "interpretation": interp["provenance"],
                })
        return _table(rows, ["reference", "role", "index", "chosen", "interpretation"])
    return canonical_json(doc).rstrip("\n")


def _cmd_recommend(args) -> str:
    engine = _load_engine(args)
    _require_utterance(args)
    parsed = engine.classify(args.utterance)
    plan = engine.plan(parsed, _parse_choices(args.choose))
    recommendations = recommend(parsed, plan)
    if args.format == "table":
        rows = [{"rank": r.rank, "design": r.design.id, "tier": r.tier,
                 "chart": r.design.chart_type, "summary": r.design.summary}
                for r in recommendations]
        return _table(rows, ["rank", "design", "tier", "chart", "summary"])
    return canonical_json({"recommendations": [r.to_dict() for r in recommendations]
                           }).rstrip("\n")


def _cmd_emit(args) -> str:
    engine = _load_engine(args)
    _require_utterance(args)
    specs = engine.emit_specs(args.utterance, _parse_choices(args.choose))
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for i, spec in enumerate(specs, start=1):
        path = out_dir / f"rank{i}_{spec.design}.vl.json"
        path.write_text(serialize_spec(spec), encoding="utf-8")
        written.append(str(path))
    return canonical_json({"written": written}).rstrip("\n")


def _cmd_catalog(args) -> str:
    doc = catalog_document()
    if args.format == "table":
        rows = [{"id": d["id"], "cardinality": d["cardinality"],
                 "chart": d["chart_type"], "orientation": d["orientation"],
                 "arrangement": d["arrangement"]} for d in doc["designs"]]
        return _table(rows, ["id", "cardinality", "chart", "orientation", "arrangement"])
    return canonical_json(doc).rstrip("\n")


def _cmd_serve(args) -> str:  # pragma: no cover - blocks on uvicorn
    from .service import run
    config = EngineConfig(top_k=args.top_k)
    lexicon_path = args.lexicon or os.environ.get(LEXICON_ENV)
    lexicon = load_lexicon_file(lexicon_path, config) if lexicon_path else None
    run(host=args.host, port=args.port, config=config, lexicon=lexicon)
    return ""


_COMMANDS = {
    "classify": _cmd_classify,
    "resolve": _cmd_resolve,
    "recommend": _cmd_recommend,
    "emit": _cmd_emit,
    "catalog": _cmd_catalog,
    "serve": _cmd_serve,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        output = _COMMANDS[args.command](args)
        if output:
            print(output)
        return EXIT_OK
    except _INPUT_ERRORS as e:
        print(f"error ({e.code}): {e.message}", file=sys.stderr)
        return EXIT_INPUT
    except _RESOLUTION_ERRORS as e:
        print(f"error ({e.code}): {e.message}", file=sys.stderr)
        return EXIT_RESOLUTION
    except CompareVizError as e:
        print(f"error ({e.code}): {e.message}", file=sys.stderr)
        return EXIT_INTERNAL
    except OSError as e:
        print(f"error (io): {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
