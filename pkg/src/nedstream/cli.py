"""Command-line front end: detect, series, graph-export, phrases, eval."""
from __future__ import annotations

import argparse
import json
import logging
import re
import sys
from pathlib import Path

from .config import PipelineConfig
from .errors import InvariantViolation, NedError, SeriesTooShort
from .ingest import parse_corpus

log = logging.getLogger("nedstream")

EXIT_OK, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2


def _add_pipeline_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("corpus", help="JSONL or CSV document stream")
    p.add_argument("--format", choices=["jsonl", "csv"], help="corpus format (default: by suffix)")
    p.add_argument("--config", help="TOML file with pipeline settings")
    g = p.add_argument_group("overrides")
    g.add_argument("--block-duration", help="e.g. 1d, 1min, 3600s")
    g.add_argument("--origin", help="ISO-8601 start of block 0 (default: first document)")
    g.add_argument("--window", type=int)
    g.add_argument("--threshold", type=float)
    g.add_argument("--min-support", type=int)
    g.add_argument("--sig-threshold", type=float)
    g.add_argument("--max-len", type=int)
    g.add_argument("--resolution", type=float)
    g.add_argument("--top-k", type=int)
    g.add_argument("--top-events", type=int)
    g.add_argument("--provider", choices=["pre-annotated", "gazetteer", "external"])
    g.add_argument("--gazetteer")
    g.add_argument("--stopwords")
    g.add_argument("--sidecar", help="JSONL entity annotations keyed by document id")


def _config(args) -> PipelineConfig:
    cfg = PipelineConfig.load(args.config) if args.config else PipelineConfig()
    return cfg.override(
        block_duration=args.block_duration, origin=args.origin, window=args.window,
        threshold=args.threshold, min_support=args.min_support, sig_threshold=args.sig_threshold,
        max_len=args.max_len, resolution=args.resolution, top_k=args.top_k,
        top_events=args.top_events, provider=args.provider, gazetteer=args.gazetteer,
        stopwords=args.stopwords, sidecar=args.sidecar)


def _write(text: str, path: str | None) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        Path(path).write_text(text, encoding="utf-8")


def _safe_name(s: str) -> str:
    return re.sub(r"[^\w.-]+", "_", s).strip("_") or "entity"


def _load_and_run(args):
    from .pipeline import run_detection

    cfg = _config(args)
    docs = parse_corpus(args.corpus, args.format)
    if docs.skipped:
        log.warning("skipped %d malformed records", docs.skipped)
    return run_detection(docs, cfg, docs.skipped)


def cmd_detect(args) -> int:
    run = _load_and_run(args)
    manifest = run.manifest()
    _write(run.summaries_json(), args.output)
    if args.manifest:
        _write(json.dumps(manifest, indent=1, sort_keys=True) + "\n", args.manifest)
    if args.report:
        _write(run.report(), args.report)
    c = manifest["counts"]
    log.info("%d documents, %d entities, %d peaks, %d filtered documents, %d events",
             c["documents"], c["entities"], c["peaks"], c["filtered_documents"], c["events"])
    return EXIT_OK


def cmd_series(args) -> int:
    from .ingest import discretize
    from .peaks import PeakDetectorConfig, build_series, series_csv
    from .pipeline import build_graphs, resolve_blocks

    cfg = _config(args)
    docs = parse_corpus(args.corpus, args.format)
    blocks = discretize(docs, cfg.block_duration, cfg.origin)
    series = build_series(build_graphs(resolve_blocks(blocks, cfg)))
    if args.entity:
        needle = args.entity.casefold()
        series = {k: v for k, v in series.items() if needle in k}
        if not series:
            log.warning("no entity matches %r", args.entity)
    pcfg = PeakDetectorConfig(cfg.window, cfg.threshold)
    if len(blocks) <= cfg.window:
        log.warning("%s", SeriesTooShort(f"{len(blocks)} blocks; no peaks can be flagged"))
    if args.output_dir:
        out = Path(args.output_dir)
        out.mkdir(parents=True, exist_ok=True)
        for name, s in series.items():
            (out / f"{_safe_name(name)}.csv").write_text(series_csv(s, pcfg), encoding="utf-8")
    else:
        for name, s in series.items():
            sys.stdout.write(f"# {name}\n{series_csv(s, pcfg)}")
    return EXIT_OK


def cmd_graph_export(args) -> int:
    from .ingest import discretize
    from .pipeline import build_graphs, resolve_blocks

    cfg = _config(args)
    docs = parse_corpus(args.corpus, args.format)
    blocks = discretize(docs, cfg.block_duration, cfg.origin)
    graphs = build_graphs(resolve_blocks(blocks, cfg))
    if args.block is not None:
        if not 0 <= args.block < len(graphs):
            raise NedError(f"block {args.block} out of range (0..{len(graphs) - 1})")
        graphs = [graphs[args.block]]
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    for g in graphs:
        if args.graph_format == "graphml":
            g.write_graphml(out / f"block_{g.block_index:05d}.graphml")
        else:
            g.write_json(out / f"block_{g.block_index:05d}.json")
    return EXIT_OK


def cmd_phrases(args) -> int:
    run = _load_and_run(args)
    lines = []
    for b in run.block_events:
        if args.block is not None and b.block.index != args.block:
            continue
        lines.append(json.dumps({"block": b.block.index, "filtered_documents": len(b.filtered),
                                 "phrases": [{"phrase": p.text, "support": p.support} for p in b.phrases]},
                                ensure_ascii=False))
    _write("".join(line + "\n" for line in lines), args.output)
    return EXIT_OK


def cmd_eval(args) -> int:
    from .evaluate import compare_published, evaluate, load_detections, load_ground_truth

    dets = load_detections(args.summaries)
    gts = load_ground_truth(args.ground_truth)
    report = evaluate(dets, gts, args.mode, args.top_n, expand=not args.exact)
    payload = report.to_dict()
    if args.compare_published:
        payload["published_comparison"] = compare_published(report)
    _write(json.dumps(payload, indent=1) + "\n", args.output)
    sys.stderr.write(report.table())
    if args.compare_published:
        for row in payload["published_comparison"]:
            flag = "  <-- deviates > 10 pp" if row["flag"] else ""
            sys.stderr.write(f"{row['metric']:<18} computed {row['computed'] * 100:6.2f}%"
                             f"  published {row['published'] * 100:6.2f}%{flag}\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nedstream", description=__doc__)
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("detect", help="run the full pipeline and write event summaries")
    _add_pipeline_args(p)
    p.add_argument("-o", "--output", help="summaries JSON (default: stdout)")
    p.add_argument("--manifest", help="run manifest JSON")
    p.add_argument("--report", help="plain-text summary report")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("series", help="weighted-degree series CSV per entity")
    _add_pipeline_args(p)
    p.add_argument("--entity", help="substring filter on canonical entity names")
    p.add_argument("-d", "--output-dir")
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("graph-export", help="per-block knowledge graphs as GraphML or JSON edge lists")
    _add_pipeline_args(p)
    p.add_argument("--graph-format", choices=["graphml", "json"], default="json")
    p.add_argument("--block", type=int)
    p.add_argument("-d", "--output-dir", required=True)
    p.set_defaults(func=cmd_graph_export)

    p = sub.add_parser("phrases", help="phrases mined from the peak-filtered documents of each block")
    _add_pipeline_args(p)
    p.add_argument("--block", type=int)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_phrases)

    p = sub.add_parser("eval", help="score summaries against ground-truth topics")
    p.add_argument("summaries")
    p.add_argument("ground_truth")
    p.add_argument("--mode", choices=["tweet-slots", "article-days"], default="tweet-slots")
    p.add_argument("--top-n", type=int, help="topics kept per slot (tweet-slots default 2)")
    p.add_argument("--exact", action="store_true", help="no token expansion of multi-word terms")
    p.add_argument("--compare-published", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_eval)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except InvariantViolation as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except NedError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
