"""Command-line front end.

Exit codes: 0 success, 1 usage or input-set errors, 2 missing resources.
"""

from __future__ import annotations

import argparse
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict
from pathlib import Path
from typing import Sequence

import numpy as np

from . import arcshape, cluster, plot, structure
from .config import RunConfig, load_config
from .corpus import load_manifest, read_text, segment_matrix, tokenize
from .io import atomic_write_text, format_float, read_rows, write_json, write_matrix, write_rows
from .lexicon import NRC_VAD_COLUMNS, load_lexicon, load_stop_list, score_vector, stop_mask
from .sentiment import arc, interpolate_gaps, load_arc, save_arc

log = logging.getLogger("storyarcs")

EXIT_OK, EXIT_INPUT, EXIT_MISSING = 0, 1, 2


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_INPUT):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _require_file(path, what: str) -> Path:
    if path is None:
        raise CliError(f"no {what} given", EXIT_INPUT)
    p = Path(path)
    if not p.is_file():
        raise CliError(f"{what} not found: {p}", EXIT_MISSING)
    return p


def _config(args) -> RunConfig:
    try:
        cfg = load_config(args.config)
    except FileNotFoundError as e:
        raise CliError(str(e), EXIT_MISSING)
    overrides = {
        "lexicon_path": getattr(args, "lexicon", None),
        "dimension": getattr(args, "dimension", None),
        "window_size": getattr(args, "window", None),
        "context": getattr(args, "context", None),
        "stop_list_path": getattr(args, "stop_list", None),
        "band_delta": getattr(args, "band_delta", None),
        "smooth_w": getattr(args, "smooth_w", None),
        "lowpass_m": getattr(args, "lowpass_m", None),
        "resample_L": getattr(args, "resample", None),
        "output_dir": getattr(args, "out", None),
        "manifest_path": getattr(args, "manifest", None),
    }
    cfg = cfg.merged(overrides)
    # 0 switches a smoothing step off
    if cfg.smooth_w == 0:
        cfg.smooth_w = None
    if cfg.lowpass_m == 0:
        cfg.lowpass_m = None
    return cfg.validate()


# ---- score ----------------------------------------------------------------

def _score_one(doc_id: str, path: str, cfg: RunConfig):
    lex = load_lexicon(cfg.lexicon_path)
    words = set(load_stop_list(cfg.stop_list_path)) if cfg.stop_list_path else set()
    mask = stop_mask(lex, cfg.dimension, cfg.band_delta, words)
    matrix = segment_matrix(read_text(path), lex, cfg.window_size, doc=doc_id)
    return arc(matrix, score_vector(lex, cfg.dimension), mask, cfg.context)


def _documents(cfg: RunConfig, inputs: Sequence[str]) -> list[tuple[str, Path]]:
    docs: list[tuple[str, Path]] = []
    if cfg.manifest_path:
        manifest = _require_file(cfg.manifest_path, "manifest")
        docs.extend((e.doc_id, e.path) for e in load_manifest(manifest))
    for p in inputs:
        docs.append((Path(p).name.split(".")[0], Path(p)))
    if not docs:
        raise CliError("no documents", EXIT_INPUT)
    ids = [d for d, _ in docs]
    if len(set(ids)) != len(ids):
        raise CliError("duplicate document ids in input", EXIT_INPUT)
    for doc_id, p in docs:
        if not p.is_file():
            raise CliError(f"input document not found: {p} ({doc_id})", EXIT_MISSING)
    return docs


def run_score(cfg: RunConfig, inputs: Sequence[str], workers: int = 1, formats: Sequence[str] = ("csv", "json")) -> list[Path]:
    lex_path = _require_file(cfg.lexicon_path, "lexicon")
    if cfg.stop_list_path:
        _require_file(cfg.stop_list_path, "stop list")
    # fail fast on a malformed lexicon before fanning out
    load_lexicon(lex_path)
    docs = _documents(cfg, inputs)
    out_dir = Path(cfg.output_dir)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            arcs = list(pool.map(_score_one, [d for d, _ in docs], [str(p) for _, p in docs], [cfg] * len(docs)))
    else:
        arcs = [_score_one(d, str(p), cfg) for d, p in docs]
    written = []
    for (doc_id, path), a in zip(docs, arcs):
        if len(a) == 0:
            n = len(tokenize(read_text(path)))
            log.warning("%s: %d words is shorter than one %d-word window; skipped", doc_id, n, cfg.window_size)
            continue
        for fmt in formats:
            target = out_dir / f"{doc_id}.arc.{fmt}"
            save_arc(a, target, cfg.dimension)
            written.append(target)
        log.info("%s: %d segments, %d without signal", doc_id, len(a), int((~a.defined).sum()))
    if not written:
        raise CliError("no document produced an arc", EXIT_INPUT)
    return written


def cmd_score(args) -> int:
    cfg = _config(args)
    run_score(cfg, args.inputs, args.workers, args.format.split(","))
    return EXIT_OK


def cmd_lexicon(args) -> int:
    path = _require_file(args.path, "lexicon")
    lex = load_lexicon(path, NRC_VAD_COLUMNS if args.nrc else None, skip_nonwords=args.nrc)
    print(f"{path}: {len(lex)} words")
    for dim in ("arousal", "valence", "dominance"):
        col = lex.column(dim)
        print(f"  {dim:<9} min {col.min():.3f}  mean {col.mean():.3f}  max {col.max():.3f}")
    if args.band_delta:
        mask = stop_mask(lex, args.dimension, args.band_delta)
        print(f"  |{args.dimension} - 0.5| < {args.band_delta}: {mask.n_excluded} words excluded")
    missing = 0
    for word in args.words:
        if word.lower() in lex:
            e = lex[word.lower()]
            print(f"{e.word}\t{e.rank}\t{e.arousal}\t{e.valence}\t{e.dominance}")
        else:
            print(f"{word}\tnot in lexicon", file=sys.stderr)
            missing += 1
    return EXIT_INPUT if missing else EXIT_OK


# ---- arcs on disk -----------------------------------------------------------

def _load_arcs(arcs_dir) -> list:
    d = Path(arcs_dir)
    if not d.is_dir():
        raise CliError(f"arcs directory not found: {d}", EXIT_MISSING)
    files = sorted(d.glob("*.arc.csv")) or sorted(d.glob("*.arc.json"))
    return [load_arc(f) for f in files]


def _prepared(arcs, cfg: RunConfig, min_points: int = 4):
    kept, skipped = [], []
    for a in arcs:
        n_defined = int(a.defined.sum())
        if n_defined < min_points:
            log.warning("%s: %d defined points (< %d); skipped", a.doc, n_defined, min_points)
            skipped.append(a.doc)
            continue
        filled = interpolate_gaps(a)
        kept.append(arcshape.prepare(filled.scores, cfg.resample_L, cfg.smooth_w, cfg.lowpass_m, doc=a.doc))
    return kept, skipped


def run_classify(cfg: RunConfig, arcs_dir, out_path) -> list[tuple[str, arcshape.ArcLabel]]:
    norm, _ = _prepared(_load_arcs(arcs_dir), cfg)
    results = [(n.doc, arcshape.classify_arc(n)) for n in norm]
    header = ["doc_id", "label"] + [f"d_{s.value}" for s in arcshape.SHAPES]
    rows = ([doc, lbl.label.value] + [format_float(lbl.distances[s]) for s in arcshape.SHAPES] for doc, lbl in results)
    write_rows(out_path, header, rows)
    return results


def cmd_classify_arc(args) -> int:
    cfg = _config(args)
    out = args.labels or Path(cfg.output_dir) / "arc_labels.csv"
    run_classify(cfg, args.arcs_dir, out)
    return EXIT_OK


def run_cluster(cfg: RunConfig, arcs_dir, k: int, truncate: int | None = None, raw_means: bool = False) -> cluster.ClusterAssignment:
    arcs = _load_arcs(arcs_dir)
    norm, _ = _prepared(arcs, cfg, min_points=1)
    if len(norm) < 2:
        raise CliError(f"clustering needs at least 2 arcs, found {len(norm)}", EXIT_INPUT)
    if not 1 <= k <= len(norm):
        raise CliError(f"k must be in [1, {len(norm)}], got {k}", EXIT_INPUT)
    ids = [n.doc for n in norm]
    X = np.array([n.values for n in norm])
    link = cluster.ward_linkage(cluster.distance_matrix(X))
    assignment = cluster.cut(link, k)

    out = Path(cfg.output_dir)
    write_rows(out / "assignments.csv", ["doc_id", "cluster_id"], zip(ids, map(int, assignment.labels)))
    write_matrix(out / "normalized_arcs.csv", ids, X)
    atomic_write_text(out / "dendrogram.json", cluster.dendrogram_export(link, ids))
    if truncate is None and len(ids) > 60:
        truncate = 30
    atomic_write_text(out / "dendrogram.svg", plot.dendrogram_plot(link, ids, truncate))

    if raw_means:
        by_doc = {a.doc: a for a in arcs}
        X_means = np.array([
            arcshape.resample(interpolate_gaps(by_doc[d]).scores, cfg.resample_L) for d in ids
        ])
    else:
        X_means = X
    means = cluster.cluster_means(X_means, assignment)
    width = len(str(k))
    for cid, mean in means.items():
        members = X_means[assignment.labels == cid]
        svg = plot.cluster_mean_plot(list(members), mean, title=f"Cluster {cid} ({len(members)} scripts)")
        atomic_write_text(out / "cluster_means" / f"cluster_{cid:0{width}d}.svg", svg)
    write_matrix(out / "cluster_means.csv", [str(c) for c in means], np.array(list(means.values())))
    return assignment


def cmd_cluster(args) -> int:
    cfg = _config(args)
    run_cluster(cfg, args.arcs_dir, args.k, args.truncate, args.raw_means)
    return EXIT_OK


# ---- structure --------------------------------------------------------------

def cmd_structure_train(args) -> int:
    data_path = _require_file(args.data, "training data")
    data = structure.load_labeled(data_path)
    categories = args.categories.split(",") if args.categories else None
    train_set, test_set = structure.split(data, args.ratio, args.seed)
    model = structure.train(train_set, args.alpha, categories)
    structure.save_model(model, args.model)
    report = {
        "train_size": len(train_set),
        "test_size": len(test_set),
        "seed": args.seed,
        "ratio": args.ratio,
        "alpha": args.alpha,
        "categories": list(model.categories),
        "eval": structure.evaluate(model, test_set) if test_set else None,
    }
    report_path = args.report or Path(args.model).with_suffix(".report.json")
    write_json(report_path, report)
    if test_set:
        print(f"held-out accuracy: {report['eval']['accuracy']:.4f} ({len(test_set)} segments)")
    return EXIT_OK


def _segments_for_prediction(path: Path, window: int) -> list[tuple[str, str]]:
    if path.suffix.lower() in (".csv", ".tsv"):
        header, rows = read_rows(path)
        if header and [h.lower() for h in header[:2]] != ["segment_id", "text"]:
            rows = [header] + rows
        return [(r[0], ",".join(r[1:])) for r in rows if r]
    words = tokenize(read_text(path)).words
    return [(str(i), " ".join(words[i * window:(i + 1) * window])) for i in range(max(1, -(-len(words) // window)))]


def cmd_structure_predict(args) -> int:
    model_path = _require_file(args.model, "model file")
    input_path = _require_file(args.input, "input")
    model = structure.load_model(model_path)
    segs = _segments_for_prediction(input_path, args.window)
    header = ["segment_id", "label"] + [f"log_score_{c}" for c in model.categories]
    rows = []
    for seg_id, text in segs:
        pred = structure.predict(model, text)
        rows.append([seg_id, pred.label] + [format_float(pred.log_scores[c]) for c in model.categories])
    write_rows(args.out, header, rows)
    return EXIT_OK


# ---- plot -------------------------------------------------------------------

def cmd_plot(args) -> int:
    src = _require_file(args.input, "plot input")
    if args.kind == "arc":
        a = load_arc(src)
        if len(a) == 0 or not a.defined.any():
            raise CliError(f"{src}: empty arc, nothing to plot", EXIT_INPUT)
        svg = plot.arc_plot(a.scores, title=args.title or a.doc)
    elif args.kind == "dendrogram":
        link, labels = cluster.dendrogram_import(read_text(src))
        svg = plot.dendrogram_plot(link, labels, args.truncate, title=args.title or "")
    else:
        assignments = _require_file(args.assignments, "assignments file")
        _, arc_rows = read_rows(src)
        _, assign_rows = read_rows(assignments)
        label_of = {r[0]: int(r[1]) for r in assign_rows}
        members = [np.array([float(v) for v in r[1:]]) for r in arc_rows if label_of.get(r[0]) == args.cluster]
        if not members:
            raise CliError(f"cluster {args.cluster} has no members", EXIT_INPUT)
        svg = plot.cluster_mean_plot(members, np.mean(members, axis=0), title=args.title or f"Cluster {args.cluster}")
    atomic_write_text(args.out, svg)
    return EXIT_OK


# ---- pipeline ---------------------------------------------------------------

def cmd_pipeline(args) -> int:
    cfg = _config(args)
    out = Path(cfg.output_dir)
    arcs_dir = out / "arcs"
    score_cfg = cfg.merged({"output_dir": str(arcs_dir)})
    run_score(score_cfg, args.inputs, args.workers, ("csv", "json"))
    for f in sorted(arcs_dir.glob("*.arc.csv")):
        a = load_arc(f)
        if a.defined.any():
            atomic_write_text(out / "plots" / f"{a.doc}.svg", plot.arc_plot(a.scores, title=a.doc))
    run_classify(cfg, arcs_dir, out / "arc_labels.csv")
    n_arcs = len(list(arcs_dir.glob("*.arc.csv")))
    if n_arcs >= 2:
        run_cluster(cfg, arcs_dir, min(args.k, n_arcs), args.truncate)
    else:
        log.warning("only %d arc(s); clustering skipped", n_arcs)
    write_json(out / "run_config.json", asdict(cfg))
    return EXIT_OK


# ---- parser -----------------------------------------------------------------

def _add_run_options(p, scoring=True, shaping=True):
    p.add_argument("--config", help="JSON config file (default: $STORYARCS_CONFIG)")
    p.add_argument("--out", help="output directory")
    if scoring:
        p.add_argument("--lexicon", help="lexicon file (Word, Ranking, Arousal, Valence, Dominance)")
        p.add_argument("--dimension", choices=("valence", "arousal", "dominance"))
        p.add_argument("--window", type=int, help="words per segment (default 500)")
        p.add_argument("--context", type=int, help="segments accumulated per score (default 10)")
        p.add_argument("--stop-list", help="stop-word file, one word per line")
        p.add_argument("--band-delta", type=float, help="exclude words with |score - 0.5| < delta")
        p.add_argument("--manifest", help="corpus manifest: doc_id, title, path")
        p.add_argument("--workers", type=int, default=1)
    if shaping:
        p.add_argument("--smooth-w", type=int, help="moving-average width, odd; 0 disables (default 5)")
        p.add_argument("--lowpass-m", type=int, help="Fourier terms kept; 0 disables (default 5)")
        p.add_argument("--resample", type=int, help="points per normalized arc (default 100)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="storyarcs", description="Sentiment arcs, story shapes and Ward clustering for narrative text.")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("lexicon", help="summarize a lexicon and look up words")
    p.add_argument("path")
    p.add_argument("words", nargs="*")
    p.add_argument("--nrc", action="store_true", help="raw NRC-VAD layout (word, valence, arousal, dominance)")
    p.add_argument("--dimension", default="arousal", choices=("valence", "arousal", "dominance"))
    p.add_argument("--band-delta", type=float, default=0.0, help="also report how many words this band excludes")
    p.set_defaults(func=cmd_lexicon)

    p = sub.add_parser("score", help="score documents into sentiment arcs")
    _add_run_options(p, shaping=False)
    p.add_argument("inputs", nargs="*", help="plain-text documents (in addition to --manifest)")
    p.add_argument("--format", default="csv,json", help="comma-separated: csv, json")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("classify-arc", help="label arcs with one of six story shapes")
    _add_run_options(p, scoring=False)
    p.add_argument("arcs_dir")
    p.add_argument("--labels", help="output CSV (default: <out>/arc_labels.csv)")
    p.set_defaults(func=cmd_classify_arc)

    p = sub.add_parser("cluster", help="Ward clustering of arcs with a flat cut at k")
    _add_run_options(p, scoring=False)
    p.add_argument("arcs_dir")
    p.add_argument("-k", type=int, required=True, help="number of flat clusters")
    p.add_argument("--truncate", type=int, help="dendrogram SVG shows only the top N merges")
    p.add_argument("--raw-means", action="store_true", help="average raw (resampled) arcs instead of normalized ones")
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("structure", help="narrative-structure classifier")
    ssub = p.add_subparsers(dest="structure_command", required=True, parser_class=_Parser)
    t = ssub.add_parser("train", help="train on label/text rows and report held-out accuracy")
    t.add_argument("data")
    t.add_argument("--model", required=True)
    t.add_argument("--report")
    t.add_argument("--ratio", type=float, default=0.8, help="training share of each category (default 0.8)")
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--alpha", type=float, default=1.0)
    t.add_argument("--categories", help="comma-separated category order (default: sorted labels)")
    t.set_defaults(func=cmd_structure_train)
    pr = ssub.add_parser("predict", help="tag segments with a trained model")
    pr.add_argument("input", help="segment_id/text CSV or TSV, or a plain-text file cut into windows")
    pr.add_argument("--model", required=True)
    pr.add_argument("--out", required=True)
    pr.add_argument("--window", type=int, default=500)
    pr.set_defaults(func=cmd_structure_predict)

    p = sub.add_parser("plot", help="render an SVG")
    p.add_argument("kind", choices=("arc", "cluster-mean", "dendrogram"))
    p.add_argument("input", help="arc file, normalized_arcs.csv, or dendrogram.json")
    p.add_argument("--out", required=True)
    p.add_argument("--title")
    p.add_argument("--assignments", help="assignments.csv (cluster-mean)")
    p.add_argument("--cluster", type=int, help="cluster id (cluster-mean)")
    p.add_argument("--truncate", type=int)
    p.set_defaults(func=cmd_plot)

    p = sub.add_parser("pipeline", help="score, classify-arc and cluster in one run")
    _add_run_options(p)
    p.add_argument("inputs", nargs="*")
    p.add_argument("-k", type=int, default=3)
    p.add_argument("--truncate", type=int)
    p.set_defaults(func=cmd_pipeline)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    if args.command == "plot" and args.kind == "cluster-mean" and args.cluster is None:
        parser.error("plot cluster-mean needs --cluster")
    try:
        return args.func(args)
    except CliError as e:
        print(f"storyarcs: {e}", file=sys.stderr)
        return e.code
    except FileNotFoundError as e:
        print(f"storyarcs: {e}", file=sys.stderr)
        return EXIT_MISSING
    except (ValueError, KeyError) as e:
        print(f"storyarcs: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
