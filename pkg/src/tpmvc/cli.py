"""Command-line front end: manifest in, labels/metrics/trace files out."""

import argparse
import csv
import json
import logging
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import graph, metrics, solver
from .errors import DatasetError, IoError, MissingFile, ParseError, RowCountMismatch

log = logging.getLogger("tpmvc")

FLOAT_FMT = "{:.17g}"


@dataclass
class DatasetManifest:
    name: str
    views: list
    clusters: int
    labels: str = None

    @classmethod
    def from_file(cls, path):
        path = Path(path)
        if not path.is_file():
            raise MissingFile(path, "manifest not found")
        try:
            raw = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ParseError(path, f"invalid JSON: {exc}") from exc
        if not isinstance(raw, dict):
            raise ParseError(path, "manifest must be a JSON object")
        views = raw.get("views")
        if not isinstance(views, list) or not views:
            raise ParseError(path, "'views' must be a non-empty list of file paths")
        clusters = raw.get("clusters")
        if not isinstance(clusters, int) or clusters < 1:
            raise ParseError(path, "'clusters' must be a positive integer")
        base = path.parent

        def resolve(p):
            p = Path(p)
            return str(p if p.is_absolute() else base / p)

        labels = raw.get("labels")
        return cls(
            name=str(raw.get("name", path.stem)),
            views=[resolve(v) for v in views],
            clusters=clusters,
            labels=resolve(labels) if labels else None,
        )


@dataclass
class RunReport:
    config: dict
    anchors: int
    iterations: int
    converged: bool
    metrics: dict = None
    wall_time: float = 0.0
    extra: dict = field(default_factory=dict)


def _read_matrix(path):
    path = Path(path)
    if not path.is_file():
        raise MissingFile(path, "file not found")
    try:
        x = np.loadtxt(path, delimiter=",", dtype=float, ndmin=2)
    except ValueError as exc:
        raise ParseError(path, f"not a numeric CSV matrix: {exc}") from exc
    if x.size == 0:
        raise ParseError(path, "matrix is empty")
    if not np.all(np.isfinite(x)):
        raise ParseError(path, "matrix has non-finite entries")
    return x


def load_dataset(manifest):
    """Read every view matrix and the optional label vector named by ``manifest``.

    Returns ``(views, truth)``; ``truth`` is ``None`` when the manifest has no
    labels file.
    """
    if not isinstance(manifest, DatasetManifest):
        manifest = DatasetManifest.from_file(manifest)
    views = [_read_matrix(p) for p in manifest.views]
    n = views[0].shape[0]
    for p, x in zip(manifest.views, views):
        if x.shape[0] != n:
            raise RowCountMismatch(p, f"has {x.shape[0]} rows, expected {n}")
    truth = None
    if manifest.labels:
        lab = _read_matrix(manifest.labels)
        if lab.shape[1] != 1:
            raise ParseError(manifest.labels, "labels file must have exactly one column")
        lab = lab[:, 0]
        if not np.all(lab == np.round(lab)):
            raise ParseError(manifest.labels, "labels must be integers")
        if lab.size != n:
            raise RowCountMismatch(manifest.labels, f"has {lab.size} labels, expected {n}")
        truth = lab.astype(np.int64)
    return views, truth


def run_pipeline(
    manifest,
    cfg,
    clusters=None,
    anchor_rate=0.1,
    anchors=None,
    knn=5,
    normalize=True,
):
    """normalize -> anchors -> anchor graphs -> solver -> metrics."""
    if not isinstance(manifest, DatasetManifest):
        manifest = DatasetManifest.from_file(manifest)
    t0 = time.perf_counter()
    views, truth = load_dataset(manifest)
    c = clusters or manifest.clusters
    n = views[0].shape[0]
    if normalize:
        views = [graph.minmax_normalize(x) for x in views]
    m = anchors if anchors is not None else graph.default_anchor_count(n, c, anchor_rate)
    log.info("%s: n=%d views=%d clusters=%d anchors=%d", manifest.name, n, len(views), c, m)
    anchor_set = graph.select_anchors(views, m, seed=cfg.seed)
    graphs = graph.build_graphs(views, anchor_set, k=knn)
    result = solver.run(graphs, c, cfg)
    scores = metrics.evaluate(result.labels, truth) if truth is not None else None
    report = RunReport(
        config={
            **asdict(cfg),
            "clusters": c,
            "anchor_rate": anchor_rate,
            "knn": knn,
            "normalize": normalize,
        },
        anchors=m,
        iterations=result.iterations,
        converged=result.converged,
        metrics=scores,
        wall_time=time.perf_counter() - t0,
        extra={"dataset": manifest.name, "views": len(views), "samples": n},
    )
    return report, result


def _fmt(x):
    return FLOAT_FMT.format(float(x))


def write_outputs(out_dir, result, report):
    """Write labels.csv, anchors_labels.csv, trace.csv, report.json and (with truth) metrics.json."""
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "labels.csv", "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["sample_index", "label"])
            w.writerows((i, int(lab)) for i, lab in enumerate(result.labels))
        with open(out / "anchors_labels.csv", "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["view", "anchor_index", "label"])
            for v, row in enumerate(result.anchor_labels, start=1):
                w.writerows((v, j, int(lab)) for j, lab in enumerate(row))
        n_views = result.anchor_labels.shape[0]
        with open(out / "trace.csv", "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(
                ["iter", "r1", "r2", "r3", "r4", "objective"]
                + [f"alpha_{v}" for v in range(1, n_views + 1)]
            )
            for rec in result.trace:
                w.writerow(
                    [rec.iteration]
                    + [_fmt(r) for r in rec.residuals]
                    + [_fmt(rec.objective)]
                    + [_fmt(a) for a in rec.alpha]
                )
        if report.metrics is not None:
            (out / "metrics.json").write_text(json.dumps(report.metrics, indent=2, sort_keys=True) + "\n")
        (out / "report.json").write_text(json.dumps(asdict(report), indent=2, sort_keys=True) + "\n")
    except OSError as exc:
        raise IoError(f"cannot write outputs to {out}: {exc}") from exc
    return out


def build_parser():
    ap = argparse.ArgumentParser(
        prog="tpmvc",
        description="Anchor-graph multi-view clustering with transition-probability soft labels.",
    )
    ap.add_argument("--data", required=True, help="dataset manifest (JSON)")
    ap.add_argument("--clusters", type=int, help="number of clusters (overrides the manifest)")
    ap.add_argument("--anchor-rate", type=float, default=0.1)
    ap.add_argument("--anchors", type=int, help="absolute anchor count (overrides --anchor-rate)")
    ap.add_argument("--knn", type=int, default=5, help="anchors linked to each sample")
    ap.add_argument("--lambda1", type=float, default=100.0)
    ap.add_argument("--lambda2", type=float, default=100.0)
    ap.add_argument("--p", type=float, default=0.8, help="Schatten p in (0, 1]")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--tol", type=float, default=1e-6)
    ap.add_argument("--max-iter", type=int, default=200)
    ap.add_argument("--no-normalize", action="store_true", help="skip per-feature min-max scaling")
    ap.add_argument("--out", default="out", help="output directory")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO, format="%(message)s")
    try:
        cfg = solver.ProblemConfig(
            lambda1=args.lambda1,
            lambda2=args.lambda2,
            p=args.p,
            tol=args.tol,
            max_iter=args.max_iter,
            seed=args.seed,
        )
        report, result = run_pipeline(
            args.data,
            cfg,
            clusters=args.clusters,
            anchor_rate=args.anchor_rate,
            anchors=args.anchors,
            knn=args.knn,
            normalize=not args.no_normalize,
        )
        write_outputs(args.out, result, report)
    except (DatasetError, IoError, ValueError, np.linalg.LinAlgError) as exc:
        log.error("error: %s", exc)
        return 1
    status = "converged" if report.converged else "not converged"
    log.info("%d iterations, %s, %.2fs", report.iterations, status, report.wall_time)
    if report.metrics:
        log.info("ACC %.4f  NMI %.4f  Purity %.4f", *(report.metrics[k] for k in ("acc", "nmi", "purity")))
    return 0


if __name__ == "__main__":
    sys.exit(main())
