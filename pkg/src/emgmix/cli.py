"""Command-line interface.

Subcommands:

  synth       write synthetic recordings per configured subject
  features    turn a directory of recording CSVs into a feature CSV
  train       fit one model on a feature CSV and save it as JSON
  evaluate    score a saved model against a feature CSV
  experiment  run every subject x model combination end to end
  report      turn experiment CSVs into tables and bar charts

Exit codes: 0 success, 1 configuration/usage error, 2 data error, 3 model
error; every failure prints a one-line diagnostic to stderr. Outputs are
deterministic for a fixed config: no timestamps, sorted manifest keys, and
sha256 hashes of every artifact in manifest.json.
"""

import argparse
import csv
import hashlib
import json
import sys
from collections import Counter
from dataclasses import replace
from pathlib import Path

from .config import (
    MODEL_NAMES,
    PipelineConfig,
    build_trainers,
    load_config,
    make_subject_datasets,
    subject_recordings,
)
from .dataset import load_feature_csv, load_recording_csv, save_feature_csv, \
    save_recording_csv, build_dataset
from .errors import ConfigError, DataError, ModelError
from .evaluation import (
    compute_metrics,
    confusion_matrix,
    run_experiment,
    write_confusion_csv,
    write_metrics_csv,
    write_summary_csv,
)
from .serialize import load_model, save_model


class _Parser(argparse.ArgumentParser):
    # Route argparse usage failures through the ConfigError exit path (1)
    # instead of argparse's default exit code 2.
    def error(self, message):
        raise ConfigError(message)


def _load_or_default(args) -> PipelineConfig:
    cfg = load_config(args.config) if args.config else PipelineConfig()
    if getattr(args, "seed", None) is not None:
        cfg = replace(cfg, seed=args.seed)
    if getattr(args, "out_dir", None) is not None:
        cfg = replace(cfg, out_dir=args.out_dir)
    if getattr(args, "workers", None) is not None:
        cfg = replace(cfg, workers=args.workers)
    return cfg


def _write_manifest(out_dir: Path, command: str, cfg: PipelineConfig) -> None:
    artifacts = {}
    for p in sorted(out_dir.rglob("*")):
        if p.is_file() and p.name != "manifest.json":
            digest = hashlib.sha256(p.read_bytes()).hexdigest()
            artifacts[p.relative_to(out_dir).as_posix()] = f"sha256:{digest}"
    manifest = {
        "command": command,
        "config": cfg.to_flat_dict(),
        "artifacts": artifacts,
    }
    text = json.dumps(manifest, indent=1, sort_keys=True)
    (out_dir / "manifest.json").write_text(text + "\n")


def cmd_synth(args) -> int:
    cfg = _load_or_default(args)
    out = Path(cfg.out_dir)
    written = 0
    for i, subject in enumerate(cfg.subjects):
        subject_dir = out / "recordings" / subject
        subject_dir.mkdir(parents=True, exist_ok=True)
        reps = Counter()
        for rec in subject_recordings(cfg, i):
            label = int(rec.labels[0])
            rep = reps[label]
            reps[label] += 1
            save_recording_csv(subject_dir / f"class{label}_rep{rep:02d}.csv",
                               rec)
            written += 1
    _write_manifest(out, "synth", cfg)
    print(f"wrote {written} recordings under {out / 'recordings'}")
    return 0


def cmd_features(args) -> int:
    cfg = _load_or_default(args)
    rec_dir = Path(args.recordings)
    if not rec_dir.is_dir():
        raise DataError(f"recordings directory not found: {rec_dir}")
    paths = sorted(rec_dir.glob("*.csv"))
    if not paths:
        raise DataError(f"no recording CSVs in {rec_dir}")
    recordings = [load_recording_csv(p) for p in paths]
    ds = build_dataset(recordings, cfg.filter_spec(), cfg.window_spec(),
                       cfg.feature_spec())
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    save_feature_csv(out, ds)
    print(f"wrote {ds.n_rows} feature rows x {ds.features.shape[1]} columns "
          f"to {out}")
    return 0


def cmd_train(args) -> int:
    cfg = _load_or_default(args)
    if args.model not in MODEL_NAMES:
        raise ConfigError(
            f"unknown model {args.model!r}; choose from {list(MODEL_NAMES)}"
        )
    ds = load_feature_csv(args.features)
    trainer = build_trainers(replace(cfg, models=[args.model]))[args.model]
    model = trainer(ds, cfg.seed)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    save_model(model, out)
    print(f"trained {args.model} on {ds.n_rows} rows; saved to {out}")
    return 0


def cmd_evaluate(args) -> int:
    model = load_model(args.model)
    ds = load_feature_csv(args.features, class_count=model.classes.size)
    predicted = model.predict_label(ds.features)
    cm = confusion_matrix(ds.labels, predicted, ds.class_count)
    report = compute_metrics(cm, subject=args.subject, model=args.name)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_metrics_csv(out / "metrics.csv", [report])
    write_summary_csv(out / "summary.csv", [report])
    write_confusion_csv(out / f"confusion_{args.subject}_{args.name}.csv", cm)
    write_confusion_csv(out / f"confusion_{args.subject}_{args.name}_pct.csv",
                        cm, percent=True)
    print(f"overall_accuracy={report.overall_accuracy!r} "
          f"macro_f1={report.macro_f1!r} ({ds.n_rows} rows)")
    return 0


def cmd_experiment(args) -> int:
    cfg = _load_or_default(args)
    datasets = make_subject_datasets(cfg)
    trainers = build_trainers(cfg)
    out = Path(cfg.out_dir)
    result = run_experiment(datasets, trainers, seed=cfg.seed,
                            train_fraction=cfg.train_fraction, out_dir=out)
    _write_manifest(out, "experiment", cfg)
    for r in result.reports:
        print(f"{r.subject} {r.model}: overall_accuracy={r.overall_accuracy:.4f} "
              f"macro_f1={r.macro_f1:.4f}")
    for subject, name, message in result.failures:
        print(f"{subject} {name}: FAILED ({message})", file=sys.stderr)
    print(f"wrote reports to {out}")
    return 0


REPORT_METRICS = ("overall_accuracy", "macro_accuracy", "macro_precision",
                  "macro_recall", "macro_f1")

_PALETTE = ("#4c78a8", "#f58518", "#54a24b", "#e45756", "#72b7b2",
            "#eeca3b", "#b279a2", "#ff9da6", "#9d755d")


def _svg_bar_chart(title: str, subjects, models, values, path) -> None:
    """Grouped bar chart of values[(subject, model)] in [0, 1], as SVG text."""
    bar_w = 18
    gap = 28
    left, top, bottom = 56, 34, 42
    plot_h = 220
    group_w = bar_w * len(models)
    width = left + gap + len(subjects) * (group_w + gap) + 150
    height = top + plot_h + bottom
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" font-family="sans-serif" font-size="11">',
        f'<text x="{left}" y="18" font-size="14">{title}</text>',
    ]
    for tick in (0.0, 0.25, 0.5, 0.75, 1.0):
        y = top + plot_h * (1.0 - tick)
        lines.append(
            f'<line x1="{left}" y1="{y:.1f}" x2="{width - 140}" y2="{y:.1f}" '
            f'stroke="#ddd"/>'
        )
        lines.append(
            f'<text x="{left - 8}" y="{y + 4:.1f}" text-anchor="end">'
            f'{tick:.2f}</text>'
        )
    x = left + gap
    for subject in subjects:
        for j, model in enumerate(models):
            v = min(max(values.get((subject, model), 0.0), 0.0), 1.0)
            h = plot_h * v
            y = top + plot_h - h
            color = _PALETTE[j % len(_PALETTE)]
            lines.append(
                f'<rect x="{x + j * bar_w:.1f}" y="{y:.1f}" '
                f'width="{bar_w - 2}" height="{h:.1f}" fill="{color}"/>'
            )
        lines.append(
            f'<text x="{x + group_w / 2:.1f}" y="{top + plot_h + 16}" '
            f'text-anchor="middle">{subject}</text>'
        )
        x += group_w + gap
    legend_x = width - 130
    for j, model in enumerate(models):
        y = top + j * 16
        color = _PALETTE[j % len(_PALETTE)]
        lines.append(
            f'<rect x="{legend_x}" y="{y}" width="10" height="10" '
            f'fill="{color}"/>'
        )
        lines.append(f'<text x="{legend_x + 14}" y="{y + 9}">{model}</text>')
    lines.append("</svg>")
    Path(path).write_text("\n".join(lines) + "\n")


def cmd_report(args) -> int:
    in_dir = Path(args.metrics)
    summary_path = in_dir / "summary.csv"
    if not summary_path.exists():
        raise DataError(f"summary CSV not found: {summary_path}")
    with open(summary_path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise DataError(f"summary CSV {summary_path} has no data rows")
    subjects = sorted({r["subject"] for r in rows})
    models = list(dict.fromkeys(r["model"] for r in rows))
    out = Path(args.out_dir) if args.out_dir else in_dir
    out.mkdir(parents=True, exist_ok=True)

    header = ["subject", "model"] + list(REPORT_METRICS)
    print(" ".join(f"{h:>16}" for h in header))
    for r in rows:
        cells = [r["subject"], r["model"]] + [
            f"{float(r[m]):.4f}" for m in REPORT_METRICS
        ]
        print(" ".join(f"{c:>16}" for c in cells))

    for metric in REPORT_METRICS:
        values = {
            (r["subject"], r["model"]): float(r[metric]) for r in rows
        }
        with open(out / f"bars_{metric}.csv", "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["subject", "model", metric])
            for subject in subjects:
                for model in models:
                    if (subject, model) in values:
                        writer.writerow(
                            [subject, model, repr(values[(subject, model)])]
                        )
        _svg_bar_chart(metric, subjects, models, values,
                       out / f"bars_{metric}.svg")
    print(f"wrote bar charts for {len(REPORT_METRICS)} metrics to {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="emgmix",
                     description="Gesture classification pipeline")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="write synthetic recordings")
    p.add_argument("--config", help="flat TOML config file")
    p.add_argument("--out-dir", help="override the configured out_dir")
    p.add_argument("--seed", type=int, help="override the configured seed")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("features", help="extract features from recordings")
    p.add_argument("--recordings", required=True,
                   help="directory of recording CSVs")
    p.add_argument("--out", required=True, help="output feature CSV")
    p.add_argument("--config", help="flat TOML config file")
    p.set_defaults(func=cmd_features)

    p = sub.add_parser("train", help="fit one model on a feature CSV")
    p.add_argument("--features", required=True, help="training feature CSV")
    p.add_argument("--model", required=True,
                   help=f"one of {', '.join(MODEL_NAMES)}")
    p.add_argument("--out", required=True, help="output model JSON")
    p.add_argument("--config", help="flat TOML config file")
    p.add_argument("--seed", type=int, help="override the configured seed")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", help="score a saved model")
    p.add_argument("--model", required=True, help="model JSON from train")
    p.add_argument("--features", required=True, help="test feature CSV")
    p.add_argument("--out-dir", required=True, help="report directory")
    p.add_argument("--subject", default="S1", help="subject name for reports")
    p.add_argument("--name", default="model", help="model name for reports")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("experiment", help="run all subjects and models")
    p.add_argument("--config", help="flat TOML config file")
    p.add_argument("--out-dir", help="override the configured out_dir")
    p.add_argument("--seed", type=int, help="override the configured seed")
    p.add_argument("--workers", type=int,
                   help="override the configured worker count")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("report", help="tables and charts from experiment CSVs")
    p.add_argument("--metrics", required=True,
                   help="directory holding summary.csv")
    p.add_argument("--out-dir", help="chart directory (default: --metrics)")
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ModelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
