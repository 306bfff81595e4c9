"""Command-line front end: detect, separate, eval and bench subcommands.

Exit codes: 0 on success, 1 when some frames or pairs failed, 2 for a bad
invocation or configuration.
"""

import argparse
import json
import os
import sys
import tempfile

from . import evaluate, pipeline, report
from .frames import read_rects

EXIT_OK = 0
EXIT_PARTIAL = 1
EXIT_USAGE = 2


def _add_config_flags(parser):
    parser.add_argument("--config", metavar="F", help="key = value config file")
    parser.add_argument("--working-size", type=int, help="square working grid side (default 256)")
    parser.add_argument("--iterations", type=int, help="separation passes (default 5)")
    parser.add_argument(
        "--weights",
        dest="subband_weights",
        metavar="W,W,W,W",
        help="sub-band weights, low to high frequency (default 0.1,0.1,1.5,1.5)",
    )
    parser.add_argument("--lambda-max", dest="lambda_max",
                        help="start threshold ('auto' derives it per frame)")
    parser.add_argument("--lambda-min", dest="lambda_min", type=float,
                        help="final threshold (default 0)")
    parser.add_argument("--tpr-window", dest="tpr_window", type=int,
                        help="presence-ratio window side (default 7)")
    parser.add_argument("--tpr-threshold", dest="tpr_threshold", type=float,
                        help="presence-ratio acceptance threshold (default 0.5)")
    parser.add_argument("--min-box", dest="min_box", type=int,
                        help="minimum box side on the working grid (default 8)")
    parser.add_argument("--jobs", type=int, help="worker processes (default 1)")


_CONFIG_KEYS = (
    "working_size",
    "iterations",
    "subband_weights",
    "lambda_max",
    "lambda_min",
    "tpr_window",
    "tpr_threshold",
    "min_box",
    "jobs",
)


def _build_config(args):
    overrides = {}
    for key in _CONFIG_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            overrides[key] = value
    return pipeline.load_pipeline_config(args.config, overrides)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="shear-text",
        description="Locate text in video frames from combined wavelet and shearlet coefficients.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_detect = sub.add_parser("detect", help="detect text boxes in frames")
    _add_config_flags(p_detect)
    p_detect.add_argument("--out", metavar="DIR", default="sheartext_out")
    p_detect.add_argument("--annotate", action="store_true", help="write frames with box overlays")
    p_detect.add_argument("--dump-cluster", action="store_true",
                          help="write the clustered text mask (text black)")
    p_detect.add_argument("--dump-refined", action="store_true",
                          help="write the refined text mask")
    p_detect.add_argument("inputs", nargs="+", metavar="INPUT",
                          help="frame files or directories")

    p_sep = sub.add_parser("separate", help="dump the separation panels for one frame")
    _add_config_flags(p_sep)
    p_sep.add_argument("--out", metavar="DIR", default="sheartext_out")
    p_sep.add_argument("--dump-coefficients", action="store_true",
                       help="also write one pseudo-colored plane per transform filter")
    p_sep.add_argument("input", metavar="INPUT")

    p_eval = sub.add_parser("eval", help="score detections against ground truth")
    p_eval.add_argument("--truth", required=True, metavar="DIR")
    p_eval.add_argument("--est", required=True, metavar="DIR")
    p_eval.add_argument("--out", metavar="REPORT.JSON", default="report.json")
    p_eval.add_argument("--alpha", type=float, default=evaluate.DEFAULT_ALPHA)
    p_eval.add_argument("--tau-detect", type=float, default=evaluate.DEFAULT_TAU_DETECT)
    p_eval.add_argument("--tau-full", type=float, default=evaluate.DEFAULT_TAU_FULL)

    p_bench = sub.add_parser("bench", help="time the pipeline per stage")
    _add_config_flags(p_bench)
    p_bench.add_argument("--out", metavar="DIR", help="also write bench.csv and bench.png")
    p_bench.add_argument("inputs", nargs="+", metavar="INPUT")
    return parser


def _write_manifest(manifest, outdir):
    path = os.path.join(outdir, "manifest.json")
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")


def cmd_detect(args):
    config = _build_config(args)
    manifest = pipeline.run_detect(
        args.inputs,
        config,
        outdir=args.out,
        annotate=args.annotate,
        dump_cluster=args.dump_cluster,
        dump_refined=args.dump_refined,
    )
    _write_manifest(manifest, args.out)
    failed = [e for e in manifest["frames"] if e["status"] != "ok"]
    for entry in failed:
        print(f"error: {entry['input']}: {entry['error']}", file=sys.stderr)
    done = len(manifest["frames"]) - len(failed)
    print(f"{done}/{len(manifest['frames'])} frames processed -> {args.out}")
    return EXIT_PARTIAL if failed else EXIT_OK


def cmd_separate(args):
    config = _build_config(args)
    try:
        written = pipeline.run_separate(
            args.input, config, outdir=args.out, dump_coefficients=args.dump_coefficients
        )
    except Exception as exc:  # noqa: BLE001
        print(f"error: {args.input}: {exc}", file=sys.stderr)
        return EXIT_PARTIAL
    for path in written:
        print(path)
    return EXIT_OK


def _collect_rect_files(directory):
    return {
        os.path.splitext(name)[0]: os.path.join(directory, name)
        for name in sorted(os.listdir(directory))
        if name.endswith(".txt")
    }


def cmd_eval(args):
    truth = _collect_rect_files(args.truth)
    est = _collect_rect_files(args.est)
    unpaired = sorted(set(truth) ^ set(est))
    for stem in unpaired:
        side = "estimate" if stem in truth else "truth"
        print(f"warning: {stem}: missing {side} file", file=sys.stderr)

    pairs = [
        evaluate.EvalPair(frame=stem, targets=read_rects(truth[stem]), estimates=read_rects(est[stem]))
        for stem in sorted(set(truth) & set(est))
    ]
    result = evaluate.evaluate_pairs(
        pairs, alpha=args.alpha, tau_detect=args.tau_detect, tau_full=args.tau_full
    )
    for frame in result.skipped:
        print(f"warning: {frame}: empty ground truth, excluded", file=sys.stderr)

    base, _ = os.path.splitext(args.out)
    evaluate.write_report_json(result, args.out)
    evaluate.write_report_csv(result, base + ".csv")
    report.save_eval_figure(result, base + ".png")

    print(
        f"frames={len(result.frames)} recall={result.recall:.4f} "
        f"precision={result.precision:.4f} f={result.fmeasure:.4f} "
        f"DR={result.blocks.dr:.4f} FPR={result.blocks.fpr:.4f} MDR={result.blocks.mdr:.4f}"
    )
    return EXIT_PARTIAL if unpaired else EXIT_OK


def cmd_bench(args):
    config = _build_config(args)
    with tempfile.TemporaryDirectory(prefix="sheartext-bench-") as scratch:
        manifest = pipeline.run_detect(args.inputs, config, outdir=scratch)
    stats = pipeline.stage_percentiles(manifest)
    failed = [e for e in manifest["frames"] if e["status"] != "ok"]

    print(f"{'stage':<12}{'p10 ms':>10}{'median ms':>12}{'p90 ms':>10}")
    total = 0.0
    for stage, (p10, p50, p90) in stats.items():
        print(f"{stage:<12}{p10:>10.1f}{p50:>12.1f}{p90:>10.1f}")
        total += p50
    print(f"{'total':<12}{'':>10}{total:>12.1f}")

    if args.out:
        os.makedirs(args.out, exist_ok=True)
        csv_path = os.path.join(args.out, "bench.csv")
        with open(csv_path, "w", encoding="utf-8") as fh:
            fh.write("stage,p10_ms,median_ms,p90_ms\n")
            for stage, (p10, p50, p90) in stats.items():
                fh.write(f"{stage},{p10:.3f},{p50:.3f},{p90:.3f}\n")
        report.save_bench_figure(stats, os.path.join(args.out, "bench.png"))
        print(f"wrote {csv_path}")
    return EXIT_PARTIAL if failed else EXIT_OK


_HANDLERS = {
    "detect": cmd_detect,
    "separate": cmd_separate,
    "eval": cmd_eval,
    "bench": cmd_bench,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except (ValueError, FileNotFoundError, NotADirectoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
