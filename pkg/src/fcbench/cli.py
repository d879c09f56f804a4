"""Command-line interface: ``fcbench validate|synth|run|plot|report``.

Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.
"""

from __future__ import annotations

import argparse
import logging
import sys
import traceback
import warnings

from .config import ConfigError, load_config
from .plotting import PLOT_KINDS, PlotError, make_plot
from .report import build_report
from .runner import ResultsError, read_manifest, read_results, run_experiment
from .series import (
    DEFAULT_CAP,
    DEFAULT_MIN_LENGTH,
    CorpusError,
    read_corpus_rows,
    read_metadata,
    resolve_corpus_paths,
    write_corpus,
)
from .synth import FAMILIES, synth_corpus

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def cmd_validate(args) -> int:
    data_path, meta_path = resolve_corpus_paths(args.corpus)
    rows = read_corpus_rows(data_path, args.cap)
    meta = read_metadata(meta_path)
    missing = sorted(set(rows) - set(meta))
    if missing:
        raise CorpusError(f"series without metadata in {meta_path}: {', '.join(missing)}")
    n_fail = 0
    print(f"{'series_id':<24} {'length':>7} {'period':>6}  status")
    for sid, values in rows.items():
        period = meta[sid][0]
        need = max(args.min_length, 2 * period if period > 1 else 0)
        ok = len(values) >= need
        n_fail += not ok
        status = "pass" if ok else f"FAIL (shorter than {need})"
        print(f"{sid:<24} {len(values):>7} {period:>6}  {status}")
    print(f"{len(rows)} series, {len(rows) - n_fail} pass, {n_fail} rejected")
    return EXIT_OK


def cmd_synth(args) -> int:
    mix = tuple(f.strip() for f in args.mix.split(",") if f.strip())
    try:
        series = synth_corpus(args.n, args.len, args.seed, mix)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    data, meta = write_corpus(series, args.out)
    print(f"wrote {len(series)} series to {data} (metadata {meta})")
    return EXIT_OK


_OVERRIDES = {
    "corpus": "corpus_path", "models": "models", "horizon": "horizon", "start": "start",
    "cap": "cap", "embed_p": "embed_p", "smooth_window": "smooth_window",
    "tune_every": "tune_every", "seed": "seed", "mode": "preprocess_mode",
    "workers": "workers", "out": "output_dir",
}


def cmd_run(args) -> int:
    overrides = {key: getattr(args, flag) for flag, key in _OVERRIDES.items()}
    try:
        config = load_config(args.config, overrides)
    except ConfigError as exc:
        raise UsageError(str(exc)) from None
    if not args.quiet:
        logging.basicConfig(level=logging.INFO, format="%(asctime)s %(message)s")
    manifest = run_experiment(config)
    fails = sum(c["failed"] for c in manifest["failures"].values())
    print(f"{manifest['records']} records for {len(manifest['series'])} series x "
          f"{len(manifest['models'])} models in {manifest['wall_time_s']:.1f}s "
          f"({fails} failed); outputs in {config.output_dir}")
    return EXIT_OK


def cmd_plot(args) -> int:
    records = read_results(args.inp)
    window = 50
    try:
        window = int(read_manifest(args.inp)["config"]["smooth_window"])
    except (ResultsError, KeyError, TypeError):
        pass
    kinds = PLOT_KINDS if args.kind == "all" else (args.kind,)
    for kind in kinds:
        path = make_plot(records, kind, args.out, window)
        print(path)
    return EXIT_OK


def cmd_report(args) -> int:
    record_sets, manifests = [], []
    for run_dir in args.inp:
        record_sets.append(read_results(run_dir))
        try:
            manifests.append(read_manifest(run_dir))
        except ResultsError:
            manifests.append(None)
    sys.stdout.write(build_report(record_sets, manifests))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fcbench", description="Prequential forecasting benchmark.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("validate", help="check a corpus file")
    p.add_argument("corpus")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.add_argument("--min-length", type=int, default=DEFAULT_MIN_LENGTH)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("synth", help="generate a synthetic corpus")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--len", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--mix", default=",".join(FAMILIES),
                   help=f"comma-separated family cycle (default {','.join(FAMILIES)})")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("run", help="run a prequential experiment")
    p.add_argument("--config")
    p.add_argument("--corpus")
    p.add_argument("--models")
    p.add_argument("--horizon", type=int)
    p.add_argument("--start", type=int)
    p.add_argument("--cap", type=int)
    p.add_argument("--embed-p", dest="embed_p", type=int)
    p.add_argument("--smooth-window", dest="smooth_window", type=int)
    p.add_argument("--tune-every", dest="tune_every", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--mode", choices=("global", "strict"))
    p.add_argument("--workers", type=int)
    p.add_argument("--out")
    p.add_argument("--quiet", action="store_true")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("plot", help="render SVG figures from a run directory")
    p.add_argument("--kind", required=True, choices=PLOT_KINDS + ("all",))
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_plot)

    p = sub.add_parser("report", help="print average-rank tables and diagnostics")
    p.add_argument("--in", dest="inp", required=True, nargs="+")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            return args.func(args)
    except UsageError as exc:
        print(f"fcbench: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CorpusError, ResultsError, PlotError) as exc:
        print(f"fcbench: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except Exception:  # pragma: no cover - last-resort guard
        traceback.print_exc()
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
