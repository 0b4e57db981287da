"""
Command-line entry point: `python -m mtpkit <command> ...`.

    mtps      list the maximal transformable patterns of a dataset
    encode    compress a dataset into an encoding file
    decode    expand an encoding file back into its dataset
    ncd       compression distance between two datasets
    classify  1-NN leave-one-out tune-family classification over a manifest

Exit status is 0 on success and 2 on any input, parse or configuration error.
"""
import argparse
import logging
import sys
from pathlib import Path

from termcolor import colored

from mtpkit.config import DEFAULT_CLASS_ID, DEFAULT_GAP, DEFAULT_MIN_SIZE, CliConfig, default_jobs
from mtpkit.discovery import maximal_transformable_patterns
from mtpkit.encoder import decode, encode_point_set
from mtpkit.errors import MtpkitError
from mtpkit.geometry import format_point
from mtpkit.io_formats import read_dataset, read_encoding, serialize_dataset, serialize_encoding
from mtpkit.ncd import Corpus, classify, ncd
from mtpkit.transforms import CLI_CLASS_IDS, get_transformation_class

EXIT_OK = 0
EXIT_ERROR = 2


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--class", dest="class_id", choices=CLI_CLASS_IDS, default=DEFAULT_CLASS_ID,
                        help="transformation class (default: %(default)s)")
    common.add_argument("--min-size", type=int, default=DEFAULT_MIN_SIZE,
                        help="minimum MTP size (default: %(default)s)")
    common.add_argument("--gap", default=str(DEFAULT_GAP),
                        help="time gap between the halves of a pair dataset (default: %(default)s)")
    common.add_argument("--jobs", type=int, default=None,
                        help="worker processes (default: $MTPKIT_JOBS or the number of cores)")
    common.add_argument("--output", default=None, help="write the result here instead of stdout")
    common.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")

    parser = argparse.ArgumentParser(prog="mtpkit", description="Pattern discovery and compression for point sets.")
    commands = parser.add_subparsers(dest="command", required=True)
    commands.add_parser("mtps", parents=[common], help="list MTPs").add_argument("dataset")
    commands.add_parser("encode", parents=[common], help="encode a dataset").add_argument("dataset")
    commands.add_parser("decode", parents=[common], help="decode an encoding").add_argument("encoding")
    pair = commands.add_parser("ncd", parents=[common], help="distance between two datasets")
    pair.add_argument("first")
    pair.add_argument("second")
    corpus = commands.add_parser("classify", parents=[common], help="classify a labelled corpus")
    corpus.add_argument("manifest")
    corpus.add_argument("--checkpoint", default=None, help="HDF5 file to resume from and save progress to")
    corpus.add_argument("--no-progress", action="store_true", help="hide the progress bar")
    return parser


def _config(args):
    inputs = tuple(getattr(args, name) for name in ("dataset", "encoding", "first", "second", "manifest")
                   if getattr(args, name, None) is not None)
    jobs = args.jobs if args.jobs is not None else default_jobs()
    return CliConfig(command=args.command, class_id=args.class_id, min_size=args.min_size, gap=args.gap,
                     jobs=jobs, inputs=inputs, output=args.output)


def _emit(text, config):
    if config.output is None:
        sys.stdout.write(text)
    else:
        Path(config.output).write_text(text, encoding="utf-8")


def cmd_mtps(config, args):
    dataset = read_dataset(config.inputs[0])
    cls = get_transformation_class(config.class_id)
    records = maximal_transformable_patterns(dataset, cls, config.min_size, jobs=config.jobs)
    lines = [f"{r.transformation} " + " ".join(format_point(p) for p in r.pattern.sorted_points())
             for r in records]
    lines.append(f"{len(records)} MTPs")
    _emit("\n".join(lines) + "\n", config)


def stats_line(encoding):
    factor = encoding.compression_factor
    return (f"DL={encoding.description_length} extensional={encoding.extensional_length} "
            f"CF={factor} ({float(factor):.4f})")


def cmd_encode(config, args):
    dataset = read_dataset(config.inputs[0])
    encoding = encode_point_set(dataset, get_transformation_class(config.class_id), config.min_size, config.jobs)
    _emit(serialize_encoding(encoding), config)
    # stdout may be the encoding itself
    print(stats_line(encoding), file=sys.stderr if config.output is None else sys.stdout)


def cmd_decode(config, args):
    _emit(serialize_dataset(decode(read_encoding(config.inputs[0]))), config)


def cmd_ncd(config, args):
    first, second = (read_dataset(path) for path in config.inputs)
    value = ncd(first, second, config.class_id, config.min_size, config.gap, jobs=config.jobs)
    _emit(f"{value} ({float(value):.4f})\n", config)


def cmd_classify(config, args):
    corpus = Corpus.from_manifest(config.inputs[0])
    report = classify(corpus, config.class_id, config.min_size, config.gap, jobs=config.jobs,
                      checkpoint=args.checkpoint, progress=not args.no_progress)
    lines = [f"{name}\t{label}\t{predicted}"
             for name, label, predicted in zip(report.names, report.labels, report.predictions)]
    lines.append(f"SR={report.success_rate} ({float(report.success_rate):.4f})")
    lines.append(f"CF corpus={float(report.corpus_compression_factor):.4f}")
    if report.pair_compression_factor is not None:
        lines.append(f"CF pairs={float(report.pair_compression_factor):.4f}")
    _emit("\n".join(lines) + "\n", config)


COMMANDS = {
    "mtps": cmd_mtps,
    "encode": cmd_encode,
    "decode": cmd_decode,
    "ncd": cmd_ncd,
    "classify": cmd_classify,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.verbose:
        logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    try:
        config = _config(args)
        COMMANDS[config.command](config, args)
    except (MtpkitError, OSError) as e:
        print(colored(f"error: {e}", "red"), file=sys.stderr)
        return EXIT_ERROR
    return EXIT_OK
