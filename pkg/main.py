import os
import sys

import numpy as np
from termcolor import colored

from mtpkit.config import default_jobs
from mtpkit.corpus import family_corpus
from mtpkit.ncd import Corpus, classify

# Published results on the annotated folk-song collection, for comparison
REFERENCE_RESULTS = {
    "2T": {"success_rate": 0.61, "corpus_cf": 1.27, "pair_cf": 1.35},
    "2TR": {"success_rate": 0.61, "corpus_cf": 1.27, "pair_cf": 1.26},
    "2STR": {"success_rate": 0.69, "corpus_cf": 1.27, "pair_cf": 1.23},
}

EXPERIMENT_HYPERPARAMS = {
    "class_ids": ["2T", "2TR", "2STR"],
    "min_size": 1,
    "gap": 1,
    "checkpoint_dir": "tmp/classify",
    "log_dir": "logs",
}


def make_writer(log_dir):
    """
    Returns a tensorboard SummaryWriter, or None when torch is not installed (the results
    table is printed either way).
    """
    try:
        from torch.utils.tensorboard import SummaryWriter
    except ImportError:
        print("torch is not installed. Results will not be logged to tensorboard")
        return None
    return SummaryWriter(log_dir)


def main(manifest=None):
    """
    Runs the tune-family classification experiment for every transformation class and
    prints success rates and mean compression factors next to the published ones. With no
    manifest argument the synthetic family corpus is used.
    """
    params = EXPERIMENT_HYPERPARAMS
    if manifest is None:
        corpus = family_corpus()
        corpus_name = "synthetic"
    else:
        corpus = Corpus.from_manifest(manifest)
        corpus_name = os.path.splitext(os.path.basename(manifest))[0]
    print(f"Corpus {corpus_name}: {len(corpus)} items, {len(set(corpus.labels))} families")

    if not os.path.exists(params["checkpoint_dir"]):
        os.makedirs(params["checkpoint_dir"])

    writer = make_writer(params["log_dir"])
    jobs = default_jobs()
    rows = []
    for step, class_id in enumerate(params["class_ids"]):
        checkpoint = os.path.join(params["checkpoint_dir"], f"{corpus_name}-{class_id}.h5")
        report = classify(corpus, class_id, params["min_size"], params["gap"], jobs=jobs, checkpoint=checkpoint)
        rows.append((class_id, report))
        distances = os.path.join(params["checkpoint_dir"], f"{corpus_name}-{class_id}-ncd.npy")
        np.save(distances, report.matrix.to_array())
        print(f"{class_id}: SR={float(report.success_rate):.2f} "
              f"CF corpus={float(report.corpus_compression_factor):.2f} "
              f"CF pairs={float(report.pair_compression_factor):.2f} (distances saved to {distances})")
        if writer is not None:
            identifier = f"{corpus_name} min_size={params['min_size']} gap={params['gap']}"
            writer.add_scalar(f"Success rate - {identifier}", float(report.success_rate), global_step=step)
            writer.add_scalar(f"Corpus CF - {identifier}", float(report.corpus_compression_factor), global_step=step)
            writer.add_scalar(f"Pair CF - {identifier}", float(report.pair_compression_factor), global_step=step)
    if writer is not None:
        writer.close()

    print()
    print(colored(f"{'class':<6}{'SR':>8}{'ref':>8}{'CF':>8}{'ref':>8}{'CF pair':>9}{'ref':>8}", attrs=["bold"]))
    for class_id, report in rows:
        ref = REFERENCE_RESULTS[class_id]
        print(f"{class_id:<6}{float(report.success_rate):>8.2f}{ref['success_rate']:>8.2f}"
              f"{float(report.corpus_compression_factor):>8.2f}{ref['corpus_cf']:>8.2f}"
              f"{float(report.pair_compression_factor):>9.2f}{ref['pair_cf']:>8.2f}")


if __name__ == '__main__':
    main(sys.argv[1] if len(sys.argv) > 1 else None)
