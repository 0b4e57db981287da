"""
A small synthetic tune-family corpus for exercising the classifier without a folk-song
collection. Each family is a seed melody plus transposed and retrograde variants, all
as (onset, pitch) point sets.
"""
from pathlib import Path

from mtpkit.geometry import Dataset, to_scalar
from mtpkit.io_formats import serialize_dataset
from mtpkit.ncd import Corpus, CorpusItem

SEED_MELODIES = {
    "rise": [(0, 60), (1, 64), (2, 67), (3, 72), (5, 71), (6, 67), (7, 62), (9, 60)],
    "fall": [(0, 55), (2, 57), (3, 59), (4, 60), (5, 66), (7, 63), (8, 58), (10, 56)],
    "arch": [(0, 70), (1, 69), (3, 65), (4, 74), (6, 68), (7, 73), (8, 61), (11, 66)],
}

# (variant, pitch offset); retrogrades with a zero offset map the pair onto itself
FAMILY_VARIANTS = (("transpose", 0), ("transpose", 5), ("retrograde", 3), ("retrograde", 8))


def transpose(dataset, offset):
    offset = to_scalar(offset)
    return Dataset.collect(((t, p + offset) for t, p in dataset.points), dataset.dimension)


def retrograde(dataset, offset=0):
    """Reverses a melody in time, keeping its time span, and transposes it by `offset`."""
    offset = to_scalar(offset)
    span = dataset.min_coordinate(0) + dataset.max_coordinate(0)
    return Dataset.collect(((span - t, p + offset) for t, p in dataset.points), dataset.dimension)


VARIANTS = {"transpose": transpose, "retrograde": retrograde}


def family_corpus(seeds=None, variants=FAMILY_VARIANTS):
    """
    Builds a labelled corpus with one family per seed melody.

    Parameters:
    seeds (dict): family label -> list of (onset, pitch) points. Defaults to SEED_MELODIES.
    variants (sequence): (variant name, pitch offset) pairs, one corpus item each.

    Returns:
    Corpus: items named "<label>-<n>" and labelled with their family.
    """
    seeds = SEED_MELODIES if seeds is None else seeds
    items = []
    for label, points in seeds.items():
        melody = Dataset(points)
        for n, (variant, offset) in enumerate(variants):
            items.append(CorpusItem(f"{label}-{n}", label, VARIANTS[variant](melody, offset)))
    return Corpus(items)


def write_corpus(corpus, directory):
    """Writes one point-set file per item plus a `manifest.tsv`; returns the manifest path."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    lines = []
    for item in corpus:
        filename = f"{item.name}.pts"
        (directory / filename).write_text(serialize_dataset(item.dataset), encoding="utf-8")
        lines.append(f"{filename}\t{item.label}")
    manifest = directory / "manifest.tsv"
    manifest.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return manifest
