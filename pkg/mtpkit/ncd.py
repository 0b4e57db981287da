import logging
import multiprocessing
import os
from dataclasses import dataclass
from fractions import Fraction

import h5py
import numpy as np
from tqdm import tqdm

from mtpkit.encoder import MTPEncoder
from mtpkit.errors import CheckpointError, DimensionMismatchError, MtpkitError
from mtpkit.geometry import Dataset, to_scalar
from mtpkit.io_formats import read_manifest

logger = logging.getLogger(__name__)

DEFAULT_GAP = Fraction(1)
CHECKPOINT_EVERY = 50
MISSING = -1


@dataclass(frozen=True)
class CorpusItem:
    name: str
    label: str
    dataset: Dataset


class Corpus:
    """
    An ordered collection of labelled datasets, e.g. folk-song melodies labelled with
    their tune family. Names are unique and all datasets share one dimension.
    """

    def __init__(self, items):
        self.items = [item if isinstance(item, CorpusItem) else CorpusItem(*item) for item in items]
        names = [item.name for item in self.items]
        if len(set(names)) != len(names):
            raise MtpkitError("corpus item names must be unique")
        dimensions = {item.dataset.dimension for item in self.items if len(item.dataset)}
        if len(dimensions) > 1:
            raise DimensionMismatchError(f"corpus mixes dimensions {sorted(dimensions)}")

    @classmethod
    def from_manifest(cls, path):
        return cls(read_manifest(path))

    @property
    def names(self):
        return [item.name for item in self.items]

    @property
    def labels(self):
        return [item.label for item in self.items]

    @property
    def datasets(self):
        return [item.dataset for item in self.items]

    def __len__(self):
        return len(self.items)

    def __getitem__(self, index):
        return self.items[index]

    def __iter__(self):
        return iter(self.items)


def build_pair_dataset(first, second, gap=DEFAULT_GAP):
    """
    Concatenates two datasets in time: `second` is shifted along the first axis so that
    it starts `gap` time units after the end of `first`. Pitches are untouched, so the
    result has |first| + |second| points.
    """
    gap = to_scalar(gap)
    if gap <= 0:
        raise MtpkitError(f"gap must be positive, got {gap}")
    if not len(first) or not len(second):
        raise MtpkitError("cannot pair an empty dataset")
    if first.dimension != second.dimension:
        raise DimensionMismatchError(f"cannot pair dimension {first.dimension} with {second.dimension}")
    shift = first.max_coordinate(0) - second.min_coordinate(0) + gap
    shifted = ((p[0] + shift,) + p[1:] for p in second.points)
    return Dataset.collect(list(first.points) + list(shifted), first.dimension)


def ncd_from_lengths(c_first, c_second, c_pair):
    return Fraction(c_pair - min(c_first, c_second), max(c_first, c_second))


def ncd(first, second, class_id="2T", s_min=1, gap=DEFAULT_GAP, compressor=None, jobs=1):
    """
    Normalized compression distance between two datasets, with the description length
    of their MTP encodings as compressed length:
    (C(xy) - min(C(x), C(y))) / max(C(x), C(y)).

    `jobs` is the worker count of the default MTPEncoder; it is ignored when a
    compressor is given.
    """
    compressor = compressor or MTPEncoder(class_id, s_min, jobs)
    return ncd_from_lengths(compressor(first), compressor(second),
                            compressor(build_pair_dataset(first, second, gap)))


class DistanceMatrix:
    """
    Pairwise compression distances over a corpus, kept as the underlying description
    lengths: one per item and one per unordered pair. Distances are derived exactly from
    them, so the matrix is symmetric and its diagonal is zero (and unused).

    Parameters:
    names (list of str): Item names, in corpus order.
    single_lengths (list of int): Description length of each item (MISSING if unknown).
    pair_lengths (list of list of int): Description length of each pair dataset, stored
        at [i][j] for i < j (MISSING if unknown).
    settings (dict): The class id, minimum size and gap the lengths were computed with.
    """

    def __init__(self, names, single_lengths=None, pair_lengths=None, settings=None):
        m = len(names)
        self.names = list(names)
        self.single_lengths = list(single_lengths) if single_lengths is not None else [MISSING] * m
        self.pair_lengths = [list(row) for row in pair_lengths] if pair_lengths is not None \
            else [[MISSING] * m for _ in range(m)]
        self.settings = dict(settings or {})
        self.encoder_calls = 0

    @property
    def size(self):
        return len(self.names)

    def pair_length(self, i, j):
        return self.pair_lengths[min(i, j)][max(i, j)]

    def is_complete(self):
        m = self.size
        return MISSING not in self.single_lengths and all(
            self.pair_lengths[i][j] != MISSING for i in range(m) for j in range(i + 1, m))

    def distance(self, i, j):
        if i == j:
            return Fraction(0)
        return ncd_from_lengths(self.single_lengths[i], self.single_lengths[j], self.pair_length(i, j))

    @property
    def entries(self):
        return [[self.distance(i, j) for j in range(self.size)] for i in range(self.size)]

    def to_array(self):
        return np.array([[float(d) for d in row] for row in self.entries], dtype=np.float64)

    def save_checkpoint(self, path):
        """
        Saves the description lengths computed so far to an HDF5 file, so an interrupted
        run can pick up where it stopped.
        """
        with h5py.File(path, "w") as f:
            f.create_dataset("names", data=np.array(self.names, dtype=h5py.string_dtype()))
            f.create_dataset("single_lengths", data=np.array(self.single_lengths, dtype=np.int64))
            f.create_dataset("pair_lengths", data=np.array(self.pair_lengths, dtype=np.int64).reshape(self.size, self.size))
            for key, value in self.settings.items():
                f.attrs[key] = str(value)

    @classmethod
    def load_checkpoint(cls, path):
        try:
            with h5py.File(path, "r") as f:
                names = list(f["names"].asstr()[()])
                single = [int(v) for v in f["single_lengths"][()]]
                pairs = [[int(v) for v in row] for row in f["pair_lengths"][()]] if names else []
                settings = {key: str(value) for key, value in f.attrs.items()}
        except (OSError, KeyError) as e:
            raise CheckpointError(f"cannot read checkpoint {path}: {e}") from e
        return cls(names, single, pairs, settings)


def _settings(compressor, gap):
    return {
        "class_id": getattr(compressor, "class_id", "custom"),
        "s_min": getattr(compressor, "s_min", "-"),
        "gap": str(to_scalar(gap)),
    }


def _resume(checkpoint, names, settings):
    """
    Loads a matching checkpoint, or returns None to start from scratch (a missing,
    unreadable or mismatched file is reported and ignored).
    """
    if checkpoint is None or not os.path.exists(checkpoint):
        return None
    try:
        matrix = DistanceMatrix.load_checkpoint(checkpoint)
    except CheckpointError as e:
        print(f"Failed to load checkpoint ({e}). Starting from scratch")
        return None
    wanted = {key: str(value) for key, value in settings.items()}
    if matrix.names != names or matrix.settings != wanted:
        print(f"Checkpoint {checkpoint} belongs to another corpus or settings. Starting from scratch")
        return None
    print(f"Successfully loaded checkpoint {checkpoint}")
    return matrix


def _encode_job(args):
    compressor, key, dataset = args
    return key, compressor(dataset)


def distance_matrix(corpus, compressor=None, gap=DEFAULT_GAP, jobs=1, checkpoint=None,
                    checkpoint_every=CHECKPOINT_EVERY, progress=True):
    """
    Computes the description lengths behind all pairwise distances of a corpus. Each item
    is encoded once and each unordered pair once (its distance is used for both [i][j]
    and [j][i]), i.e. m + m(m-1)/2 encoder calls for m items.

    Parameters:
    corpus (Corpus): The labelled datasets.
    compressor (callable): Maps a dataset to its description length. Defaults to an
        MTPEncoder for translations.
    gap (Fraction): Time gap between the two halves of a pair dataset.
    jobs (int): Worker processes encoding items and pairs concurrently.
    checkpoint (str | None): HDF5 file to resume from and to save progress to.
    checkpoint_every (int): Pairs between checkpoint saves.
    progress (bool): Show a progress bar.

    Returns:
    DistanceMatrix
    """
    if not len(corpus):
        raise MtpkitError("cannot compute distances over an empty corpus")
    compressor = compressor or MTPEncoder()
    settings = _settings(compressor, gap)
    matrix = _resume(checkpoint, corpus.names, settings) or DistanceMatrix(corpus.names, settings=settings)

    datasets = corpus.datasets
    m = len(corpus)
    todo = [(("single", i, i), datasets[i]) for i in range(m) if matrix.single_lengths[i] == MISSING]
    todo += [(("pair", i, j), None) for i in range(m) for j in range(i + 1, m)
             if matrix.pair_lengths[i][j] == MISSING]
    logger.info("Distance matrix over %d items: %d encodings to compute", m, len(todo))

    def jobs_iter():
        for key, dataset in todo:
            if dataset is None:
                dataset = build_pair_dataset(datasets[key[1]], datasets[key[2]], gap)
            yield compressor, key, dataset

    def record(key, length):
        kind, i, j = key
        if kind == "single":
            matrix.single_lengths[i] = length
        else:
            matrix.pair_lengths[i][j] = length
        matrix.encoder_calls += 1
        if checkpoint is not None and matrix.encoder_calls % checkpoint_every == 0:
            matrix.save_checkpoint(checkpoint)

    bar = tqdm(total=len(todo), desc="Encoding", unit="dataset", disable=not progress)
    if jobs > 1 and len(todo) > 1:
        with multiprocessing.Pool(jobs) as pool:
            for key, length in pool.imap_unordered(_encode_job, jobs_iter(), chunksize=1):
                record(key, length)
                bar.update(1)
    else:
        for args in jobs_iter():
            record(*_encode_job(args))
            bar.update(1)
    bar.close()

    if checkpoint is not None:
        matrix.save_checkpoint(checkpoint)
    return matrix


def _rows(matrix):
    return matrix.entries if isinstance(matrix, DistanceMatrix) else matrix


def loocv_predictions(matrix, labels):
    """
    Leave-one-out 1-nearest-neighbour predictions: item i gets the label of the item
    j != i at the smallest distance entries[i][j], the smallest index winning ties.
    """
    rows = _rows(matrix)
    m = len(rows)
    if m < 2 or len(labels) != m:
        raise MtpkitError(f"need at least 2 items and one label per item, got {m} items and {len(labels)} labels")
    predictions = []
    for i in range(m):
        nearest = min((j for j in range(m) if j != i), key=lambda j: (rows[i][j], j))
        predictions.append(labels[nearest])
    return predictions


def one_nn_loocv(matrix, labels):
    """
    Success rate of leave-one-out 1-nearest-neighbour classification.

    Parameters:
    matrix (DistanceMatrix | sequence of rows): Pairwise distances; only the ordering of
        each row matters.
    labels (list): The class label of each item.

    Returns:
    Fraction: The share of items whose nearest other item has the same label.
    """
    predictions = loocv_predictions(matrix, labels)
    hits = sum(1 for predicted, actual in zip(predictions, labels) if predicted == actual)
    return Fraction(hits, len(labels))


def mean_corpus_compression_factor(matrix, corpus):
    """
    Average over the corpus items of k|D| / C(D).

    Parameters:
    matrix (DistanceMatrix): Holds the description length of every item.
    corpus (Corpus): The items, in matrix order.

    Returns:
    Fraction: The mean compression factor.
    """
    k = corpus[0].dataset.dimension
    factors = [Fraction(k * len(item.dataset), length)
               for item, length in zip(corpus, matrix.single_lengths)]
    return sum(factors) / len(factors)


def mean_pair_compression_factor(matrix, corpus):
    """
    Average over all unordered pairs of items of the compression factor of their pair
    dataset.

    Parameters:
    matrix (DistanceMatrix): Holds the description length of every pair dataset.
    corpus (Corpus): The items, in matrix order.

    Returns:
    Fraction | None: The mean compression factor, None for fewer than two items.
    """
    m = len(corpus)
    if m < 2:
        return None
    k = corpus[0].dataset.dimension
    factors = [Fraction(k * (len(corpus[i].dataset) + len(corpus[j].dataset)), matrix.pair_lengths[i][j])
               for i in range(m) for j in range(i + 1, m)]
    return sum(factors) / len(factors)


@dataclass
class ClassificationReport:
    names: list
    labels: list
    predictions: list
    success_rate: Fraction
    corpus_compression_factor: Fraction
    pair_compression_factor: Fraction
    matrix: DistanceMatrix


def classify(corpus, class_id="2T", s_min=1, gap=DEFAULT_GAP, jobs=1, checkpoint=None, progress=True):
    """
    Runs the tune-family experiment on a corpus: distances between all items, 1-NN
    leave-one-out classification and the average compression factors over single items
    and over pair datasets.
    """
    encoder = MTPEncoder(class_id, s_min)
    matrix = distance_matrix(corpus, encoder, gap=gap, jobs=jobs, checkpoint=checkpoint, progress=progress)
    predictions = loocv_predictions(matrix, corpus.labels)
    return ClassificationReport(
        names=corpus.names,
        labels=corpus.labels,
        predictions=predictions,
        success_rate=one_nn_loocv(matrix, corpus.labels),
        corpus_compression_factor=mean_corpus_compression_factor(matrix, corpus),
        pair_compression_factor=mean_pair_compression_factor(matrix, corpus),
        matrix=matrix,
    )
