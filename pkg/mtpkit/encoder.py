import logging
import multiprocessing
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from mtpkit.discovery import maximal_transformable_patterns, partition_indices
from mtpkit.errors import ClassMismatchError, DimensionMismatchError, MtpkitError
from mtpkit.geometry import Dataset
from mtpkit.transforms import complexity_rank, get_transformation_class

logger = logging.getLogger(__name__)

# below this many occurrence sets the superset lookups are cheaper than starting a pool
AUGMENT_PARALLEL_MIN_SETS = 5000


@dataclass(frozen=True)
class OccurrenceSet:
    """
    A pattern P together with a set T of transformations that map P onto other subsets
    of the dataset. The pair <P, T> describes the covered set P u f(P) for f in T using
    k|P| + K|T| values. T is kept sorted by parameter vector and free of repeats.
    """

    pattern: Dataset
    transformations: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "transformations", tuple(sorted(set(self.transformations))))

    @cached_property
    def images(self):
        return tuple(_image(f, self.pattern) for f in self.transformations)

    @cached_property
    def covered(self):
        points = set(self.pattern.points)
        for image in self.images:
            points |= image
        return Dataset.collect(points, self.pattern.dimension)


def _image(f, pattern):
    cls = f.transformation_class
    return frozenset(cls.apply_sigma(f.sigma, p) for p in pattern.points)


class SizeIndex:
    """
    Records (MTPRecords or OccurrenceSets) indexed by pattern size: `by_size[i]` lists the
    records whose pattern has i points, sorted by pattern, and `sizes` lists the occupied
    sizes in increasing order.
    """

    def __init__(self, by_size):
        self.by_size = by_size
        self.sizes = [i for i, entries in enumerate(by_size) if entries]

    def __iter__(self):
        for m in self.sizes:
            yield from self.by_size[m]

    def __len__(self):
        return sum(len(self.by_size[m]) for m in self.sizes)


@dataclass(frozen=True)
class Encoding:
    """
    A lossless description of a dataset: the admitted occurrence sets in admission order
    plus the residual points that none of them covers.
    """

    occurrence_sets: tuple
    residual: Dataset
    dimension: int
    class_id: str

    def blocks(self):
        """All <P, T> pairs of the encoding, the residual last as <R, {}> when non-empty."""
        blocks = list(self.occurrence_sets)
        if len(self.residual):
            blocks.append(OccurrenceSet(self.residual, ()))
        return blocks

    @property
    def transformation_class(self):
        return get_transformation_class(self.class_id)

    @property
    def covered_points(self):
        points = set()
        for os in self.occurrence_sets:
            points |= os.covered.points
        return Dataset.collect(points, self.dimension)

    @property
    def description_length(self):
        complexity = self.transformation_class.complexity
        return sum(description_length(os, self.dimension, complexity) for os in self.blocks())

    @property
    def extensional_length(self):
        return self.dimension * len(decode(self))

    @property
    def compression_factor(self):
        length = self.description_length
        if length == 0:
            return Fraction(1)
        return Fraction(self.extensional_length, length)


def covered_set(os):
    """
    Returns:
    Dataset: The points described by the occurrence set, P together with f(P) for every f in T.
    """
    return os.covered


def description_length(os, k, complexity):
    """
    Number of values needed to write an occurrence set down.

    Parameters:
    os (OccurrenceSet): The pair <P, T>.
    k (int): Dimension of the points.
    complexity (int): Length K of the parameter vectors.

    Returns:
    int: k|P| + K|T|.
    """
    return k * len(os.pattern) + complexity * len(os.transformations)


def compression_factor(os, k, complexity):
    return Fraction(k * len(os.covered), description_length(os, k, complexity))


def smallest_compressible_size(cls):
    """
    The smallest pattern size whose occurrence sets can compress under `cls`. A pattern
    of m points with k*m <= K covers at most m(1 + |T|) points for k*m + K|T| values, so
    its compression factor never exceeds 1. Such sets also never augment larger ones, so
    leaving their MTPs out does not change an encoding.
    """
    return cls.complexity // cls.dimension + 1


def index_mtps(records, n):
    by_size = [[] for _ in range(n + 1)]
    for record in records:
        size = len(record.pattern)
        if size > n:
            raise MtpkitError(f"pattern of size {size} does not fit a dataset of {n} points")
        by_size[size].append(record)
    for entries in by_size:
        # each distinct pattern is ordered once; records then sort on (rank, sigma)
        rank = {pattern: r for r, pattern in enumerate(sorted({e.pattern for e in entries}))}
        entries.sort(key=lambda e: (rank[e.pattern], e.transformation.sigma))
    return SizeIndex(by_size)


def merge_mtps(index):
    by_size = [[] for _ in index.by_size]
    for m in index.sizes:
        groups = {}
        for record in index.by_size[m]:
            groups.setdefault(record.pattern, []).append(record.transformation)
        by_size[m] = [OccurrenceSet(pattern, tuple(transformations)) for pattern, transformations in groups.items()]
    return SizeIndex(by_size)


_AUGMENT_STATE = {}


def _init_augment_worker(patterns, containing):
    _AUGMENT_STATE.update(patterns=patterns, containing=containing)


def _superset_positions(patterns, containing, position):
    """Positions of the patterns that are proper supersets of patterns[position]."""
    pattern_ids = patterns[position]
    candidates = sorted((containing[p] for p in pattern_ids), key=len)
    supersets = candidates[0].intersection(*candidates[1:])
    return [other for other in supersets if len(patterns[other]) > len(pattern_ids)]


def _augment_chunk(positions):
    patterns, containing = _AUGMENT_STATE["patterns"], _AUGMENT_STATE["containing"]
    return [(position, _superset_positions(patterns, containing, position)) for position in positions]


def augment_occurrence_sets(index, jobs=1):
    """
    Adds to each occurrence set <P, T> the transformations of every occurrence set whose
    pattern is a proper superset of P: a transformation that maps Q into the dataset maps
    every subset of Q into it too. Works on a copy.

    The supersets of P are found by intersecting, over the points of P, the sets of
    patterns containing each point. The index is only read, so with jobs > 1 and enough
    occurrence sets the lookups run on a worker pool.
    """
    entries = list(index)
    point_ids = {}
    containing = []
    patterns = []
    for position, os in enumerate(entries):
        ids = []
        for p in os.pattern.points:
            pid = point_ids.get(p)
            if pid is None:
                pid = point_ids[p] = len(containing)
                containing.append(set())
            containing[pid].add(position)
            ids.append(pid)
        patterns.append(ids)

    if jobs > 1 and len(patterns) >= AUGMENT_PARALLEL_MIN_SETS:
        supersets = [None] * len(patterns)
        with multiprocessing.Pool(jobs, initializer=_init_augment_worker, initargs=(patterns, containing)) as pool:
            for chunk in pool.imap_unordered(_augment_chunk, partition_indices(len(patterns), jobs)):
                for position, found in chunk:
                    supersets[position] = found
    else:
        supersets = [_superset_positions(patterns, containing, position) for position in range(len(patterns))]

    by_size = [[] for _ in index.by_size]
    for os, found in zip(entries, supersets):
        if found:
            extra = tuple(f for other in found for f in entries[other].transformations)
            os = OccurrenceSet(os.pattern, os.transformations + extra)
        by_size[len(os.pattern)].append(os)
    return SizeIndex(by_size)


def _occurrences(os):
    return frozenset((frozenset(os.pattern.points),) + os.images)


def dedupe_and_sort(entries):
    """
    Sorts occurrence sets by pattern and drops every set that describes the same
    occurrences (the same collection of patterns) as an earlier one.
    """
    seen = set()
    unique = []
    for os in sorted(entries, key=lambda os: (os.pattern.sorted_points(), [f.sigma for f in os.transformations])):
        key = _occurrences(os)
        if key not in seen:
            seen.add(key)
            unique.append(os)
    return unique


def _preference(f):
    return complexity_rank(f), f.sigma


def remove_redundant_transformations(os):
    """
    Removes as many transformations from T as possible without shrinking the covered set
    of <P, T>.

    First, of two transformations mapping P onto the same image only the simpler one is
    kept (lower complexity rank, then smaller parameter vector). Then the remaining
    transformations are visited from the most to the least complex and each one whose
    image is entirely covered by P and the other kept images is dropped.
    """
    pattern = os.pattern
    by_image = {}
    for f, image in zip(os.transformations, os.images):
        kept = by_image.get(image)
        if kept is None or _preference(f) < _preference(kept):
            by_image[image] = f

    counts = Counter(pattern.points)
    for image in by_image:
        counts.update(image)

    for image, f in sorted(by_image.items(), key=lambda item: _preference(item[1]), reverse=True):
        if all(counts[p] > 1 for p in image):
            for p in image:
                counts[p] -= 1
            del by_image[image]

    return OccurrenceSet(pattern, tuple(by_image.values()))


def compute_occurrence_sets(index, jobs=1):
    augmented = augment_occurrence_sets(index, jobs=jobs)
    by_size = [[] for _ in index.by_size]
    for m in augmented.sizes:
        entries = dedupe_and_sort(augmented.by_size[m])
        entries = [remove_redundant_transformations(os) for os in entries]
        by_size[m] = [os for os in entries if os.transformations]
    return SizeIndex(by_size)


def sort_occurrence_sets(index, k, complexity):
    """
    Orders occurrence sets from most to least preferred: decreasing compression factor,
    then decreasing coverage, then increasing pattern. Sets that do not compress (factor
    at most 1) can never be admitted and are left out.
    """
    ranked = []
    for os in index:
        factor = compression_factor(os, k, complexity)
        if factor > 1:
            ranked.append((-factor, -len(os.covered), os.pattern.sorted_points(), os))
    ranked.sort(key=lambda item: item[:3])
    return [item[3] for item in ranked]


def compute_encoding(sorted_sets, dataset, cls):
    """
    Greedily admits occurrence sets in preference order. A set is admitted when its
    description length is strictly less than k times the number of points it would add
    to the covered points; whatever stays uncovered becomes the residual.
    """
    k = dataset.dimension
    covered = set()
    admitted = []
    for os in sorted_sets:
        new_points = os.covered.points - covered
        if description_length(os, k, cls.complexity) < k * len(new_points):
            admitted.append(os)
            covered |= new_points
    residual = Dataset.collect(dataset.points - covered, k)
    logger.debug("Admitted %d of %d occurrence sets, %d residual points", len(admitted), len(sorted_sets), len(residual))
    return Encoding(tuple(admitted), residual, k, cls.class_id)


def encode_point_set(dataset, cls, s_min=1, jobs=1):
    """
    Computes a losslessly compressed encoding of a dataset as a list of MTP occurrence
    sets plus a residual point set.

    Parameters:
    dataset (Dataset): The point set to encode.
    cls (TransformationClass): The class whose transformations relate the occurrences.
    s_min (int): Minimum size of the MTPs used.
    jobs (int): Worker processes for MTP discovery and augmentation.

    Returns:
    Encoding: decode(result) == dataset and result.description_length <= k|D|.
    """
    if len(dataset) and dataset.dimension != cls.dimension:
        raise DimensionMismatchError(
            f"{cls.class_id} works on {cls.dimension}-dimensional data, got dimension {dataset.dimension}")
    if len(dataset) < max(cls.basis_size, 2):
        return Encoding((), dataset, dataset.dimension, cls.class_id)

    records = maximal_transformable_patterns(dataset, cls, max(s_min, smallest_compressible_size(cls)), jobs=jobs)
    index = index_mtps(records, len(dataset))
    occurrence_sets = compute_occurrence_sets(merge_mtps(index), jobs=jobs)
    sorted_sets = sort_occurrence_sets(occurrence_sets, dataset.dimension, cls.complexity)
    encoding = compute_encoding(sorted_sets, dataset, cls)
    logger.info("Encoded %d points with %s: %d MTPs, %d occurrence sets, DL=%d",
                len(dataset), cls.class_id, len(records), len(sorted_sets), encoding.description_length)
    return encoding


def decode(encoding):
    for os in encoding.occurrence_sets:
        for f in os.transformations:
            if f.class_id != encoding.class_id:
                raise ClassMismatchError(f"{f.class_id} transformation in a {encoding.class_id} encoding")
    return encoding.covered_points.union(encoding.residual)


@dataclass
class MTPEncoder:
    """
    The compressor used for compression distances: encodes datasets with a fixed class,
    minimum pattern size and worker count, and counts how many datasets it has encoded.
    """

    class_id: str = "2T"
    s_min: int = 1
    jobs: int = 1
    calls: int = field(default=0, compare=False)

    @property
    def transformation_class(self):
        return get_transformation_class(self.class_id)

    def encode(self, dataset):
        self.calls += 1
        return encode_point_set(dataset, self.transformation_class, self.s_min, self.jobs)

    def description_length(self, dataset):
        return self.encode(dataset).description_length

    __call__ = description_length
