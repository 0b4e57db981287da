import itertools
import logging
import multiprocessing
from bisect import bisect_left
from collections import defaultdict
from dataclasses import dataclass

from mtpkit.buffer import PairBuffer
from mtpkit.errors import DimensionMismatchError, MtpkitError
from mtpkit.geometry import Dataset, integer_scale, scale_point
from mtpkit.transforms import apply

logger = logging.getLogger(__name__)

# below this many object bases the enumeration is cheaper than starting a pool
PARALLEL_MIN_BASES = 1000
CHUNKS_PER_WORKER = 4


@dataclass(frozen=True)
class MTPRecord:
    """
    A transformation f together with its maximal transformable pattern M(D, f), the set
    of points of D that f maps onto points of D.
    """

    transformation: object
    pattern: Dataset


@dataclass(frozen=True)
class BasisTable:
    """All beta-combinations of a dataset's points, each in lexicographic order."""

    bases: tuple

    def __len__(self):
        return len(self.bases)

    def __getitem__(self, index):
        return self.bases[index]

    def __iter__(self):
        return iter(self.bases)


def compute_object_bases(dataset, beta):
    if beta < 1:
        raise MtpkitError(f"basis size must be at least 1, got {beta}")
    if beta > len(dataset):
        raise MtpkitError(f"cannot form bases of {beta} points from {len(dataset)} points")
    # combinations of a sorted sequence come out sorted, both inside and across bases
    return BasisTable(tuple(itertools.combinations(dataset.sorted_points(), beta)))


def permutation_index_sequences(beta):
    if beta < 1:
        raise MtpkitError(f"basis size must be at least 1, got {beta}")
    return list(itertools.permutations(range(beta)))


def _bucket_bases(cls, bases):
    signatures = [cls.basis_signature(b) for b in bases]
    buckets = defaultdict(list)
    for i, key in enumerate(signatures):
        if key is not None:
            buckets[key].append(i)
    return signatures, dict(buckets)


def _collect_pairs(cls, bases, members, signatures, buckets, permutations, obj_indices):
    """
    Runs the basis-pair loop for the given object bases: each object basis is matched
    against every image basis at or after it (within its signature bucket) and every
    permutation of that image basis. `bases` holds the coordinates the class solves on,
    `members` the matching point indices. Returns the filled PairBuffer.
    """
    buffer = PairBuffer()
    identity = cls.identity_key
    identity_order = tuple(range(cls.basis_size))
    solve, invert = cls.solve_key, cls.invert_key
    for i in obj_indices:
        key = signatures[i]
        if key is None:
            continue
        obj = bases[i]
        obj_members = members[i]
        candidates = buckets[key]
        for j in candidates[bisect_left(candidates, i):]:
            img = bases[j]
            for order in permutations:
                img_permuted = img if order == identity_order else tuple(img[k] for k in order)
                for found in solve(obj, img_permuted):
                    if found == identity:
                        continue
                    buffer.store_pair(found, obj_members)
                    buffer.store_pair(invert(found), members[j])
    return buffer


_WORKER_STATE = {}


def _init_worker(cls, bases, members, signatures, buckets, permutations):
    _WORKER_STATE.update(cls=cls, bases=bases, members=members, signatures=signatures, buckets=buckets,
                         permutations=permutations)


def _collect_chunk(obj_indices):
    state = _WORKER_STATE
    return _collect_pairs(state["cls"], state["bases"], state["members"], state["signatures"],
                          state["buckets"], state["permutations"], obj_indices)


def partition_indices(n_items, jobs):
    """Splits range(n_items) into up to jobs * CHUNKS_PER_WORKER interleaved chunks."""
    n_chunks = min(n_items, jobs * CHUNKS_PER_WORKER)
    # interleaved so early object bases, which meet the most image bases, are spread out
    return [list(range(w, n_items, n_chunks)) for w in range(n_chunks)]


def _solver_coordinates(dataset, cls):
    points = dataset.sorted_points()
    if not cls.integer_keys:
        return points, None
    scale = integer_scale(points, dataset.dimension)
    return [scale_point(p, scale) for p in points], scale


def _records(buffer, cls, points, scale, dimension, s_min):
    patterns = {}
    records = []
    for key, members in buffer.patterns(s_min):
        pattern = patterns.get(members)
        if pattern is None:
            pattern = patterns[members] = Dataset.collect((points[k] for k in members), dimension)
        records.append(MTPRecord(cls.transformation(cls.key_to_sigma(key, scale)), pattern))
    records.sort(key=lambda r: r.transformation.sigma)
    return records


def _check_inputs(dataset, cls, s_min):
    if s_min < 1:
        raise MtpkitError(f"minimum pattern size must be at least 1, got {s_min}")
    if len(dataset) and dataset.dimension != cls.dimension:
        raise DimensionMismatchError(
            f"{cls.class_id} works on {cls.dimension}-dimensional data, got dimension {dataset.dimension}")
    if len(dataset) < cls.basis_size:
        raise MtpkitError(f"{cls.class_id} needs at least {cls.basis_size} points, got {len(dataset)}")


def maximal_transformable_patterns(dataset, cls, s_min=1, jobs=1):
    """
    Computes the non-empty maximal transformable patterns of size at least s_min in a
    dataset with respect to a transformation class.

    Every pair of object bases (i <= j) is matched under every permutation of the image
    basis; each transformation found contributes <f, object basis> and <f^-1, image basis>
    pairs. The pair buffer groups the pairs by transformation as they arrive, and the union
    of a transformation's bases is its MTP. Identity transformations are skipped.

    Classes with integer keys solve on coordinates scaled per axis to integers, so the loop
    never does rational arithmetic; the keys are turned back into parameter vectors only
    for the reported records.

    Parameters:
    dataset (Dataset): The point set D.
    cls (TransformationClass): The class F to search.
    s_min (int): Minimum size of a reported pattern.
    jobs (int): Number of worker processes for the basis-pair loop.

    Returns:
    list of MTPRecord: one record per transformation, sorted by parameter vector.
    """
    _check_inputs(dataset, cls, s_min)
    coordinates, scale = _solver_coordinates(dataset, cls)
    members = list(itertools.combinations(range(len(coordinates)), cls.basis_size))
    bases = [tuple(coordinates[k] for k in basis) for basis in members]
    permutations = permutation_index_sequences(cls.basis_size)
    signatures, buckets = _bucket_bases(cls, bases)

    if jobs > 1 and len(bases) >= PARALLEL_MIN_BASES:
        chunks = partition_indices(len(bases), jobs)
        logger.debug("Enumerating %d object bases on %d workers (%d chunks)", len(bases), jobs, len(chunks))
        buffer = PairBuffer()
        with multiprocessing.Pool(jobs, initializer=_init_worker,
                                  initargs=(cls, bases, members, signatures, buckets, permutations)) as pool:
            for chunk_buffer in pool.imap_unordered(_collect_chunk, chunks):
                buffer.merge(chunk_buffer)
    else:
        buffer = _collect_pairs(cls, bases, members, signatures, buckets, permutations, range(len(bases)))

    records = _records(buffer, cls, dataset.sorted_points(), scale, dataset.dimension, s_min)
    logger.debug("Stored %d pairs for %d %s transformations; %d MTPs of size >= %d in %d points",
                 buffer.mem_counter, len(buffer), cls.class_id, len(records), s_min, len(dataset))
    return records


def mtp_oracle(dataset, cls, s_min=1):
    """
    Computes the same records as maximal_transformable_patterns straight from the
    definition M(D, f) = D n f^-1(D), taking candidate transformations from every ordered
    pair of bases. Quadratic in the number of bases; meant for small test datasets.
    """
    _check_inputs(dataset, cls, s_min)
    bases = compute_object_bases(dataset, cls.basis_size).bases
    permutations = permutation_index_sequences(cls.basis_size)
    candidates = set()
    for obj in bases:
        for img in bases:
            for order in permutations:
                candidates.update(cls.solve(obj, tuple(img[k] for k in order)))
    candidates.discard(cls.identity_sigma)

    points = dataset.points
    records = []
    for sigma in sorted(candidates):
        pattern = [p for p in points if cls.apply_sigma(sigma, p) in points]
        if pattern and len(pattern) >= s_min:
            records.append(MTPRecord(cls.transformation(sigma), Dataset.collect(pattern, dataset.dimension)))
    return records


def total_symmetries(dataset, cls, jobs=1):
    """Transformations of the class that map the whole dataset onto itself."""
    if len(dataset) < cls.basis_size:
        return []
    return [r.transformation for r in maximal_transformable_patterns(dataset, cls, s_min=len(dataset), jobs=jobs)]


def is_partial_symmetry(dataset, f):
    return any(apply(f, p) in dataset for p in dataset.points)
