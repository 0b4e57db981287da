from fractions import Fraction
from math import gcd
from numbers import Rational

from mtpkit.errors import DimensionMismatchError, DuplicatePointError, MtpkitError

Scalar = Fraction
Point = tuple  # tuple[Fraction, ...], coords[0] is time, coords[1] is pitch for musical data

DEFAULT_DIMENSION = 2


def parse_scalar(text):
    """
    Parses a coordinate written as an integer ("3"), a decimal ("-2.5") or a rational
    ("7/2") into an exact Fraction. Non-finite values such as "nan" or "inf" are rejected.
    """
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as e:
        raise MtpkitError(f"not an exact number: {text!r}") from e


def to_scalar(value):
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return parse_scalar(value)
    raise MtpkitError(f"coordinates must be exact rationals, got {type(value).__name__}")


def format_scalar(value):
    # Fraction's str is canonical: "3", "-5/2"
    return str(value)


def make_point(coords):
    return tuple(to_scalar(c) for c in coords)


def lex_compare(p, q):
    """
    Compares two points lexicographically: coords[0] first, then coords[1], ...

    Returns:
    int: -1 if p < q, 0 if p == q, 1 if p > q.
    """
    if len(p) != len(q):
        raise DimensionMismatchError(f"cannot compare a {len(p)}-point with a {len(q)}-point")
    if p < q:
        return -1
    if p > q:
        return 1
    return 0


def integer_scale(points, dimension):
    """
    Per-axis scale factors (the lcm of each axis' denominators) that turn every coordinate
    of `points` into an integer. Positive, so lexicographic order survives scaling.
    """
    scale = [1] * dimension
    for p in points:
        for axis, c in enumerate(p):
            d = c.denominator
            if scale[axis] % d:
                scale[axis] = scale[axis] * d // gcd(scale[axis], d)
    return tuple(scale)


def scale_point(point, scale):
    return tuple(c.numerator * (s // c.denominator) for c, s in zip(point, scale))


class Dataset:
    """
    A finite set of distinct k-dimensional points with exact rational coordinates.

    Datasets are immutable and hashable, so they can be used as dictionary keys, shipped
    to worker processes and compared structurally. Iteration always yields the points in
    ascending lexicographic order.

    Parameters:
    points (iterable): Points given as sequences of ints, Fractions or numeric strings.
    dimension (int | None): The dimension k. Inferred from the first point when omitted;
        an empty dataset defaults to 2.
    """

    __slots__ = ("_points", "_dimension", "_sorted")

    def __init__(self, points=(), dimension=None):
        converted = [make_point(p) for p in points]
        if dimension is None:
            dimension = len(converted[0]) if converted else DEFAULT_DIMENSION
        if dimension < 1:
            raise DimensionMismatchError(f"dimension must be positive, got {dimension}")
        for p in converted:
            if len(p) != dimension:
                raise DimensionMismatchError(f"point {format_point(p)} does not have dimension {dimension}")
        unique = frozenset(converted)
        if len(unique) != len(converted):
            seen = set()
            for p in converted:
                if p in seen:
                    raise DuplicatePointError(f"duplicate point {format_point(p)}")
                seen.add(p)
        self._points = unique
        self._dimension = dimension
        self._sorted = None

    @classmethod
    def collect(cls, points, dimension):
        """
        Builds a dataset from points that are already exact tuples of the right dimension,
        merging repeats. Used internally where a union of bases or images naturally repeats.
        """
        dataset = cls.__new__(cls)
        dataset._points = frozenset(points)
        dataset._dimension = dimension
        dataset._sorted = None
        return dataset

    @property
    def points(self):
        return self._points

    @property
    def dimension(self):
        return self._dimension

    def sorted_points(self):
        if self._sorted is None:
            self._sorted = tuple(sorted(self._points))
        return self._sorted

    def __len__(self):
        return len(self._points)

    def __iter__(self):
        return iter(self.sorted_points())

    def __contains__(self, point):
        return point in self._points

    def __eq__(self, other):
        if not isinstance(other, Dataset):
            return NotImplemented
        return self._dimension == other._dimension and self._points == other._points

    def __hash__(self):
        return hash((self._dimension, self._points))

    def __lt__(self, other):
        return self.sorted_points() < other.sorted_points()

    def __repr__(self):
        return f"Dataset({[format_point(p) for p in self.sorted_points()]})"

    def _check_dimension(self, other):
        if other._dimension != self._dimension and self._points and other._points:
            raise DimensionMismatchError(f"dimension {self._dimension} vs {other._dimension}")

    def union(self, *others):
        points = set(self._points)
        for other in others:
            self._check_dimension(other)
            points |= other._points
        return Dataset.collect(points, self._dimension)

    def difference(self, other):
        self._check_dimension(other)
        return Dataset.collect(self._points - other._points, self._dimension)

    def issubset(self, other):
        return self._points <= other._points

    def min_coordinate(self, axis):
        return self.sorted_points()[0][axis] if axis == 0 else min(p[axis] for p in self._points)

    def max_coordinate(self, axis):
        return self.sorted_points()[-1][axis] if axis == 0 else max(p[axis] for p in self._points)


def sorted_points(dataset):
    return list(dataset.sorted_points())


def format_point(point):
    return "(" + ",".join(format_scalar(c) for c in point) + ")"
