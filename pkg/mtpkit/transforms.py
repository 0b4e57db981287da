import re
from math import gcd
from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction

from mtpkit.errors import ClassMismatchError, DimensionMismatchError, InvalidTransformationError, MtpkitError
from mtpkit.geometry import Dataset, format_scalar, to_scalar

ONE = Fraction(1)
MINUS_ONE = Fraction(-1)
ZERO = Fraction(0)
SIGNS = (ONE, MINUS_ONE)


class TransformationClass(ABC):
    """
    A class F of bijections over R^k whose members are identified by a parameter vector
    sigma of fixed length K(F). Each concrete class supplies the modified class function
    (apply_sigma), the closed-form inverse, the identity vector and a solver that finds
    every member mapping an object basis of `basis_size` points onto an image basis.

    All sigma-level methods take and return plain tuples of Fractions so the discovery
    loop never pays for building Transformation objects; the module-level functions below
    wrap them for Transformation values. The key-level methods are the integer
    counterparts that discovery uses when `integer_keys` is set.
    """

    class_id = None
    dimension = 2
    basis_size = 1
    complexity = 2
    max_solutions = 1
    # classes that can solve on integer coordinates and emit exact integer keys
    integer_keys = False

    @property
    @abstractmethod
    def identity_sigma(self):
        pass

    @abstractmethod
    def apply_sigma(self, sigma, point):
        pass

    @abstractmethod
    def invert_sigma(self, sigma):
        pass

    @abstractmethod
    def solve(self, obj, img):
        """
        Returns the parameter vectors of every member of the class mapping obj[i] onto
        img[i] for all i, or an empty list when there are none or infinitely many.
        """

    def check_sigma(self, sigma):
        """Raises InvalidTransformationError when sigma breaks a class invariant."""

    def rank_sigma(self, sigma):
        return 0

    def basis_signature(self, basis):
        # bases with different signatures never determine a common transformation;
        # None means the basis can never take part in a finite solution
        return ()

    @property
    def identity_key(self):
        return self.identity_sigma

    def solve_key(self, obj, img):
        """
        Like solve, but on points whose coordinates were scaled to integers (see
        geometry.integer_scale) when `integer_keys` is set. Returns hashable keys that
        identify transformations one-to-one and are cheap to hash and compare.
        """
        return self.solve(obj, img)

    def invert_key(self, key):
        return self.invert_sigma(key)

    def key_to_sigma(self, key, scale):
        """Turns a key back into the parameter vector, undoing the per-axis `scale`."""
        return key

    def transformation(self, sigma):
        return Transformation(self.class_id, tuple(sigma))

    def __repr__(self):
        return f"{type(self).__name__}({self.class_id})"

    def __eq__(self, other):
        return isinstance(other, TransformationClass) and other.class_id == self.class_id

    def __hash__(self):
        return hash(self.class_id)


class TranslationClass(TransformationClass):
    """
    Translations of R^k, sigma = the translation vector. For k = 2 this is F_2T, the class
    of exact and transposed repetitions, with basis size 1 and complexity 2.
    """

    basis_size = 1
    max_solutions = 1
    integer_keys = True

    def __init__(self, dimension=2):
        if dimension < 1:
            raise MtpkitError(f"translation dimension must be positive, got {dimension}")
        self.dimension = dimension
        self.complexity = dimension
        self.class_id = f"{dimension}T"
        self._identity = (ZERO,) * dimension

    @property
    def identity_sigma(self):
        return self._identity

    def apply_sigma(self, sigma, point):
        return tuple(c + v for c, v in zip(point, sigma))

    def invert_sigma(self, sigma):
        return tuple(-v for v in sigma)

    def solve(self, obj, img):
        p, q = obj[0], img[0]
        return [tuple(b - a for a, b in zip(p, q))]

    def key_to_sigma(self, key, scale):
        return tuple(Fraction(v, l) for v, l in zip(key, scale))


class TranslationReflectionClass(TransformationClass):
    """
    F_2TR: a 2-D translation optionally followed by a reflection in the time axis, so it
    relates exact, transposed and inverted repetitions. sigma = <dt, dp, b> with b in
    {-1, 1}, applied as <t + dt, b(p + dp)>.

    Any two points are related by exactly two members: the plain translation and the
    inverting one.
    """

    class_id = "2TR"
    dimension = 2
    basis_size = 1
    complexity = 3
    max_solutions = 2
    integer_keys = True

    @property
    def identity_sigma(self):
        return (ZERO, ZERO, ONE)

    def apply_sigma(self, sigma, point):
        return (point[0] + sigma[0], sigma[2] * (point[1] + sigma[1]))

    def invert_sigma(self, sigma):
        return (-sigma[0], -sigma[2] * sigma[1], sigma[2])

    def solve(self, obj, img):
        p, q = obj[0], img[0]
        dt = q[0] - p[0]
        return [(dt, q[1] - p[1], ONE), (dt, -p[1] - q[1], MINUS_ONE)]

    def solve_key(self, obj, img):
        p, q = obj[0], img[0]
        dt = q[0] - p[0]
        return [(dt, q[1] - p[1], 1), (dt, -p[1] - q[1], -1)]

    def invert_key(self, key):
        dt, dp, b = key
        return (-dt, -b * dp, b)

    def key_to_sigma(self, key, scale):
        dt, dp, b = key
        return (Fraction(dt, scale[0]), Fraction(dp, scale[1]), Fraction(b))

    def check_sigma(self, sigma):
        if sigma[2] not in SIGNS:
            raise InvalidTransformationError(f"2TR reflection flag must be 1 or -1, got {format_scalar(sigma[2])}")

    def rank_sigma(self, sigma):
        return 1 if sigma[2] == MINUS_ONE else 0


class ScaleTranslationReflectionClass(TransformationClass):
    """
    F_2STR: a scaling parallel to the time axis, then a translation, then an optional
    reflection in the time axis. This is the class of the traditional contrapuntal
    transformations (transposition, inversion, retrograde, augmentation, diminution).

    sigma = <s, t, w, b> with s != 0 and b in {-1, 1}, applied as <s*x + t, b(y + w)>.
    Two object points with distinct time coordinates determine at most two members.
    """

    class_id = "2STR"
    dimension = 2
    basis_size = 2
    complexity = 4
    max_solutions = 2
    integer_keys = True

    @property
    def identity_sigma(self):
        return (ONE, ZERO, ZERO, ONE)

    def apply_sigma(self, sigma, point):
        return (point[0] * sigma[0] + sigma[1], sigma[3] * (point[1] + sigma[2]))

    def invert_sigma(self, sigma):
        s, t, w, b = sigma
        return (1 / s, -t / s, -b * w, b)

    def solve(self, obj, img):
        (p, p2), (q, q2) = obj, img
        dx = p2[0] - p[0]
        if dx == 0:
            # underdetermined: any scale factor fits, leave it to a non-degenerate basis
            return []
        s = (q2[0] - q[0]) / dx
        if s == 0:
            return []
        t = q[0] - s * p[0]
        dy_obj = p2[1] - p[1]
        dy_img = q2[1] - q[1]
        solutions = []
        for b in SIGNS:
            if b * dy_obj == dy_img:
                solutions.append((s, t, b * q[1] - p[1], b))
        return solutions

    def check_sigma(self, sigma):
        if sigma[0] == 0:
            raise InvalidTransformationError("2STR scale factor must be non-zero")
        if sigma[3] not in SIGNS:
            raise InvalidTransformationError(f"2STR reflection flag must be 1 or -1, got {format_scalar(sigma[3])}")

    def rank_sigma(self, sigma):
        return (1 if sigma[3] == MINUS_ONE else 0) + (1 if sigma[0] != ONE else 0)

    def basis_signature(self, basis):
        p, p2 = basis
        if p2[0] == p[0]:
            return None
        return abs(p2[1] - p[1])

    # Keys are <sn, sd, tn, w, b> on integer-scaled coordinates: s = sn/sd in lowest
    # terms with sd > 0, the scaled translation is tn/sd and w is the scaled pitch shift.

    @property
    def identity_key(self):
        return (1, 1, 0, 0, 1)

    def solve_key(self, obj, img):
        (p, p2), (q, q2) = obj, img
        dx = p2[0] - p[0]
        dq = q2[0] - q[0]
        if dx == 0 or dq == 0:
            return []
        g = gcd(dq, dx)
        sn, sd = dq // g, dx // g
        if sd < 0:
            sn, sd = -sn, -sd
        tn = q[0] * sd - sn * p[0]
        dy_obj = p2[1] - p[1]
        dy_img = q2[1] - q[1]
        keys = []
        if dy_obj == dy_img:
            keys.append((sn, sd, tn, q[1] - p[1], 1))
        if -dy_obj == dy_img:
            keys.append((sn, sd, tn, -q[1] - p[1], -1))
        return keys

    def invert_key(self, key):
        sn, sd, tn, w, b = key
        if sn < 0:
            return (-sd, -sn, tn, -b * w, b)
        return (sd, sn, -tn, -b * w, b)

    def key_to_sigma(self, key, scale):
        sn, sd, tn, w, b = key
        return (Fraction(sn, sd), Fraction(tn, sd * scale[0]), Fraction(w, scale[1]), Fraction(b))


REGISTRY = {
    "2T": TranslationClass(2),
    "2TR": TranslationReflectionClass(),
    "2STR": ScaleTranslationReflectionClass(),
}

CLI_CLASS_IDS = ("2T", "2TR", "2STR")

_TRANSLATION_ID = re.compile(r"^([1-9][0-9]*)T$")


def get_transformation_class(class_id):
    """
    Looks up a transformation class by its id. Besides the registered classes, any
    "<k>T" id resolves to the k-dimensional translation class.
    """
    cls = REGISTRY.get(class_id)
    if cls is not None:
        return cls
    match = _TRANSLATION_ID.match(class_id or "")
    if match:
        cls = TranslationClass(int(match.group(1)))
        REGISTRY[class_id] = cls
        return cls
    raise ClassMismatchError(f"unknown transformation class {class_id!r}")


def register_class(cls):
    REGISTRY[cls.class_id] = cls
    return cls


@dataclass(frozen=True, order=True)
class Transformation:
    """
    A member of a transformation class, identified by its class id and parameter vector.
    Ordering and equality are those of the sigma vector (within one class).
    """

    class_id: str
    sigma: tuple

    def __post_init__(self):
        cls = get_transformation_class(self.class_id)
        sigma = tuple(to_scalar(v) for v in self.sigma)
        if len(sigma) != cls.complexity:
            raise InvalidTransformationError(
                f"{self.class_id} parameter vectors have {cls.complexity} values, got {len(sigma)}")
        cls.check_sigma(sigma)
        object.__setattr__(self, "sigma", sigma)

    @property
    def transformation_class(self):
        return get_transformation_class(self.class_id)

    def __str__(self):
        return "<" + ",".join(format_scalar(v) for v in self.sigma) + ">"


def apply(f, p):
    """
    Applies a transformation to one point.

    Parameters:
    f (Transformation): The transformation.
    p (tuple): A point of the class dimension.

    Returns:
    tuple: The image f(p).
    """
    cls = f.transformation_class
    if len(p) != cls.dimension:
        raise DimensionMismatchError(f"{cls.class_id} maps {cls.dimension}-points, got a {len(p)}-point")
    return cls.apply_sigma(f.sigma, p)


def apply_to_set(f, pattern):
    cls = f.transformation_class
    if len(pattern) and pattern.dimension != cls.dimension:
        raise DimensionMismatchError(f"{cls.class_id} maps {cls.dimension}-points, got dimension {pattern.dimension}")
    return Dataset.collect((cls.apply_sigma(f.sigma, p) for p in pattern.points), pattern.dimension)


def invert(f):
    """
    Returns:
    Transformation: The member g of the same class with g(f(p)) == p for every point p.
    """
    cls = f.transformation_class
    return Transformation(f.class_id, cls.invert_sigma(f.sigma))


def is_identity(f):
    return f.sigma == f.transformation_class.identity_sigma


def get_transformations(cls, obj, img):
    """
    Finds every transformation in `cls` mapping the object basis onto the image basis,
    point by point.

    Parameters:
    cls (TransformationClass): The class to search.
    obj (sequence of points): beta pairwise distinct object points.
    img (sequence of points): beta image points, in the order they should be hit.

    Returns:
    list of Transformation: at most cls.max_solutions members; empty when the system is
    inconsistent or underdetermined.
    """
    if len(obj) != cls.basis_size or len(img) != cls.basis_size:
        raise MtpkitError(f"{cls.class_id} bases have {cls.basis_size} points")
    for p in list(obj) + list(img):
        if len(p) != cls.dimension:
            raise DimensionMismatchError(f"{cls.class_id} maps {cls.dimension}-points, got a {len(p)}-point")
    if len(set(obj)) != len(obj):
        raise MtpkitError("object basis points must be distinct")
    obj = [tuple(to_scalar(c) for c in p) for p in obj]
    img = [tuple(to_scalar(c) for c in p) for p in img]
    return [cls.transformation(sigma) for sigma in cls.solve(obj, img)]


def compare_transformations(f, g):
    """
    Orders two transformations of one class by their parameter vectors, lexicographically.

    Parameters:
    f, g (Transformation): Members of the same class.

    Returns:
    int: -1 if f < g, 0 if they are equal, 1 if f > g.
    """
    if f.class_id != g.class_id:
        raise ClassMismatchError(f"cannot compare a {f.class_id} transformation with a {g.class_id} one")
    if f.sigma < g.sigma:
        return -1
    if f.sigma > g.sigma:
        return 1
    return 0


def complexity_rank(f):
    """
    Number of non-default components of f: one for a reflection, one for a time scaling
    other than 1. Pure translations rank 0.
    """
    return f.transformation_class.rank_sigma(f.sigma)
