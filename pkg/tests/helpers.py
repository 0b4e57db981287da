import random
from fractions import Fraction

from mtpkit.geometry import Dataset
from mtpkit.transforms import TransformationClass


def random_dataset(seed, n=8, span=6, pitch_span=None):
    """n distinct integer points on a span x pitch_span grid (square by default)."""
    rng = random.Random(seed)
    cells = [(t, p) for t in range(span) for p in range(pitch_span or span)]
    return Dataset(rng.sample(cells, n))


def random_rational_dataset(seed, n=8, span=6, denominators=(1, 2, 3)):
    """Like random_dataset, but coordinates are fractions with the given denominators."""
    rng = random.Random(seed)
    points = set()
    while len(points) < n:
        points.add(tuple(Fraction(rng.randrange(-span * d, span * d), d)
                         for d in (rng.choice(denominators), rng.choice(denominators))))
    return Dataset(points)


class PitchShiftClass(TransformationClass):
    """Pitch-only shifts <t, p> -> <t, p + d>, solved on the rational coordinates."""

    class_id = "2P"
    dimension = 2
    basis_size = 1
    complexity = 1
    max_solutions = 1

    @property
    def identity_sigma(self):
        return (Fraction(0),)

    def apply_sigma(self, sigma, point):
        return (point[0], point[1] + sigma[0])

    def invert_sigma(self, sigma):
        return (-sigma[0],)

    def solve(self, obj, img):
        p, q = obj[0], img[0]
        if p[0] != q[0]:
            return []
        return [(q[1] - p[1],)]

    def basis_signature(self, basis):
        return basis[0][0]
