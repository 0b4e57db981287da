import itertools
import random
from fractions import Fraction

import pytest

from mtpkit.errors import DimensionMismatchError, DuplicatePointError, MtpkitError
from mtpkit.geometry import Dataset, integer_scale, lex_compare, parse_scalar, scale_point, sorted_points, to_scalar
from tests.helpers import random_rational_dataset


@pytest.mark.parametrize("p, q, expected", [
    ((0, 0), (0, 0), 0),
    ((1, 2), (1, 3), -1),
    ((2, 0), (1, 9), 1),
])
def test_lex_compare(p, q, expected):
    assert lex_compare(p, q) == expected


def test_lex_compare_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        lex_compare((0, 0), (0, 0, 0))


@pytest.mark.parametrize("points, expected", [
    ([(1, 0), (0, 0)], [(0, 0), (1, 0)]),
    ([], []),
    ([(0, 1), (0, 0), (1, 0)], [(0, 0), (0, 1), (1, 0)]),
])
def test_sorted_points(points, expected):
    assert sorted_points(Dataset(points)) == expected


def test_dataset_is_exact_and_rejects_duplicates():
    dataset = Dataset([("1/2", 3), (0, 0)])
    assert (Fraction(1, 2), Fraction(3)) in dataset
    with pytest.raises(DuplicatePointError):
        Dataset([(0, 0), (0, 0)])
    with pytest.raises(DimensionMismatchError):
        Dataset([(0, 0), (0, 0, 1)])


def test_dataset_rejects_floats():
    with pytest.raises(MtpkitError):
        Dataset([(0.5, 1)])


@pytest.mark.parametrize("text", ["abc", "1/0", "nan", ""])
def test_parse_scalar_rejects(text):
    with pytest.raises(MtpkitError):
        parse_scalar(text)


def test_dataset_set_operations():
    a = Dataset([(0, 0), (1, 0)])
    b = Dataset([(1, 0), (2, 0)])
    assert a.union(b) == Dataset([(0, 0), (1, 0), (2, 0)])
    assert a.difference(b) == Dataset([(0, 0)])
    assert Dataset([(1, 0)]).issubset(a)
    assert hash(a) == hash(Dataset([(1, 0), (0, 0)]))
    assert a.min_coordinate(0) == 0 and b.max_coordinate(0) == 2


def test_integer_scale_makes_coordinates_integral():
    for seed in range(20):
        dataset = random_rational_dataset(seed, n=10)
        scale = integer_scale(dataset.points, 2)
        scaled = [scale_point(p, scale) for p in dataset.sorted_points()]
        for p, q in zip(dataset.sorted_points(), scaled):
            assert all(isinstance(c, int) for c in q)
            assert tuple(Fraction(c, s) for c, s in zip(q, scale)) == p
        # positive per-axis scaling keeps the lexicographic order
        assert scaled == sorted(scaled)


def test_scalar_division_is_exact():
    rng = random.Random(7)
    for _ in range(500):
        a = to_scalar(Fraction(rng.randint(-1000, 1000), rng.randint(1, 60)))
        b = to_scalar(Fraction(rng.choice([-1, 1]) * rng.randint(1, 1000), rng.randint(1, 60)))
        assert (a / b) * b == a
        assert parse_scalar(str(a)) == a


def test_lex_compare_is_a_total_order():
    points = sorted(set(random_rational_dataset(3, n=12).points) | {(Fraction(0), Fraction(0))})
    for p, q in itertools.product(points, repeat=2):
        assert lex_compare(p, q) == -lex_compare(q, p)
        assert (lex_compare(p, q) == 0) == (p == q)
    for p, q, r in itertools.product(points, repeat=3):
        if lex_compare(p, q) <= 0 and lex_compare(q, r) <= 0:
            assert lex_compare(p, r) <= 0
