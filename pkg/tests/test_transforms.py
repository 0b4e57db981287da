import random
from fractions import Fraction

import pytest

from mtpkit.errors import ClassMismatchError, DimensionMismatchError, InvalidTransformationError
from mtpkit.geometry import Dataset
from mtpkit.transforms import (Transformation, apply, apply_to_set, compare_transformations, complexity_rank,
                               get_transformation_class, get_transformations, invert, is_identity)


def t(class_id, *sigma):
    return Transformation(class_id, sigma)


@pytest.mark.parametrize("f, p, expected", [
    (t("2T", 3, 5), (1, 1), (4, 6)),
    (t("2TR", 3, -9, -1), (1, 2), (4, 7)),
    (t("2STR", -2, 4, 3, 1), (1, 0), (2, 3)),
])
def test_apply(f, p, expected):
    assert apply(f, p) == expected


def test_apply_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        apply(t("2T", 1, 0), (1, 2, 3))


def test_apply_to_set():
    assert apply_to_set(t("2T", 1, 0), Dataset([])) == Dataset([])
    assert apply_to_set(t("2T", 1, 0), Dataset([(0, 0), (1, 0)])) == Dataset([(1, 0), (2, 0)])
    assert apply_to_set(t("2STR", -1, 5, 0, 1), Dataset([(0, 0), (1, 2)])) == Dataset([(5, 0), (4, 2)])


@pytest.mark.parametrize("f, expected", [
    (t("2T", 3, 5), (-3, -5)),
    (t("2TR", 3, -9, -1), (-3, -9, -1)),
    (t("2STR", -2, 4, 3, 1), (Fraction(-1, 2), 2, -3, 1)),
])
def test_invert(f, expected):
    assert invert(f).sigma == tuple(Fraction(v) for v in expected)


@pytest.mark.parametrize("seed", range(20))
def test_inverse_undoes_apply(seed):
    rng = random.Random(seed)
    p = (Fraction(rng.randint(-20, 20), rng.randint(1, 4)), Fraction(rng.randint(-20, 20)))
    for f in (t("2T", rng.randint(-9, 9), rng.randint(-9, 9)),
              t("2TR", rng.randint(-9, 9), rng.randint(-9, 9), rng.choice((-1, 1))),
              t("2STR", Fraction(rng.choice((-3, -1, 1, 2)), rng.randint(1, 3)), rng.randint(-9, 9),
                rng.randint(-9, 9), rng.choice((-1, 1)))):
        assert apply(invert(f), apply(f, p)) == p
        assert apply(f, apply(invert(f), p)) == p


@pytest.mark.parametrize("f, expected", [
    (t("2T", 0, 0), True),
    (t("2TR", 0, 0, -1), False),
    (t("2STR", 1, 0, 0, 1), True),
])
def test_is_identity(f, expected):
    assert is_identity(f) is expected


def test_get_transformations_examples(f2t, f2tr, f2str):
    assert get_transformations(f2t, [(0, 0)], [(3, 5)]) == [t("2T", 3, 5)]
    assert set(get_transformations(f2tr, [(1, 2)], [(4, 7)])) == {t("2TR", 3, 5, 1), t("2TR", 3, -9, -1)}
    assert set(get_transformations(f2str, [(0, 0), (1, 0)], [(4, 3), (2, 3)])) == {
        t("2STR", -2, 4, 3, 1), t("2STR", -2, 4, -3, -1)}


def test_get_transformations_degenerate_2str(f2str):
    # equal onsets leave the scale factor free
    assert get_transformations(f2str, [(0, 0), (0, 1)], [(2, 0), (2, 1)]) == []
    # a zero scale would collapse the basis
    assert get_transformations(f2str, [(0, 0), (1, 0)], [(3, 0), (3, 1)]) == []
    # pitch intervals that no reflection can match
    assert get_transformations(f2str, [(0, 0), (1, 1)], [(0, 0), (1, 3)]) == []


@pytest.mark.parametrize("seed", range(30))
def test_2tr_two_solutions_per_point_pair(seed, f2tr):
    rng = random.Random(seed)
    p = (rng.randint(-9, 9), rng.randint(-9, 9))
    q = (rng.randint(-9, 9), rng.randint(-9, 9))
    solutions = get_transformations(f2tr, [p], [q])
    assert len(solutions) == 2
    assert {f.sigma[2] for f in solutions} == {1, -1}
    assert all(apply(f, p) == q for f in solutions)


@pytest.mark.parametrize("seed", range(30))
def test_2str_solutions_map_basis(seed, f2str):
    rng = random.Random(seed)
    obj = [(0, rng.randint(-5, 5)), (rng.randint(1, 5), rng.randint(-5, 5))]
    img = [(rng.randint(-5, 5), rng.randint(-5, 5)), (rng.randint(-5, 5), rng.randint(-5, 5))]
    for f in get_transformations(f2str, obj, img):
        assert [apply(f, p) for p in obj] == img


@pytest.mark.parametrize("f, g, expected", [
    (t("2T", 1, 0), t("2T", 1, 0), 0),
    (t("2T", 0, 5), t("2T", 1, -9), -1),
    (t("2TR", 3, 5, 1), t("2TR", 3, -9, -1), 1),
])
def test_compare_transformations(f, g, expected):
    assert compare_transformations(f, g) == expected


def test_compare_across_classes():
    with pytest.raises(ClassMismatchError):
        compare_transformations(t("2T", 1, 0), t("2TR", 1, 0, 1))


@pytest.mark.parametrize("f, expected", [
    (t("2T", 3, 5), 0),
    (t("2TR", 3, -9, -1), 1),
    (t("2STR", -2, 4, 3, 1), 1),
    (t("2STR", 2, 0, 0, -1), 2),
])
def test_complexity_rank(f, expected):
    assert complexity_rank(f) == expected


def test_invalid_parameter_vectors():
    with pytest.raises(InvalidTransformationError):
        t("2T", 1, 2, 3)
    with pytest.raises(InvalidTransformationError):
        t("2TR", 1, 2, 0)
    with pytest.raises(InvalidTransformationError):
        t("2STR", 0, 1, 1, 1)


def test_class_registry():
    assert get_transformation_class("3T").complexity == 3
    assert get_transformation_class("2STR").basis_size == 2
    with pytest.raises(ClassMismatchError):
        get_transformation_class("2X")


def test_register_class(pitch_shift):
    assert get_transformation_class("2P") is pitch_shift
    f = t("2P", 3)
    assert apply(f, (1, 2)) == (1, 5)
    assert invert(f) == t("2P", -3)
    assert get_transformations(pitch_shift, [(1, 2)], [(1, 7)]) == [t("2P", 5)]
    assert get_transformations(pitch_shift, [(1, 2)], [(2, 7)]) == []


def test_2str_keys_invert_like_parameter_vectors(f2str):
    rng = random.Random(5)
    for _ in range(200):
        obj = [(rng.randint(-9, 9), rng.randint(-9, 9)) for _ in range(2)]
        img = [(rng.randint(-9, 9), rng.randint(-9, 9)) for _ in range(2)]
        keys = f2str.solve_key(obj, img)
        sigmas = f2str.solve([tuple(map(Fraction, p)) for p in obj], [tuple(map(Fraction, p)) for p in img])
        assert [f2str.key_to_sigma(key, (1, 1)) for key in keys] == sigmas
        for key, sigma in zip(keys, sigmas):
            assert f2str.key_to_sigma(f2str.invert_key(key), (1, 1)) == f2str.invert_sigma(sigma)
