"""Generators: the perturbed family, its expansions, and random frames."""

import numpy as np
import pytest

import framelab as fl
from framelab.gallery import (
    perturbed_onb_expansion,
    perturbed_onb_family,
    perturbed_onb_subfamily,
    random_frame,
    standard_frames,
)


def test_perturbed_family_layout():
    fam = perturbed_onb_family(5)
    assert (fam.count, fam.ambient_dim) == (8, 5)
    assert fam.labels[:4] == ("e2", "e3", "e4", "e5")
    assert fam.labels[4] == "e2+2^-2e1"
    # plain half first, each half ascending
    assert np.array_equal(fam.vectors[0], [0.0, 1.0, 0.0, 0.0, 0.0])
    assert np.array_equal(fam.vectors[4], [0.25, 1.0, 0.0, 0.0, 0.0])
    assert np.array_equal(fam.vectors[7], [2.0**-5, 0.0, 0.0, 0.0, 1.0])


def test_perturbed_family_spans_everything():
    for n in (3, 6):
        fam = perturbed_onb_family(n)
        assert np.linalg.matrix_rank(fam.vectors) == n
        assert fl.excess(fam) == n - 2


def test_perturbed_family_minimum_size():
    with pytest.raises(ValueError, match="at least 3"):
        perturbed_onb_family(2)


def test_subfamily_selection_and_order():
    sub = perturbed_onb_subfamily([2, 4], [3], n=5)
    assert sub.labels == ("e2", "e4", "e3+2^-3e1")
    assert np.array_equal(sub.vectors[1], [0.0, 0.0, 0.0, 1.0, 0.0])
    assert np.array_equal(sub.vectors[2], [0.125, 0.0, 1.0, 0.0, 0.0])


def test_subfamily_validation():
    with pytest.raises(ValueError, match="outside"):
        perturbed_onb_subfamily([1], [], n=5)
    with pytest.raises(ValueError, match="outside"):
        perturbed_onb_subfamily([], [6], n=5)
    with pytest.raises(ValueError, match="duplicate"):
        perturbed_onb_subfamily([3, 3], [], n=5)
    with pytest.raises(ValueError, match="empty"):
        perturbed_onb_subfamily([], [], n=5)


def test_expansion_hand_cases():
    n = 4
    e1 = np.eye(n)[0]
    # recovering e_1 from the pivot pair {e_2, e_2 + (1/4) e_1}
    coeffs = perturbed_onb_expansion(e1, [2], [2], pivot=2, n=n)
    assert coeffs.tolist() == [-4.0, 4.0]
    # a plain basis vector reads off directly
    e2 = np.eye(n)[1]
    coeffs = perturbed_onb_expansion(e2, [2], [2], pivot=2, n=n)
    assert coeffs.tolist() == [1.0, 0.0]
    # non-pivot plain vector carries its own coefficient
    e3 = np.eye(n)[2]
    coeffs = perturbed_onb_expansion(e3, [2, 3], [2], pivot=2, n=n)
    assert coeffs.tolist() == [0.0, 1.0, 0.0]


def test_expansion_synthesizes_the_input():
    rng = np.random.default_rng(71)
    for _ in range(40):
        n = int(rng.integers(4, 9))
        universe = list(range(2, n + 1))
        pivot = int(rng.choice(universe))
        plain = {pivot} | set(
            int(i) for i in rng.choice(universe, size=rng.integers(0, n - 1))
        )
        pert = {pivot} | set(
            int(i) for i in rng.choice(universe, size=rng.integers(0, n - 1))
        )
        # f must live in span{e_1} + span{e_i : i in plain | pert}
        f = np.zeros(n)
        f[0] = rng.standard_normal()
        for i in plain | pert:
            f[i - 1] = rng.standard_normal()
        coeffs = perturbed_onb_expansion(f, sorted(plain), sorted(pert), pivot, n)
        sub = perturbed_onb_subfamily(sorted(plain), sorted(pert), n)
        resid = np.linalg.norm(sub.vectors.T @ coeffs - f)
        assert resid <= 1e-10 * (1.0 + np.linalg.norm(f))


def test_expansion_rejects_bad_input():
    n = 5
    f = np.eye(n)[0]
    with pytest.raises(ValueError, match="pivot"):
        perturbed_onb_expansion(f, [2], [3], pivot=2, n=n)
    with pytest.raises(ValueError, match="outside the subfamily span"):
        perturbed_onb_expansion(np.eye(n)[4], [2], [2], pivot=2, n=n)
    with pytest.raises(ValueError, match="dimension"):
        perturbed_onb_expansion(np.zeros(3), [2], [2], pivot=2, n=n)


def test_random_frame_determinism_and_shape():
    a = random_frame(3, 7, seed=9)
    b = random_frame(3, 7, seed=9)
    assert np.array_equal(a.vectors, b.vectors)
    assert a.vectors.shape == (7, 3)
    assert not np.array_equal(a.vectors, random_frame(3, 7, seed=10).vectors)


def test_random_frame_spectrum_hint_hits_the_condition_number():
    for hint in (1.0, 10.0, 1e4):
        fr = random_frame(4, 9, seed=2, spectrum_hint=hint)
        b = fl.frame_bounds(fr)
        cond = b.upper / b.lower
        # the profile is geometric, so the hint is matched essentially exactly
        np.testing.assert_allclose(cond, hint, rtol=1e-8)
        assert hint / 2.0 <= cond <= 2.0 * hint


def test_random_frame_validation():
    with pytest.raises(ValueError, match="dimension"):
        random_frame(0, 3)
    with pytest.raises(ValueError, match="count"):
        random_frame(3, 0)
    with pytest.raises(ValueError, match="spectrum_hint"):
        random_frame(3, 5, spectrum_hint=0.5)
    with pytest.raises(ValueError, match="rank-1"):
        random_frame(1, 5, spectrum_hint=8.0)


def test_standard_frames():
    onb = standard_frames("onb", 4)
    assert np.array_equal(onb.vectors, np.eye(4))
    assert onb.labels == ("e1", "e2", "e3", "e4")

    mercedes = standard_frames("mercedes", 2)
    root3 = np.sqrt(3.0)
    assert np.array_equal(
        mercedes.vectors, [[0.0, 1.0], [-root3 / 2, -0.5], [root3 / 2, -0.5]]
    )

    dup = standard_frames("duplicated_onb", 2)
    assert dup.labels == ("e1", "e1", "e2", "e2")
    assert np.array_equal(dup.vectors, np.repeat(np.eye(2), 2, axis=0))

    with pytest.raises(ValueError, match="unknown kind"):
        standard_frames("hexagon", 2)
    with pytest.raises(ValueError, match="R\\^2"):
        standard_frames("mercedes", 3)
