"""Sign/subset suprema and near-Riesz diagnostics.

The reference implementations here enumerate sign patterns and subsets with
itertools, independently of the library's vectorized paths.
"""

import itertools

import numpy as np
import pytest

import framelab as fl
from framelab.series import (
    EXHAUSTIVE_CAP,
    SeriesFamily,
    duplicated_basis_family,
    family_to_text,
    near_riesz_diagnostic,
    parse_family_text,
    read_family_file,
    sign_sup,
    sign_sup_bounds,
    subset_sup,
    subset_sup_exhaustive,
    tail_decay_profile,
    write_family_file,
)


def _norm(row, mode):
    if mode == "euclidean":
        return float(np.sqrt((row * row).sum()))
    return float(np.abs(row).max(initial=0.0))


def naive_sign_sup(terms, mode):
    best = 0.0
    for signs in itertools.product((1.0, -1.0), repeat=terms.shape[0]):
        best = max(best, _norm(np.array(signs) @ terms, mode))
    return best


def naive_subset_sup(rows, mode):
    best = 0.0
    for bits in itertools.product((0.0, 1.0), repeat=rows.shape[0]):
        best = max(best, _norm(np.array(bits) @ rows, mode))
    return best


# --- SeriesFamily ------------------------------------------------------------


def test_series_family_container():
    fam = SeriesFamily([[1.0, 0.0], [0.0, 1.0]], [2.0, -3.0], "coordinate_max")
    assert (fam.count, fam.ambient_dim) == (2, 2)
    assert np.array_equal(fam.terms(), [[2.0, 0.0], [0.0, -3.0]])
    with pytest.raises(ValueError):
        fam.vectors[0, 0] = 5.0


def test_series_family_validation():
    with pytest.raises(ValueError, match="coefficients"):
        SeriesFamily(np.eye(3), [1.0, 2.0])
    with pytest.raises(ValueError, match="norm_mode"):
        SeriesFamily(np.eye(2), [1.0, 2.0], "manhattan")


# --- sign supremum -----------------------------------------------------------


def test_sign_sup_hand_cases():
    # single term: |c| * ||y||
    fam = SeriesFamily([[3.0, 4.0]], [-2.0])
    assert sign_sup(fam, 1) == 10.0
    # orthogonal terms, euclidean: every sign pattern has the same norm
    fam = SeriesFamily(np.eye(2), [1.0, 1.0])
    np.testing.assert_allclose(sign_sup(fam, 1), np.sqrt(2.0), rtol=1e-15)
    # duplicated direction, sup norm: aligned signs add up
    fam = SeriesFamily([[1.0], [1.0]], [1.0, 1.0], "coordinate_max")
    assert sign_sup(fam, 1) == 2.0
    assert sign_sup(fam, 2) == 1.0


def test_sign_sup_matches_naive_enumeration():
    rng = np.random.default_rng(61)
    for mode in ("euclidean", "coordinate_max"):
        for _ in range(10):
            n, d = int(rng.integers(1, 9)), int(rng.integers(1, 5))
            fam = SeriesFamily(rng.standard_normal((n, d)), rng.standard_normal(n), mode)
            terms = fam.terms()
            for m in range(1, n + 1):
                got = sign_sup(fam, m)
                ref = naive_sign_sup(terms[m - 1 :], mode)
                np.testing.assert_allclose(got, ref, rtol=1e-12, atol=1e-13)


def test_sign_sup_invariances():
    rng = np.random.default_rng(62)
    fam = SeriesFamily(rng.standard_normal((7, 3)), rng.standard_normal(7))
    base = sign_sup(fam, 1)
    flipped = SeriesFamily(fam.vectors, -fam.coefficients)
    assert sign_sup(flipped, 1) == base
    perm = rng.permutation(7)
    shuffled = SeriesFamily(fam.vectors[perm], fam.coefficients[perm])
    np.testing.assert_allclose(sign_sup(shuffled, 1), base, rtol=1e-13)
    scaled = SeriesFamily(fam.vectors, 3.0 * fam.coefficients)
    np.testing.assert_allclose(sign_sup(scaled, 1), 3.0 * base, rtol=1e-13)


def test_sign_sup_tail_start_validation():
    fam = SeriesFamily(np.eye(3), np.ones(3))
    for bad in (0, 4, -1):
        with pytest.raises(ValueError, match="tail start"):
            sign_sup(fam, bad)


def test_sign_sup_exact_within_cap_flagged():
    fam = SeriesFamily(np.eye(3), np.ones(3))
    b = sign_sup_bounds(fam, 1)
    assert b.exact and b.lower == b.upper


def test_sign_sup_bounds_beyond_cap():
    rng = np.random.default_rng(63)
    n = EXHAUSTIVE_CAP + 6
    fam = SeriesFamily(rng.standard_normal((n, 4)), rng.standard_normal(n))
    b = sign_sup_bounds(fam, 1, seed=5, samples=1000)
    assert not b.exact
    assert 0.0 < b.lower <= b.upper
    triangle = float(np.sqrt((fam.terms() ** 2).sum(axis=1)).sum())
    np.testing.assert_allclose(b.upper, triangle, rtol=1e-12)
    # reruns with the same seed agree; more samples never lose ground
    again = sign_sup_bounds(fam, 1, seed=5, samples=1000)
    assert again.lower == b.lower
    more = sign_sup_bounds(fam, 1, seed=5, samples=3000)
    assert more.lower >= b.lower


def test_sign_sup_beyond_cap_finds_aligned_optimum():
    # doubled basis with positive coefficients: the exact supremum is the
    # best pair sum, and the aligned heuristic reaches it even past the cap
    n = 13  # 26 terms > cap
    coeffs = 0.8 ** np.arange(1, 2 * n + 1)
    fam = duplicated_basis_family(n, coeffs)
    b = sign_sup_bounds(fam, 1, samples=64)
    assert not b.exact
    pair_sums = coeffs[0::2] + coeffs[1::2]
    assert b.lower == float(pair_sums.max())


def test_thread_count_does_not_change_exact_sign_sup(monkeypatch):
    rng = np.random.default_rng(64)
    fam = SeriesFamily(rng.standard_normal((20, 3)), rng.standard_normal(20))
    monkeypatch.setenv("FRAMELAB_THREADS", "1")
    a = sign_sup(fam, 1)
    monkeypatch.setenv("FRAMELAB_THREADS", "6")
    b = sign_sup(fam, 1)
    assert a == b


# --- tail profile --------------------------------------------------------------


def test_tail_profile_of_doubled_basis_hand_values():
    fam = duplicated_basis_family(4, 2.0 ** -np.arange(1, 9))
    profile = tail_decay_profile(fam)
    assert profile.method == "exhaustive"
    assert profile.triangle_upper is None
    assert profile.tail_starts == tuple(range(1, 9))
    assert profile.values == (
        0.75, 0.25, 0.1875, 0.0625, 0.046875, 0.015625, 0.01171875, 0.00390625,
    )


def test_tail_profile_beyond_cap_reports_brackets():
    rng = np.random.default_rng(65)
    n = EXHAUSTIVE_CAP + 2
    fam = SeriesFamily(rng.standard_normal((n, 2)), rng.standard_normal(n))
    profile = tail_decay_profile(fam, samples=256)
    assert profile.method == "randomized_lower_bound"
    assert profile.triangle_upper is not None
    assert len(profile.triangle_upper) == len(profile.values) == n
    for lo, hi in zip(profile.values, profile.triangle_upper):
        assert lo <= hi + 1e-12


# --- subset supremum -------------------------------------------------------------


def test_subset_sup_hand_case():
    rows = np.array([[1.0, 0.0], [1.0, 0.0], [0.0, -2.0]])
    assert subset_sup(rows, "coordinate_max") == 2.0
    np.testing.assert_allclose(
        subset_sup(rows, "euclidean"), np.sqrt(8.0), rtol=1e-15
    )


def test_subset_sup_matches_naive():
    rng = np.random.default_rng(66)
    for mode in ("euclidean", "coordinate_max"):
        for _ in range(10):
            n, d = int(rng.integers(1, 9)), int(rng.integers(1, 4))
            rows = rng.standard_normal((n, d))
            np.testing.assert_allclose(
                subset_sup(rows, mode), naive_subset_sup(rows, mode), rtol=1e-12
            )


def test_subset_sup_closed_form_equals_enumeration_exactly():
    rng = np.random.default_rng(67)
    for trial in range(120):
        n = int(rng.integers(1, 13))
        d = int(rng.integers(1, 6))
        rows = rng.standard_normal((n, d)) * 10.0 ** rng.integers(-3, 4)
        if trial % 5 == 0:
            rows = np.round(rows)
        if trial % 7 == 0:
            rows[int(rng.integers(n))] = 0.0
        assert subset_sup(rows, "coordinate_max") == subset_sup_exhaustive(
            rows, "coordinate_max"
        )


def test_subset_sup_closed_form_beyond_the_cap():
    # independent closed-form oracle: per-coordinate positive and negative
    # mass, feasible at any count
    rng = np.random.default_rng(68)
    rows = rng.standard_normal((40, 5))
    pos = rows.clip(min=0.0).sum(axis=0)
    neg = (-rows).clip(min=0.0).sum(axis=0)
    oracle = float(max(pos.max(initial=0.0), neg.max(initial=0.0), 0.0))
    assert subset_sup(rows, "coordinate_max") == oracle


def test_subset_sup_caps_and_validation():
    rows = np.zeros((EXHAUSTIVE_CAP + 1, 2))
    with pytest.raises(ValueError, match="capped"):
        subset_sup_exhaustive(rows, "euclidean")
    with pytest.raises(ValueError, match="capped"):
        subset_sup(rows, "euclidean")
    assert subset_sup(rows, "coordinate_max") == 0.0  # closed form has no cap
    with pytest.raises(ValueError, match="norm_mode"):
        subset_sup(np.eye(2), "taxicab")
    assert subset_sup(np.zeros((0, 3)), "coordinate_max") == 0.0


# --- doubled basis and near-Riesz -------------------------------------------------


def test_duplicated_basis_family_structure():
    fam = duplicated_basis_family(3, np.arange(1.0, 7.0))
    assert np.array_equal(fam.vectors, np.repeat(np.eye(3), 2, axis=0))
    assert fam.norm_mode == "coordinate_max"
    with pytest.raises(ValueError, match="coefficients"):
        duplicated_basis_family(3, [1.0, 2.0])
    with pytest.raises(ValueError, match="at least 1"):
        duplicated_basis_family(0, [])


def test_near_riesz_diagnostic_doubled_basis():
    report = near_riesz_diagnostic(fl.standard_frames("duplicated_onb", 3))
    assert report.excess == 3
    assert report.kept == (0, 2, 4)      # first copy of each pair
    assert report.deletion == (1, 3, 5)  # the redundant copies
    assert (report.post_deletion_bounds.lower, report.post_deletion_bounds.upper) == (1.0, 1.0)
    assert report.unconditional


def test_near_riesz_diagnostic_mercedes():
    report = near_riesz_diagnostic(fl.standard_frames("mercedes", 2))
    assert report.excess == 1
    assert report.kept == (0, 1) and report.deletion == (2,)
    np.testing.assert_allclose(
        [report.post_deletion_bounds.lower, report.post_deletion_bounds.upper],
        [0.5, 1.5],
        atol=1e-14,
    )


def test_near_riesz_diagnostic_edge_cases():
    report = near_riesz_diagnostic(fl.standard_frames("onb", 3))
    assert report.excess == 0 and report.deletion == ()
    report = near_riesz_diagnostic(fl.Frame([[0.0, 0.0]]))
    assert report.excess == 1 and report.kept == ()
    assert report.post_deletion_bounds is None


# --- text format -------------------------------------------------------------------


def test_family_text_roundtrip(tmp_path):
    rng = np.random.default_rng(69)
    fam = SeriesFamily(rng.standard_normal((4, 3)), rng.standard_normal(4), "coordinate_max")
    back = parse_family_text(family_to_text(fam), norm_mode="coordinate_max")
    assert np.array_equal(back.vectors, fam.vectors)
    assert np.array_equal(back.coefficients, fam.coefficients)
    assert back.norm_mode == "coordinate_max"
    path = tmp_path / "family.txt"
    write_family_file(fam, path)
    assert np.array_equal(read_family_file(path).coefficients, fam.coefficients)


def test_family_text_parse_errors():
    with pytest.raises(ValueError, match="line 1"):
        parse_family_text("0.5 1.0 2.0\n")  # missing the separator
    with pytest.raises(ValueError, match="line 2"):
        parse_family_text("0.5 | 1.0\nx | 2.0\n")
    with pytest.raises(ValueError, match="line 3"):
        parse_family_text("1.0 | 1.0 2.0\n# fine\n2.0 | 3.0\n")
    with pytest.raises(ValueError, match="no terms"):
        parse_family_text("# empty\n")
