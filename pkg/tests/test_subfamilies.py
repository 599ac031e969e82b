"""Subfamily bound scans, localization, and decay tables.

Brute-force enumerations with np.linalg.eigvalsh serve as the independent
oracle throughout.
"""

import itertools

import numpy as np
import pytest

import framelab as fl
from framelab.subfamilies import (
    LocalizationResult,
    RieszFrameCertificate,
    common_bound_decay,
    riesz_frame_constant,
    subfamily_lower_bound,
    tail_localization,
)

# smallest eigenvalue of [[1/16, 1/4], [1/4, 2]], frozen from a 50-digit
# decimal quadratic-formula computation done independently of the library
PAIR_BOUND_N2 = 0.030761837901117393


def brute_min_bound(vectors, rank_rel=1e-12):
    """Exhaustive reference: min over nonempty subsets of the smallest
    nonzero eigenvalue of the subset operator."""
    n = vectors.shape[0]
    best, best_sub = np.inf, None
    for r in range(1, n + 1):
        for sub in itertools.combinations(range(n), r):
            rows = vectors[list(sub)]
            w = np.linalg.eigvalsh(rows.T @ rows)
            nz = w[w > rank_rel * max(w[-1], 0.0)]
            if nz.size and nz[0] < best:
                best, best_sub = float(nz[0]), sub
    return best, best_sub


# --- subfamily_lower_bound ----------------------------------------------------


def test_subfamily_lower_bound_hand_cases():
    onb = fl.standard_frames("onb", 4)
    assert subfamily_lower_bound(onb, (0,)) == 1.0
    assert subfamily_lower_bound(onb, range(4)) == 1.0
    # singleton bound is the squared length
    assert subfamily_lower_bound(fl.Frame([[2.0, 0.0]]), (0,)) == 4.0
    # two copies of one vector span a line with operator eigenvalue 2
    dup = fl.Frame([[1.0, 0.0], [1.0, 0.0]])
    np.testing.assert_allclose(subfamily_lower_bound(dup, (0, 1)), 2.0, atol=1e-14)


def test_subfamily_lower_bound_pair_oracle():
    fam = fl.perturbed_onb_family(6)
    got = subfamily_lower_bound(fam, (0, 5))  # {e_2, e_2 + (1/4) e_1}
    assert abs(got - PAIR_BOUND_N2) <= 1e-12


def test_subfamily_lower_bound_rejects():
    fr = fl.Frame([[0.0, 0.0], [1.0, 0.0]])
    with pytest.raises(ValueError, match="nonempty"):
        subfamily_lower_bound(fr, ())
    with pytest.raises(ValueError, match="zero subspace"):
        subfamily_lower_bound(fr, (0,))
    with pytest.raises(ValueError, match="out of range"):
        subfamily_lower_bound(fr, (2,))


# --- riesz_frame_constant -----------------------------------------------------


def test_certificate_of_orthonormal_family():
    cert = riesz_frame_constant(fl.standard_frames("onb", 5))
    assert cert.constant == 1.0
    assert cert.witness == (0,)  # smallest near-tied subset, lexicographic
    assert cert.subsets_examined == 2**5 - 1
    assert cert.method == "exhaustive"


def test_certificate_of_redundant_family():
    # {e1, e1, e2}: every subfamily has lower bound >= 1, minimum 1
    fr = fl.Frame([[1.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    cert = riesz_frame_constant(fr)
    assert cert.constant == 1.0 and cert.witness == (0,)


def test_exhaustive_certificate_matches_brute_force():
    rng = np.random.default_rng(41)
    for _ in range(12):
        n, d = int(rng.integers(2, 9)), int(rng.integers(2, 6))
        fr = fl.Frame(rng.standard_normal((n, d)))
        cert = riesz_frame_constant(fr)
        ref, _ = brute_min_bound(fr.vectors)
        assert cert.method == "exhaustive"
        assert cert.subsets_examined == 2**n - 1
        np.testing.assert_allclose(cert.constant, ref, rtol=1e-9)
        # the witness attains the constant
        got = subfamily_lower_bound(fr, cert.witness)
        assert abs(got - cert.constant) <= 1e-10 * max(1.0, cert.constant)


def test_perturbed_family_certificate_structure():
    # The minimizing subset couples the weakest pair with all other
    # perturbed vectors through their shared first coordinate.
    for n in (4, 5):
        fam = fl.perturbed_onb_family(n)
        cert = riesz_frame_constant(fam)
        ref, ref_sub = brute_min_bound(fam.vectors)
        np.testing.assert_allclose(cert.constant, ref, rtol=1e-9)
        assert cert.witness == ref_sub == tuple(range(n - 2, 2 * n - 2))
        assert cert.constant <= 2.0 ** (-2 * n)
        # strictly below the bare pair bound
        assert cert.constant < subfamily_lower_bound(fam, (n - 2, 2 * n - 3))


def test_sampled_mode_is_an_upper_bound_of_exhaustive():
    rng = np.random.default_rng(42)
    fr = fl.Frame(rng.standard_normal((10, 4)))
    full = riesz_frame_constant(fr)                      # 2^10 <= default budget
    samp = riesz_frame_constant(fr, budget=500, seed=3)  # forced sampling
    assert full.method == "exhaustive" and samp.method == "sampled"
    assert samp.constant >= full.constant
    assert 500 - 10 <= samp.subsets_examined <= 500
    got = subfamily_lower_bound(fr, samp.witness)
    assert abs(got - samp.constant) <= 1e-10 * max(1.0, samp.constant)


def test_sampled_mode_always_scans_the_deterministic_core():
    # budget below the deterministic part (singletons, pairs, leave-one-out,
    # full set): the core is scanned anyway
    rng = np.random.default_rng(43)
    fr = fl.Frame(rng.standard_normal((10, 3)))
    cert = riesz_frame_constant(fr, budget=50)
    assert cert.method == "sampled"
    assert cert.subsets_examined == 10 + 45 + 10 + 1


def test_sampled_mode_on_a_large_perturbed_family():
    # Regression: the sampled operators of this family have exact eigenvalue
    # ties plus tiny couplings, which once stalled the eigensolver endgame.
    cert = riesz_frame_constant(fl.perturbed_onb_family(14), budget=4096)
    assert cert.method == "sampled"
    assert cert.subsets_examined == 4096
    assert 0.0 < cert.constant <= 2.0 ** -28  # the pair core sees the weak sets


def test_certificate_deterministic_across_thread_counts(monkeypatch):
    fam = fl.perturbed_onb_family(6)
    monkeypatch.setenv("FRAMELAB_THREADS", "1")
    one = riesz_frame_constant(fam)
    monkeypatch.setenv("FRAMELAB_THREADS", "7")
    many = riesz_frame_constant(fam)
    assert one.constant == many.constant  # bitwise
    assert one.witness == many.witness
    assert one.subsets_examined == many.subsets_examined


def test_certificate_validation():
    with pytest.raises(ValueError, match="empty"):
        riesz_frame_constant(fl.Frame(np.zeros((0, 2))))
    with pytest.raises(ValueError, match="budget"):
        riesz_frame_constant(fl.standard_frames("onb", 2), budget=0)
    with pytest.raises(ValueError, match="zero subspace"):
        riesz_frame_constant(fl.Frame(np.zeros((3, 2))))


# --- tail_localization ----------------------------------------------------------


def _projected_tail_oracle(vectors, seed_idx, extended_idx):
    """lambda_max of P T P via numpy SVD/eigvalsh only."""
    rows = vectors[list(seed_idx)]
    u, s, vt = np.linalg.svd(rows, full_matrices=False)
    basis = vt[s > 1e-12 * max(s.max(initial=0.0), 1e-300)]
    p = basis.T @ basis
    outside = [i for i in range(vectors.shape[0]) if i not in set(extended_idx)]
    if not outside:
        return 0.0
    t = vectors[outside].T @ vectors[outside]
    m = p @ t @ p
    return float(np.linalg.eigvalsh((m + m.T) / 2.0)[-1])


def test_localization_adds_only_the_partner():
    fam = fl.perturbed_onb_family(6)
    res = tail_localization(fam, (0,), eps=0.01)
    # only e_2 + (1/4)e_1 has energy on span{e_2}
    assert res.extended == (0, 5)
    assert res.achieved == 0.0
    assert res.span_dim == 1


def test_localization_short_circuits_for_large_eps():
    fam = fl.perturbed_onb_family(5)
    big = fl.frame_bounds(fam).upper + 1.0
    res = tail_localization(fam, (0, 1), eps=big)
    assert res.extended == (0, 1)


def test_localization_zero_span_seed():
    fr = fl.Frame([[0.0, 0.0], [1.0, 0.0]])
    res = tail_localization(fr, (0,), eps=0.5)
    assert res == LocalizationResult(extended=(0,), achieved=0.0, span_dim=0)


def test_localization_random_sweep_meets_eps():
    rng = np.random.default_rng(44)
    for trial in range(15):
        n, d = int(rng.integers(3, 11)), int(rng.integers(2, 6))
        fr = fl.Frame(rng.standard_normal((n, d)))
        seed = tuple(int(i) for i in rng.choice(n, size=rng.integers(1, 3), replace=False))
        eps = float(rng.choice([0.05, 0.2, 1.0]))
        res = tail_localization(fr, seed, eps)
        assert set(seed) <= set(res.extended)
        assert res.achieved <= eps
        lam = _projected_tail_oracle(fr.vectors, sorted(set(seed)), res.extended)
        assert lam <= eps
        assert abs(lam - res.achieved) <= 1e-9 * max(1.0, lam)


def test_localization_validation():
    fr = fl.standard_frames("onb", 3)
    with pytest.raises(ValueError, match="nonempty"):
        tail_localization(fr, (), eps=0.1)
    for bad_eps in (0.0, -1.0, float("inf"), float("nan")):
        with pytest.raises(ValueError, match="eps"):
            tail_localization(fr, (0,), eps=bad_eps)


# --- common_bound_decay -----------------------------------------------------------


def test_decay_table_for_the_perturbed_family():
    rows = common_bound_decay(range(3, 6))
    constants = [cert.constant for _, cert in rows]
    assert [n for n, _ in rows] == [3, 4, 5]
    for (n, cert), c in zip(rows, constants):
        assert c <= 2.0 ** (-2 * n)
        assert cert.method == "exhaustive"
    assert constants[0] > constants[1] > constants[2]


def test_decay_table_orthonormal_families_are_flat():
    for name in ("onb", "duplicated_onb"):
        rows = common_bound_decay([3, 4], family=name)
        assert [cert.constant for _, cert in rows] == [1.0, 1.0]


def test_decay_accepts_a_callable_generator():
    rows = common_bound_decay([3], family=lambda n: fl.standard_frames("onb", n))
    assert rows[0][1].constant == 1.0


def test_decay_validation():
    with pytest.raises(ValueError, match="at least 3"):
        common_bound_decay([2])
    with pytest.raises(ValueError, match="no sizes"):
        common_bound_decay([])
    with pytest.raises(ValueError, match="unknown family"):
        common_bound_decay([3], family="mystery")
