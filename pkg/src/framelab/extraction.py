"""Riesz basis extraction from redundant frames.

Given a frame, find an independent subfamily of full span rank whose Gram
matrix has a good smallest eigenvalue. Three strategies are provided:
exhaustive search over all subsets of size rank (optimal), greedy
smallest-eigenvalue lookahead, and a seed-project-complete scheme that
orthogonally projects the family against a small seed span, extracts from
the projected vectors, and completes with the seed.

Also houses the perturbation certificate: a family obtained from an
orthonormal system by perturbations with total squared distance mu < 1 is
a Riesz basis for its span, and the certificate records mu and the pairing.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from ._threads import run_chunks, thread_count
from .frames import (
    Frame,
    SubsetId,
    gram_matrix,
    is_riesz_basis,
    normalize_indices,
)
from .numkernel import (
    DEFAULT_TOLERANCE,
    TolerancePolicy,
    as_matrix,
    eigenvalues_psd_stack,
    numerical_rank,
    projector_onto_span,
    sym_eigen_many,
)

_CHUNK = 4096

STRATEGIES = ("exhaustive", "greedy", "projection")


class DependentFamilyError(ValueError):
    """Raised when an operation requires independence and the family lacks it.

    ``null_combination`` holds coefficients c (unit norm) with
    sum c_i f_i ~ 0 over the offending subfamily, making the failure
    reproducible and actionable.
    """

    def __init__(self, message: str, null_combination: np.ndarray):
        super().__init__(message)
        self.null_combination = null_combination


@dataclass(frozen=True)
class ExtractionResult:
    """An independent spanning subfamily and its Riesz bounds.

    ``riesz_lower``/``riesz_upper`` are the extreme eigenvalues of the Gram
    matrix of the selected subfamily, so for any coefficients c the
    synthesis norm obeys

        riesz_lower * sum c_i^2 <= ||sum c_i f_i||^2 <= riesz_upper * sum c_i^2.

    ``completed_with`` lists the seed indices the projection strategy
    completed with (empty for the other strategies); the seed is part of
    ``selected``.
    """

    selected: SubsetId
    riesz_lower: float
    riesz_upper: float
    strategy: str
    completed_with: SubsetId


@dataclass(frozen=True)
class PerturbationCertificate:
    """Riesz-basis certificate by proximity to an orthonormal system.

    ``mu`` is the total squared perturbation sum ||f_i - e_{pairing(i)}||^2
    against the orthonormal reference; ``certified`` records the strict
    test mu < 1, which guarantees the family is a Riesz basis for its span.
    """

    pairing: tuple[int, ...]
    mu: float
    certified: bool


def riesz_bounds_of_subset(
    frame: Frame, subset, pol: TolerancePolicy = DEFAULT_TOLERANCE
) -> tuple[float, float]:
    """Extreme Gram eigenvalues of an independent subfamily.

    Raises DependentFamilyError (with a kernel witness) when the subfamily
    is linearly dependent at the working rank cutoff.
    """
    idx = normalize_indices(subset, frame.count, require_nonempty=True)
    sub = frame.vectors[list(idx), :]
    g = sub @ sub.T
    vals, vecs = sym_eigen_many(((g + g.T) / 2.0)[None], pol, vectors=True)
    vals, vecs = vals[0], vecs[0]
    cutoff = pol.rank_rel * max(vals[-1], 0.0)
    if vals[0] <= cutoff:
        null = vecs[:, 0].copy()
        lead = int(np.argmax(np.abs(null)))
        if null[lead] < 0:
            null = -null
        raise DependentFamilyError(
            f"subfamily {idx} is linearly dependent "
            f"(smallest Gram eigenvalue {vals[0]:.3e})",
            null_combination=null,
        )
    return float(vals[0]), float(vals[-1])


def _subset_grams(g: np.ndarray, idx: np.ndarray) -> np.ndarray:
    return g[idx[:, :, None], idx[:, None, :]]


def _greedy_select(g: np.ndarray, count: int, target: int, pol: TolerancePolicy) -> list[int]:
    """Greedy smallest-eigenvalue lookahead selection over a Gram matrix.

    At each step, among all unselected indices pick the one whose addition
    maximizes the smallest eigenvalue of the selected Gram block; ties go
    to the smallest index.
    """
    selected: list[int] = []
    for _ in range(target):
        cands = [i for i in range(count) if i not in selected]
        stack = np.array([selected + [c] for c in cands], dtype=np.intp)
        vals = eigenvalues_psd_stack(_subset_grams(g, stack), pol)
        selected.append(cands[int(np.argmax(vals[:, 0]))])
    return selected


def _exhaustive_select(g: np.ndarray, count: int, rank: int, pol: TolerancePolicy) -> SubsetId:
    best_val = -np.inf
    best_idx: SubsetId = ()
    combos = itertools.combinations(range(count), rank)
    group_size = max(1, thread_count())

    def eval_chunk(idx: np.ndarray) -> tuple[float, int]:
        vals = eigenvalues_psd_stack(_subset_grams(g, idx), pol)
        j = int(np.argmax(vals[:, 0]))
        return float(vals[j, 0]), j

    while True:
        group = []
        for _ in range(group_size):
            chunk = list(itertools.islice(combos, _CHUNK))
            if not chunk:
                break
            group.append(np.array(chunk, dtype=np.intp))
        if not group:
            break
        # Chunks are in combination (lexicographic) order and argmax keeps
        # the first maximum, so ties resolve to the smallest index set no
        # matter how the chunks are scheduled.
        for idx, (val, j) in zip(group, run_chunks(eval_chunk, group)):
            if val > best_val:
                best_val = val
                best_idx = tuple(int(x) for x in idx[j])
    return best_idx


def extract(
    frame: Frame,
    strategy: str = "exhaustive",
    pol: TolerancePolicy = DEFAULT_TOLERANCE,
    seed_size: int | None = None,
) -> ExtractionResult:
    """Select an independent subfamily spanning the same space as the frame.

    strategy:
        "exhaustive": best subset of size rank by smallest Gram eigenvalue
            (ties broken lexicographically).
        "greedy": stepwise lookahead, adding the vector that maximizes the
            smallest eigenvalue of the growing Gram block.
        "projection": pick a greedy seed of ``seed_size`` vectors (default
            min(2, rank)), project the remaining vectors against the seed
            span, extract greedily from the projected family, and complete
            with the seed; ``completed_with`` records the seed.

    The reported bounds are always measured on the original (unprojected)
    selected vectors through one shared code path, so identical selections
    yield identical bounds across strategies.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")
    if seed_size is not None and strategy != "projection":
        raise ValueError("seed_size only applies to the projection strategy")
    n = frame.count
    rank = numerical_rank(frame.vectors, pol)
    if rank == 0:
        raise ValueError("cannot extract from a family spanning the zero subspace")
    g = gram_matrix(frame)

    completed: SubsetId = ()
    if strategy == "exhaustive":
        selected = _exhaustive_select(g, n, rank, pol)
    elif strategy == "greedy":
        selected = tuple(sorted(_greedy_select(g, n, rank, pol)))
    else:
        k = min(2, rank) if seed_size is None else int(seed_size)
        if not 1 <= k <= rank:
            raise ValueError(f"seed_size must be in 1..{rank}, got {seed_size}")
        seed = _greedy_select(g, n, k, pol)
        others = [i for i in range(n) if i not in seed]
        chosen: list[int] = []
        if rank > k and others:
            p = projector_onto_span(frame.vectors[seed], pol)
            rest = frame.vectors[others]
            proj = rest - rest @ p
            gp = proj @ proj.T
            gp = (gp + gp.T) / 2.0
            pos = _greedy_select(gp, len(others), rank - k, pol)
            chosen = [others[j] for j in pos]
        selected = tuple(sorted(seed + chosen))
        completed = tuple(sorted(seed))

    lower, upper = riesz_bounds_of_subset(frame, selected, pol)
    return ExtractionResult(
        selected=selected,
        riesz_lower=lower,
        riesz_upper=upper,
        strategy=strategy,
        completed_with=completed,
    )


def perturbation_certificate(
    frame: Frame,
    reference,
    pairing=None,
    pol: TolerancePolicy = DEFAULT_TOLERANCE,
) -> PerturbationCertificate:
    """Certify a family as a Riesz basis by distance to an orthonormal system.

    ``reference`` is an orthonormal family (Frame or array of rows) of the
    same size; ``pairing`` maps frame index i to reference index
    pairing[i] (identity when omitted) and must be a bijection. The
    certificate computes mu = sum ||f_i - e_{pairing(i)}||^2 and certifies
    when mu < 1 strictly.

    A certified family is independent; this is cross-checked against
    is_riesz_basis and a contradiction raises RuntimeError. Note the check
    can genuinely trip for mu extremely close to 1, where the guaranteed
    smallest Gram eigenvalue (1 - sqrt(mu))^2 sinks below the working rank
    cutoff.
    """
    ref = reference.vectors if isinstance(reference, Frame) else as_matrix(reference, "reference")
    if ref.shape != frame.vectors.shape:
        raise ValueError(
            f"reference shape {ref.shape} does not match frame shape {frame.vectors.shape}"
        )
    m = frame.count
    ortho_defect = np.abs(ref @ ref.T - np.eye(m)).max() if m else 0.0
    if ortho_defect > pol.residual_abs:
        raise ValueError(
            f"reference is not orthonormal: max |<e_i,e_j> - delta_ij| = {ortho_defect:.3e}"
        )
    if pairing is None:
        pairing = tuple(range(m))
    else:
        pairing = tuple(int(i) for i in pairing)
        if sorted(pairing) != list(range(m)):
            raise ValueError("pairing must be a bijection onto the reference indices")
    diff = frame.vectors - ref[list(pairing), :]
    mu = float((diff * diff).sum())
    certified = bool(mu < 1.0)
    if certified and not is_riesz_basis(frame, pol).is_riesz:
        raise RuntimeError(
            f"certificate contradiction: mu = {mu} < 1 but the family "
            "failed the independence check"
        )
    return PerturbationCertificate(pairing=pairing, mu=mu, certified=certified)
