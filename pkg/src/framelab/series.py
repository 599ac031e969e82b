"""Sign and subset suprema for finite vector series, plus near-Riesz reports.

The central objects are finite families of terms c_i * y_i together with a
norm mode: "euclidean" for ordinary length, "coordinate_max" for the sup
norm over coordinates (the finite-dimensional model of sequence spaces
with supremum norm). The diagnostics measure unconditionality at desk
scale: the sign supremum of tails

    s_m = sup over signs e_i = +-1 of || sum_{i >= m} e_i c_i y_i ||

and the subset supremum sup over index sets D of || sum_{n in D} x_n ||.

Enumerations are exact up to EXHAUSTIVE_CAP items; beyond the cap the
functions report certified lower bounds paired with triangle-inequality
upper bounds, and never label a bound as exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._threads import run_chunks
from .frames import Frame, FrameBounds, SubsetId, frame_bounds
from .numkernel import (
    DEFAULT_TOLERANCE,
    TolerancePolicy,
    as_matrix,
    as_vector,
    numerical_rank,
)

EXHAUSTIVE_CAP = 24
NORM_MODES = ("euclidean", "coordinate_max")

_CHUNK = 1 << 16


@dataclass(frozen=True)
class SeriesFamily:
    """Vectors y_i with scalar coefficients c_i and a norm mode.

    ``vectors`` is an (N, d) array of rows; ``coefficients`` has length N.
    The i-th term of the series is coefficients[i] * vectors[i].
    """

    vectors: np.ndarray
    coefficients: np.ndarray
    norm_mode: str = "euclidean"

    def __post_init__(self) -> None:
        vecs = as_matrix(self.vectors, "vectors")
        coeffs = as_vector(self.coefficients, "coefficients")
        if vecs.shape[1] < 1:
            raise ValueError("vectors need an ambient dimension of at least 1")
        if vecs.shape[0] != coeffs.shape[0]:
            raise ValueError(
                f"{coeffs.shape[0]} coefficients for {vecs.shape[0]} vectors"
            )
        if self.norm_mode not in NORM_MODES:
            raise ValueError(
                f"norm_mode must be one of {NORM_MODES}, got {self.norm_mode!r}"
            )
        vecs.setflags(write=False)
        coeffs.setflags(write=False)
        object.__setattr__(self, "vectors", vecs)
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def count(self) -> int:
        return self.vectors.shape[0]

    @property
    def ambient_dim(self) -> int:
        return self.vectors.shape[1]

    def terms(self) -> np.ndarray:
        """The rows c_i * y_i."""
        return self.coefficients[:, None] * self.vectors


@dataclass(frozen=True)
class SignSupBounds:
    """Sign supremum of one tail: exact value or certified bracket."""

    lower: float
    upper: float
    exact: bool


@dataclass(frozen=True)
class SignSupReport:
    """Tail profile m -> s_m.

    When ``method`` is "exhaustive" every value is the exact maximum over
    all sign patterns of its tail and ``triangle_upper`` is None. With
    method "randomized_lower_bound" the values are certified lower bounds
    and ``triangle_upper`` holds the matching triangle-inequality upper
    bounds sum_{i>=m} |c_i| ||y_i||.
    """

    tail_starts: tuple[int, ...]
    values: tuple[float, ...]
    method: str
    triangle_upper: tuple[float, ...] | None = None


@dataclass(frozen=True)
class NearRieszReport:
    """Excess and a minimal deletion turning the family independent.

    ``deletion`` has exactly ``excess`` indices; ``kept`` is its complement,
    an independent family with the same span, whose verified frame bounds
    are ``post_deletion_bounds``. ``unconditional`` records the desk-scale
    reading of finite excess (always true for finite families with nonzero
    span).
    """

    excess: int
    deletion: SubsetId
    kept: SubsetId
    post_deletion_bounds: FrameBounds | None
    unconditional: bool


def _mode_norms(rows: np.ndarray, norm_mode: str) -> np.ndarray:
    if norm_mode == "euclidean":
        return np.sqrt((rows * rows).sum(axis=1))
    if norm_mode == "coordinate_max":
        return np.abs(rows).max(axis=1, initial=0.0)
    raise ValueError(f"norm_mode must be one of {NORM_MODES}, got {norm_mode!r}")


def _masked_sums(x: np.ndarray, masks: np.ndarray) -> np.ndarray:
    """Row sums of x restricted to each mask: (B, N) bool -> (B, d).

    Every caller that must agree bitwise with another enumeration routes
    through this one function: excluded rows contribute an exact 0.0 and
    the reduction always runs over all N slots in fixed order, so a given
    mask yields the same floats regardless of batch size or position.
    """
    contrib = np.where(masks[:, :, None], x[None, :, :], 0.0)
    return np.add.reduce(contrib, axis=1)


def _sign_patterns(lo: int, hi: int, t: int) -> np.ndarray:
    """Sign rows (+-1) for pattern ids lo..hi-1; the first sign is fixed +."""
    ints = np.arange(lo, hi, dtype=np.int64)
    if t == 1:
        return np.ones((ints.shape[0], 1))
    bits = ((ints[:, None] >> np.arange(t - 1, dtype=np.int64)) & 1).astype(float)
    return np.hstack([np.ones((ints.shape[0], 1)), 1.0 - 2.0 * bits])


def _sign_sup_exact(tail: np.ndarray, norm_mode: str) -> float:
    t = tail.shape[0]
    if t == 0:
        return 0.0
    total = 1 << (t - 1)  # norms are invariant under a global sign flip
    ranges = [(lo, min(lo + _CHUNK, total)) for lo in range(0, total, _CHUNK)]

    def eval_range(span):
        lo, hi = span
        sums = _sign_patterns(lo, hi, t) @ tail
        return float(_mode_norms(sums, norm_mode).max())

    return max(run_chunks(eval_range, ranges))


def _sign_sup_sampled(tail: np.ndarray, norm_mode: str, seed: int, samples: int) -> float:
    t = tail.shape[0]
    rng = np.random.default_rng(seed)
    best = 0.0
    # Aligned heuristics: match signs to each coordinate, plus all-plus.
    heur = [np.ones(t)]
    for j in range(tail.shape[1]):
        col = np.where(tail[:, j] >= 0.0, 1.0, -1.0)
        heur.append(col)
    sums = np.vstack(heur) @ tail
    best = max(best, float(_mode_norms(sums, norm_mode).max()))
    done = 0
    while done < samples:
        m = min(_CHUNK, samples - done)
        signs = rng.integers(0, 2, size=(m, t)).astype(float) * 2.0 - 1.0
        sums = signs @ tail
        best = max(best, float(_mode_norms(sums, norm_mode).max()))
        done += m
    return best


def _check_tail_start(count: int, m: int) -> int:
    m = int(m)
    if not 1 <= m <= count:
        raise ValueError(f"tail start must be in 1..{count}, got {m}")
    return m


def sign_sup(series: SeriesFamily, m: int) -> float:
    """Sign supremum of the tail starting at term m (1-based, inclusive).

    Exact (maximum over all 2^T sign patterns of the T-term tail) whenever
    T <= EXHAUSTIVE_CAP. For longer tails this returns the certified lower
    bound from seeded sampling; use :func:`sign_sup_bounds` to get the
    accompanying upper bound.
    """
    return sign_sup_bounds(series, m).lower


def sign_sup_bounds(
    series: SeriesFamily, m: int, seed: int = 0, samples: int = 4096
) -> SignSupBounds:
    """Exact value or certified (lower, upper) bracket for one tail."""
    m = _check_tail_start(series.count, m)
    tail = series.terms()[m - 1 :]
    if tail.shape[0] <= EXHAUSTIVE_CAP:
        v = _sign_sup_exact(tail, series.norm_mode)
        return SignSupBounds(lower=v, upper=v, exact=True)
    lower = _sign_sup_sampled(tail, series.norm_mode, seed, samples)
    upper = float(_mode_norms(tail, series.norm_mode).sum())
    return SignSupBounds(lower=lower, upper=upper, exact=False)


def tail_decay_profile(series: SeriesFamily, seed: int = 0, samples: int = 4096) -> SignSupReport:
    """s_m for every tail start m = 1..N.

    Tails within the exhaustive cap are exact; if any tail is longer the
    whole report is labelled "randomized_lower_bound" and carries triangle
    upper bounds for every m. No monotonicity is asserted; the profile is
    reported as computed.
    """
    n = series.count
    starts = tuple(range(1, n + 1))
    bounds = [sign_sup_bounds(series, m, seed=seed, samples=samples) for m in starts]
    if all(b.exact for b in bounds):
        return SignSupReport(
            tail_starts=starts,
            values=tuple(b.lower for b in bounds),
            method="exhaustive",
        )
    terms = series.terms()
    norms = _mode_norms(terms, series.norm_mode)
    uppers = tuple(float(norms[m - 1 :].sum()) for m in starts)
    return SignSupReport(
        tail_starts=starts,
        values=tuple(b.lower for b in bounds),
        method="randomized_lower_bound",
        triangle_upper=uppers,
    )


def subset_sup_exhaustive(vectors, norm_mode: str) -> float:
    """Reference enumerator: max over all 2^N subsets of the sum's norm.

    Only feasible for N <= EXHAUSTIVE_CAP; rejected beyond that.
    """
    x = as_matrix(vectors, "vectors")
    n = x.shape[0]
    if n == 0:
        return 0.0
    if n > EXHAUSTIVE_CAP:
        raise ValueError(
            f"exhaustive subset enumeration capped at {EXHAUSTIVE_CAP} vectors, got {n}"
        )
    total = 1 << n
    ranges = [(lo, min(lo + _CHUNK, total)) for lo in range(0, total, _CHUNK)]

    def eval_range(span):
        lo, hi = span
        ints = np.arange(lo, hi, dtype=np.int64)
        masks = ((ints[:, None] >> np.arange(n, dtype=np.int64)) & 1).astype(bool)
        sums = _masked_sums(x, masks)
        return float(_mode_norms(sums, norm_mode).max())

    return max(run_chunks(eval_range, ranges))


def subset_sup(vectors, norm_mode: str) -> float:
    """Maximum over index sets D of || sum_{n in D} x_n ||.

    In coordinate_max mode this is computed exactly in closed form for any
    N: the optimum is attained, at some coordinate j, either by the set of
    rows positive at j or by the set of rows negative at j, so only those
    2d candidate sets need evaluating. The candidates are evaluated by the
    same masked-sum primitive as the exhaustive enumerator, which makes the
    two agree exactly (not just to rounding) wherever both apply.

    Euclidean mode has no such closed form and enumerates (N <= cap).
    """
    x = as_matrix(vectors, "vectors")
    if norm_mode not in NORM_MODES:
        raise ValueError(f"norm_mode must be one of {NORM_MODES}, got {norm_mode!r}")
    n = x.shape[0]
    if n == 0:
        return 0.0
    if norm_mode == "euclidean":
        return subset_sup_exhaustive(x, norm_mode)
    masks = np.vstack([x.T > 0.0, x.T < 0.0])  # (2d, N)
    sums = _masked_sums(x, masks)
    return float(_mode_norms(sums, norm_mode).max(initial=0.0))


def duplicated_basis_family(n: int, coefficients) -> SeriesFamily:
    """The doubled orthonormal family (e_1, e_1, e_2, e_2, ..., e_n, e_n).

    Takes 2n coefficients; lives in coordinate_max mode, where consecutive
    duplicate pairs make sign sums collapse to coefficient differences.
    """
    n = int(n)
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    coeffs = as_vector(coefficients, "coefficients")
    if coeffs.shape[0] != 2 * n:
        raise ValueError(f"expected {2 * n} coefficients, got {coeffs.shape[0]}")
    vectors = np.repeat(np.eye(n), 2, axis=0)
    return SeriesFamily(vectors=vectors, coefficients=coeffs, norm_mode="coordinate_max")


def near_riesz_diagnostic(
    frame: Frame, pol: TolerancePolicy = DEFAULT_TOLERANCE
) -> NearRieszReport:
    """Excess of the family and a deletion that leaves a Riesz basis.

    Finds (greedily) an independent subfamily with the same span; the
    remaining ``excess`` indices form the deletion set. Frame bounds of
    the kept family are re-verified and reported, confirming that deleting
    finitely many vectors leaves a frame for its span. For finite families
    the unconditionality flag is the finiteness of the excess itself.
    """
    from .extraction import extract

    n = frame.count
    rank = numerical_rank(frame.vectors, pol) if n else 0
    if rank == 0:
        return NearRieszReport(
            excess=n,
            deletion=tuple(range(n)),
            kept=(),
            post_deletion_bounds=None,
            unconditional=True,
        )
    kept = extract(frame, "greedy", pol).selected
    kept_set = set(kept)
    deletion = tuple(i for i in range(n) if i not in kept_set)
    bounds = frame_bounds(frame.subset(kept), pol)
    return NearRieszReport(
        excess=n - rank,
        deletion=deletion,
        kept=kept,
        post_deletion_bounds=bounds,
        unconditional=True,
    )


# ---------------------------------------------------------------------------
# Family text format: one term per line as "coefficient | vector entries",
# e.g. "0.25 | 0.0 1.0 0.0". '#' comment lines and blank lines are skipped.
# ---------------------------------------------------------------------------


def family_to_text(series: SeriesFamily) -> str:
    lines = [f"# {series.count} terms in R^{series.ambient_dim}"]
    for c, row in zip(series.coefficients, series.vectors):
        lines.append(repr(float(c)) + " | " + " ".join(repr(float(x)) for x in row))
    return "\n".join(lines) + "\n"


def parse_family_text(text: str, norm_mode: str = "euclidean") -> SeriesFamily:
    coeffs: list[float] = []
    rows: list[list[float]] = []
    width = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.count("|") != 1:
            raise ValueError(
                f"line {lineno}: expected 'coefficient | vector entries'"
            )
        left, right = line.split("|")
        try:
            c = float(left.strip())
            row = [float(tok) for tok in right.split()]
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ValueError(
                f"line {lineno}: expected {width} entries, found {len(row)}"
            )
        coeffs.append(c)
        rows.append(row)
    if not rows:
        raise ValueError("no terms found in family text")
    return SeriesFamily(
        vectors=np.array(rows, dtype=float),
        coefficients=np.array(coeffs, dtype=float),
        norm_mode=norm_mode,
    )


def write_family_file(series: SeriesFamily, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(family_to_text(series))


def read_family_file(path, norm_mode: str = "euclidean") -> SeriesFamily:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_family_text(fh.read(), norm_mode=norm_mode)
