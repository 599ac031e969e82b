"""Finite frames: operators, bounds, duals, reconstruction, and file I/O.

A frame here is a finite family of vectors in R^d stored as the rows of an
(n, d) array. Bounds are always taken relative to the span of the family,
so a family that only spans a subspace is still a frame for that subspace
and its lower bound is the smallest nonzero eigenvalue of the frame
operator, not zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .numkernel import (
    DEFAULT_TOLERANCE,
    TolerancePolicy,
    as_matrix,
    as_vector,
    numerical_rank,
    spd_solve,
    sym_eigen,
    sym_eigen_many,
)

SubsetId = tuple[int, ...]


def normalize_indices(indices, count: int, require_nonempty: bool = False) -> SubsetId:
    """Validate a collection of 0-based indices and return it sorted.

    Rejects duplicates, non-integers and anything outside [0, count).
    """
    out = []
    for i in indices:
        j = int(i)
        if j != i:
            raise ValueError(f"index {i!r} is not an integer")
        if not 0 <= j < count:
            raise ValueError(f"index {j} out of range for a family of {count} vectors")
        out.append(j)
    out.sort()
    for a, b in zip(out, out[1:]):
        if a == b:
            raise ValueError(f"duplicate index {a} in subset")
    if require_nonempty and not out:
        raise ValueError("subset must be nonempty")
    return tuple(out)


@dataclass(frozen=True)
class Frame:
    """A finite family of vectors in R^d, one vector per row.

    The array is copied on construction and frozen (read-only), so a Frame
    is safe to share and hash-by-identity. ``labels``, when given, names
    each vector and travels through ``subset``.
    """

    vectors: np.ndarray
    labels: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        arr = as_matrix(self.vectors, "vectors")
        if arr.shape[1] < 1:
            raise ValueError("frame vectors need an ambient dimension of at least 1")
        arr.setflags(write=False)
        object.__setattr__(self, "vectors", arr)
        if self.labels is not None:
            labels = tuple(str(x) for x in self.labels)
            if len(labels) != arr.shape[0]:
                raise ValueError(
                    f"{len(labels)} labels for {arr.shape[0]} vectors"
                )
            object.__setattr__(self, "labels", labels)

    @property
    def count(self) -> int:
        return self.vectors.shape[0]

    @property
    def ambient_dim(self) -> int:
        return self.vectors.shape[1]

    def __len__(self) -> int:
        return self.count

    def subset(self, indices) -> "Frame":
        """The subfamily with the given (0-based) indices, sorted."""
        idx = normalize_indices(indices, self.count)
        sub_labels = None
        if self.labels is not None:
            sub_labels = tuple(self.labels[i] for i in idx)
        return type(self)(self.vectors[list(idx), :], labels=sub_labels)


class DualFrame(Frame):
    """A frame produced as the canonical dual of another frame."""


@dataclass(frozen=True)
class FrameBounds:
    """Optimal frame bounds relative to the span.

    ``lower`` is the smallest nonzero eigenvalue of the frame operator,
    ``upper`` the largest, and ``span_rank`` the dimension of the span.
    """

    lower: float
    upper: float
    span_rank: int


@dataclass(frozen=True)
class RieszBasisCheck:
    is_riesz: bool
    riesz_lower: float | None
    riesz_upper: float | None
    count: int
    rank: int


def frame_operator(frame: Frame) -> np.ndarray:
    """S = sum of outer products f_i f_i^T, a (d, d) symmetric PSD matrix."""
    t = frame.vectors
    s = t.T @ t
    return (s + s.T) / 2.0


def gram_matrix(frame: Frame) -> np.ndarray:
    """G[i, j] = <f_i, f_j>, an (n, n) symmetric PSD matrix."""
    t = frame.vectors
    g = t @ t.T
    return (g + g.T) / 2.0


def _nonzero_spectrum(vals: np.ndarray, pol: TolerancePolicy) -> np.ndarray:
    cutoff = pol.rank_rel * max(vals[-1], 0.0) if vals.size else 0.0
    return vals[vals > cutoff]


def frame_bounds(frame: Frame, pol: TolerancePolicy = DEFAULT_TOLERANCE) -> FrameBounds:
    """Best frame bounds of the family for its own span.

    Raises ValueError for an empty family or one whose span is zero.
    """
    if frame.count == 0:
        raise ValueError("frame bounds of an empty family are undefined")
    vals, _ = sym_eigen_many(frame_operator(frame)[None], pol, vectors=False)
    nz = _nonzero_spectrum(vals[0], pol)
    if nz.size == 0:
        raise ValueError("family spans only the zero subspace")
    return FrameBounds(lower=float(nz[0]), upper=float(nz[-1]), span_rank=int(nz.size))


def canonical_dual(frame: Frame, pol: TolerancePolicy = DEFAULT_TOLERANCE) -> DualFrame:
    """Canonical dual family g_i = S^+ f_i.

    On the span this inverts the frame operator; directions orthogonal to
    the span are annihilated, which keeps the dual well-defined for
    families that do not span all of R^d.
    """
    if frame.count == 0:
        raise ValueError("the canonical dual of an empty family is undefined")
    eig = sym_eigen(frame_operator(frame), pol)
    cutoff = pol.rank_rel * max(eig.values[-1], 0.0)
    keep = eig.values > cutoff
    if not keep.any():
        raise ValueError("family spans only the zero subspace")
    v = eig.vectors[:, keep]
    pinv = (v / eig.values[keep]) @ v.T
    dual_vectors = frame.vectors @ pinv
    return DualFrame(dual_vectors, labels=frame.labels)


def analyze(frame: Frame, f) -> np.ndarray:
    """Analysis coefficients <f, f_i> for every i."""
    x = as_vector(f, "f")
    if x.shape[0] != frame.ambient_dim:
        raise ValueError(
            f"vector has dimension {x.shape[0]}, frame lives in R^{frame.ambient_dim}"
        )
    return frame.vectors @ x


def reconstruct(frame: Frame, f, pol: TolerancePolicy = DEFAULT_TOLERANCE) -> np.ndarray:
    """Resynthesize f from its dual coefficients: sum <f, g_i> f_i.

    Exact (to rounding) for f in the span of the family; for other f it
    returns the orthogonal projection onto the span.
    """
    x = as_vector(f, "f")
    if x.shape[0] != frame.ambient_dim:
        raise ValueError(
            f"vector has dimension {x.shape[0]}, frame lives in R^{frame.ambient_dim}"
        )
    dual = canonical_dual(frame, pol)
    coeffs = dual.vectors @ x
    return frame.vectors.T @ coeffs


def is_riesz_basis(frame: Frame, pol: TolerancePolicy = DEFAULT_TOLERANCE) -> RieszBasisCheck:
    """Riesz-basis test for the span: linear independence of the family.

    When independent, the Riesz bounds are the extreme eigenvalues of the
    Gram matrix. A dependent (or empty) family gets ``None`` bounds.
    """
    n = frame.count
    if n == 0:
        return RieszBasisCheck(False, None, None, 0, 0)
    rank = numerical_rank(frame.vectors, pol)
    if rank != n:
        return RieszBasisCheck(False, None, None, n, rank)
    vals, _ = sym_eigen_many(gram_matrix(frame)[None], pol, vectors=False)
    return RieszBasisCheck(
        True, float(vals[0][0]), float(vals[0][-1]), n, rank
    )


def excess(frame: Frame, pol: TolerancePolicy = DEFAULT_TOLERANCE) -> int:
    """Number of redundant vectors: count minus the dimension of the span."""
    if frame.count == 0:
        return 0
    return frame.count - numerical_rank(frame.vectors, pol)


def solve_frame_operator(frame: Frame, b, pol: TolerancePolicy = DEFAULT_TOLERANCE) -> np.ndarray:
    """Apply the (pseudo-)inverse frame operator to a vector."""
    return spd_solve(frame_operator(frame), b, pol)


# ---------------------------------------------------------------------------
# Text format: one vector per line, whitespace-separated decimal entries.
# Lines whose first non-blank character is '#' are comments; blank lines are
# ignored. repr() round-trips doubles exactly, so write -> read is lossless.
# ---------------------------------------------------------------------------


def frame_to_text(frame: Frame) -> str:
    lines = [f"# {frame.count} vectors in R^{frame.ambient_dim}"]
    if frame.labels is not None:
        lines.append("# labels: " + ", ".join(frame.labels))
    for row in frame.vectors:
        lines.append(" ".join(repr(float(x)) for x in row))
    return "\n".join(lines) + "\n"


def parse_frame_text(text: str) -> Frame:
    rows: list[list[float]] = []
    width = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            row = [float(tok) for tok in line.split()]
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ValueError(
                f"line {lineno}: expected {width} entries, found {len(row)}"
            )
        rows.append(row)
    if not rows:
        raise ValueError("no vectors found in frame text")
    return Frame(np.array(rows, dtype=float))


def write_frame_file(frame: Frame, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(frame_to_text(frame))


def read_frame_file(path) -> Frame:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_frame_text(fh.read())
