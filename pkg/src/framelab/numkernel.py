"""Dense real symmetric linear algebra kernel.

Everything downstream (frame operators, Gram matrices, subset scans) runs on
the routines in this module. The eigensolver is a cyclic Jacobi iteration:
unconditionally convergent for real symmetric input, deterministic, and easy
to batch over stacks of small matrices, which is the dominant workload here
(matrices are at most a few dozen rows).

All functions are pure; results depend only on the arguments.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_MAX_SWEEPS = 40
_THETA_BIG = 1e150


@dataclass(frozen=True)
class TolerancePolicy:
    """Numerical cutoffs shared across the toolkit.

    rank_rel: relative eigenvalue cutoff. An eigenvalue counts as nonzero
        when it exceeds ``rank_rel`` times the largest eigenvalue of the
        matrix at hand. Configurable because some example families spread
        their spectra over many orders of magnitude.
    residual_abs: absolute tolerance for residual checks (symmetry tests,
        membership of a vector in a span, solve residuals).
    """

    rank_rel: float = 1e-12
    residual_abs: float = 1e-10

    def __post_init__(self) -> None:
        if not (self.rank_rel > 0.0 and np.isfinite(self.rank_rel)):
            raise ValueError(f"rank_rel must be positive, got {self.rank_rel}")
        if not (self.residual_abs > 0.0 and np.isfinite(self.residual_abs)):
            raise ValueError(f"residual_abs must be positive, got {self.residual_abs}")


DEFAULT_TOLERANCE = TolerancePolicy()


@dataclass(frozen=True)
class SymEigen:
    """Spectral decomposition of a symmetric matrix.

    ``values`` ascend; ``vectors[:, k]`` is the unit eigenvector paired with
    ``values[k]``. The column system is orthonormal.
    """

    values: np.ndarray
    vectors: np.ndarray


def as_matrix(obj, name: str = "matrix") -> np.ndarray:
    """Coerce to a 2-D float array, rejecting non-finite entries."""
    arr = np.array(obj, dtype=float)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got shape {arr.shape}")
    if arr.size and not np.isfinite(arr).all():
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def as_vector(obj, name: str = "vector") -> np.ndarray:
    """Coerce to a 1-D float array, rejecting non-finite entries."""
    arr = np.array(obj, dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be 1-dimensional, got shape {arr.shape}")
    if arr.size and not np.isfinite(arr).all():
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def _conv_rel(pol: TolerancePolicy) -> float:
    # Converge to (near) machine precision, but never looser than rank_rel.
    return max(min(pol.rank_rel, 1e-14), 5e-16)


def sym_eigen_many(
    mats,
    pol: TolerancePolicy = DEFAULT_TOLERANCE,
    vectors: bool = True,
) -> tuple[np.ndarray, np.ndarray | None]:
    """Eigendecompose a stack of symmetric matrices by cyclic Jacobi sweeps.

    ``mats`` has shape (b, k, k); each slice is assumed symmetric (no check
    here, see :func:`sym_eigen` for the validating single-matrix entry
    point). Returns ``(values, vecs)`` with ``values`` of shape (b, k)
    ascending per matrix and ``vecs`` of shape (b, k, k) holding eigenvector
    columns, or ``None`` when ``vectors=False``.

    Each matrix is iterated until its own off-diagonal mass drops below its
    own threshold, so the result for a given matrix does not depend on what
    else shares the batch.
    """
    a = np.array(mats, dtype=float)
    if a.ndim != 3 or a.shape[1] != a.shape[2]:
        raise ValueError(f"expected a (b, k, k) stack, got shape {a.shape}")
    b, k = a.shape[0], a.shape[1]
    vecs = None
    if vectors:
        vecs = np.broadcast_to(np.eye(k), (b, k, k)).copy()
    if b == 0 or k == 0:
        return np.zeros((b, k)), vecs
    if k == 1:
        return a[:, :, 0].copy(), vecs

    diag = np.arange(k)
    fro2 = (a * a).sum(axis=(1, 2))
    thr2 = (_conv_rel(pol) ** 2) * fro2
    # Off-diagonal mass is summed directly (not as ||A||_F^2 minus the
    # diagonal, which cancels catastrophically near convergence).
    offmask = 1.0 - np.eye(k)

    others = {
        (p, q): np.array([j for j in range(k) if j != p and j != q], dtype=np.intp)
        for p in range(k - 1)
        for q in range(p + 1, k)
    }

    converged = False
    for sweep in range(_MAX_SWEEPS):
        off2 = (a * a * offmask).sum(axis=(1, 2))
        active = off2 > thr2
        if not active.any():
            converged = True
            break
        for p in range(k - 1):
            for q in range(p + 1, k):
                apq = a[:, p, q].copy()
                rot = active & (apq != 0.0)
                if not rot.any():
                    continue
                app = a[:, p, p]
                aqq = a[:, q, q]
                if sweep >= 3:
                    # Classical small-pivot deflation: once the early sweeps
                    # are done, an entry below one ulp of BOTH diagonal
                    # neighbours is zeroed outright (a backward-stable
                    # perturbation of order eps^2 * scale). Rotating it
                    # instead is poison when the two diagonals are exactly
                    # tied: theta = 0 forces a full 45-degree rotation that
                    # remixes two converged rows over sub-ulp debris, and the
                    # endgame decays linearly instead of quadratically.
                    g = 100.0 * np.abs(apq)
                    negligible = (
                        rot
                        & (np.abs(app) + g == np.abs(app))
                        & (np.abs(aqq) + g == np.abs(aqq))
                    )
                    if negligible.any():
                        apq = np.where(negligible, 0.0, apq)
                        rot &= ~negligible
                        if not rot.any():
                            a[:, p, q] = apq
                            a[:, q, p] = apq
                            continue
                with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                    theta = np.where(rot, (aqq - app) / (2.0 * apq), 0.0)
                    sgn = np.where(theta >= 0.0, 1.0, -1.0)
                    abs_theta = np.abs(theta)
                    t = np.where(
                        abs_theta > _THETA_BIG,
                        0.5 / theta,
                        sgn / (abs_theta + np.sqrt(theta * theta + 1.0)),
                    )
                t = np.where(rot, t, 0.0)
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                # t = 0 for skipped matrices, so every update below is the
                # identity there and those matrices stay bit-for-bit intact.
                oth = others[(p, q)]
                akp = a[:, oth, p]
                akq = a[:, oth, q]
                nkp = c[:, None] * akp - s[:, None] * akq
                nkq = s[:, None] * akp + c[:, None] * akq
                a[:, oth, p] = nkp
                a[:, p, oth] = nkp
                a[:, oth, q] = nkq
                a[:, q, oth] = nkq
                a[:, p, p] = app - t * apq
                a[:, q, q] = aqq + t * apq
                zeroed = np.where(rot, 0.0, apq)
                a[:, p, q] = zeroed
                a[:, q, p] = zeroed
                if vecs is not None:
                    vp = vecs[:, :, p].copy()
                    vq = vecs[:, :, q]
                    vecs[:, :, p] = c[:, None] * vp - s[:, None] * vq
                    vecs[:, :, q] = s[:, None] * vp + c[:, None] * vq
    else:
        converged = not ((a * a * offmask).sum(axis=(1, 2)) > thr2).any()
    if not converged:
        raise RuntimeError("Jacobi iteration failed to converge; input may not be symmetric")

    vals = a[:, diag, diag]
    order = np.argsort(vals, axis=1, kind="stable")
    vals = np.take_along_axis(vals, order, axis=1)
    if vecs is not None:
        vecs = np.take_along_axis(vecs, order[:, None, :], axis=2)
    return vals, vecs


def sym_eigen(M, pol: TolerancePolicy = DEFAULT_TOLERANCE) -> SymEigen:
    """Full spectrum of a symmetric matrix, eigenvalues ascending.

    Rejects non-square input and matrices whose asymmetry exceeds
    ``pol.residual_abs``; the symmetric part (M + M^T)/2 is what gets
    decomposed.
    """
    a = as_matrix(M, "M")
    r, c = a.shape
    if r != c:
        raise ValueError(f"sym_eigen requires a square matrix, got {r}x{c}")
    if r:
        asym = np.abs(a - a.T).max()
        if asym > pol.residual_abs:
            raise ValueError(
                f"matrix is not symmetric: max |M - M^T| = {asym:.3e} "
                f"exceeds {pol.residual_abs:.3e}"
            )
    sym = (a + a.T) / 2.0
    vals, vecs = sym_eigen_many(sym[None, :, :], pol, vectors=True)
    return SymEigen(values=vals[0], vectors=vecs[0])


def eigenvalues_psd_stack(mats, pol: TolerancePolicy = DEFAULT_TOLERANCE) -> np.ndarray:
    """Ascending eigenvalues for a stack of symmetric matrices, values only."""
    vals, _ = sym_eigen_many(mats, pol, vectors=False)
    return vals


def numerical_rank(M, pol: TolerancePolicy = DEFAULT_TOLERANCE) -> int:
    """Rank with a relative eigenvalue cutoff.

    Counts eigenvalues of M^T M (or of M itself when M is symmetric positive
    semidefinite) exceeding ``rank_rel`` times the largest one. A zero
    matrix has rank 0.
    """
    a = as_matrix(M, "M")
    if a.size == 0:
        return 0
    r, c = a.shape
    if r == c and np.abs(a - a.T).max() <= pol.residual_abs:
        vals, _ = sym_eigen_many(((a + a.T) / 2.0)[None], pol, vectors=False)
        vals = vals[0]
        vmax = vals[-1]
        if vals[0] >= -pol.residual_abs * max(1.0, abs(vmax)):
            return int((vals > pol.rank_rel * max(vmax, 0.0)).sum())
    g = a @ a.T if r <= c else a.T @ a
    g = (g + g.T) / 2.0
    vals, _ = sym_eigen_many(g[None], pol, vectors=False)
    vals = vals[0]
    return int((vals > pol.rank_rel * max(vals[-1], 0.0)).sum())


def orthonormal_basis_of_span(
    vectors,
    pol: TolerancePolicy = DEFAULT_TOLERANCE,
    dim: int | None = None,
) -> np.ndarray:
    """Orthonormal rows spanning the same subspace as the input rows.

    Modified Gram-Schmidt with one re-orthogonalization pass; a candidate is
    dropped when its residual norm falls below ``rank_rel`` times the
    largest input norm. Empty input yields an empty basis (pass ``dim`` to
    fix the ambient dimension in that case).
    """
    if isinstance(vectors, np.ndarray) and vectors.ndim == 2:
        arr = as_matrix(vectors, "vectors")
    else:
        rows = [as_vector(v, "vector") for v in vectors]
        if rows:
            arr = np.vstack(rows)
        else:
            arr = np.zeros((0, dim if dim is not None else 0))
    if arr.shape[0] == 0:
        return np.zeros((0, arr.shape[1] if dim is None else dim))
    norms = np.sqrt((arr * arr).sum(axis=1))
    maxnorm = norms.max()
    if maxnorm == 0.0:
        return np.zeros((0, arr.shape[1]))
    drop_tol = pol.rank_rel * maxnorm
    basis: list[np.ndarray] = []
    for v in arr:
        w = v.copy()
        for _ in range(2):
            for q in basis:
                w -= (q @ w) * q
        nrm = float(np.sqrt(w @ w))
        if nrm > drop_tol:
            basis.append(w / nrm)
    if not basis:
        return np.zeros((0, arr.shape[1]))
    return np.vstack(basis)


def projector_onto_span(
    vectors,
    pol: TolerancePolicy = DEFAULT_TOLERANCE,
    dim: int | None = None,
) -> np.ndarray:
    """Orthogonal projector onto the span of the given vectors.

    Returns the symmetric idempotent matrix summing the outer products of an
    orthonormal basis of the span. For an empty input the ambient dimension
    must be supplied via ``dim``.
    """
    basis = orthonormal_basis_of_span(vectors, pol, dim=dim)
    d = basis.shape[1]
    if basis.shape[0] == 0:
        if d == 0:
            if dim is None:
                raise ValueError("projector of an empty span needs an explicit dim")
            d = dim
        return np.zeros((d, d))
    p = basis.T @ basis
    return (p + p.T) / 2.0


def spd_solve(M, b, pol: TolerancePolicy = DEFAULT_TOLERANCE) -> np.ndarray:
    """Solve M x = b for symmetric positive semidefinite M.

    Rank-deficient M is handled by solving on the range: eigenvalues at or
    below the rank cutoff are treated as zero, so the result is the
    pseudo-inverse applied to b and any component of b orthogonal to
    range(M) is ignored.
    """
    a = as_matrix(M, "M")
    x = as_vector(b, "b")
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"spd_solve requires a square matrix, got {a.shape}")
    if a.shape[0] != x.shape[0]:
        raise ValueError(
            f"dimension mismatch: matrix is {a.shape[0]}x{a.shape[1]}, vector has {x.shape[0]}"
        )
    if a.shape[0] == 0:
        return np.zeros(0)
    eig = sym_eigen(a, pol)
    cutoff = pol.rank_rel * max(eig.values[-1], 0.0)
    keep = eig.values > cutoff
    if not keep.any():
        return np.zeros_like(x)
    v = eig.vectors[:, keep]
    return v @ ((v.T @ x) / eig.values[keep])
