"""Generators for test frames and the perturbed orthonormal family.

The headline generator is ``perturbed_onb_family``: working in R^n with
orthonormal basis e_1..e_n, it emits the 2(n-1) vectors

    e_i          for i = 2..n   (plain half)
    e_i + 2^-i e_1  for i = 2..n   (perturbed half)

The family spans R^n (e_1 enters only through the perturbations), has
excess n - 2, and its subfamily lower bounds decay geometrically, which is
what makes it the standard stress case for the subfamily scans. The
companion ``perturbed_onb_expansion`` computes explicit reconstruction
coefficients on subfamilies of this family.

Index conventions: subfamily selectors for this family (plain_set,
perturbed_set, pivot) use the basis index i in 2..n, matching the labels;
flat frame indices are 0-based with the plain half first, each half
ascending in i.
"""

from __future__ import annotations

import numpy as np

from .frames import Frame
from .numkernel import (
    DEFAULT_TOLERANCE,
    TolerancePolicy,
    as_vector,
    orthonormal_basis_of_span,
)

STANDARD_KINDS = ("onb", "mercedes", "duplicated_onb")


def perturbed_onb_family(n: int) -> Frame:
    """The truncated family {e_i} u {e_i + 2^-i e_1}, i = 2..n, in R^n."""
    n = int(n)
    if n < 3:
        raise ValueError(f"truncation size must be at least 3, got {n}")
    plain = np.eye(n)[1:]
    perturbed = plain.copy()
    perturbed[:, 0] += 2.0 ** -np.arange(2, n + 1)
    labels = tuple(f"e{i}" for i in range(2, n + 1)) + tuple(
        f"e{i}+2^-{i}e1" for i in range(2, n + 1)
    )
    return Frame(np.vstack([plain, perturbed]), labels=labels)


def _check_basis_indices(indices, n: int, name: str) -> tuple[int, ...]:
    out = sorted(int(i) for i in indices)
    for i in out:
        if not 2 <= i <= n:
            raise ValueError(f"{name} index {i} outside 2..{n}")
    for a, b in zip(out, out[1:]):
        if a == b:
            raise ValueError(f"duplicate {name} index {a}")
    return tuple(out)


def perturbed_onb_subfamily(plain_set, perturbed_set, n: int) -> Frame:
    """The subfamily {e_i : i in plain_set} u {e_i + 2^-i e_1 : i in perturbed_set}.

    Vector order is plain indices ascending, then perturbed ascending; the
    coefficient order of :func:`perturbed_onb_expansion` matches it.
    """
    n = int(n)
    if n < 3:
        raise ValueError(f"truncation size must be at least 3, got {n}")
    plain_set = _check_basis_indices(plain_set, n, "plain")
    perturbed_set = _check_basis_indices(perturbed_set, n, "perturbed")
    if not plain_set and not perturbed_set:
        raise ValueError("subfamily is empty")
    fam = perturbed_onb_family(n)
    flat = [i - 2 for i in plain_set] + [(n - 1) + (i - 2) for i in perturbed_set]
    sub_labels = tuple(fam.labels[i] for i in flat)
    return Frame(fam.vectors[flat, :], labels=sub_labels)


def perturbed_onb_expansion(
    f,
    plain_set,
    perturbed_set,
    pivot: int,
    n: int,
    pol: TolerancePolicy = DEFAULT_TOLERANCE,
) -> np.ndarray:
    """Explicit expansion of f over a subfamily of the perturbed family.

    Writes f = sum c_i g_i over the subfamily given by
    :func:`perturbed_onb_subfamily` (same ordering). The pivot p must lie
    in both index sets; its plain/perturbed pair is what produces e_1, via

        e_1 = 2^p ((e_p + 2^-p e_1) - e_p),

    and the remaining coefficients read off the basis components of f.
    With I = plain_set, J = perturbed_set and a = sum_{i in J - I}
    <f, e_i> 2^-i, the coefficients are:

        plain pivot:      2^p a - 2^p <f, e_1> + <f, e_p>
        plain i != p:     <f, e_i>
        perturbed pivot: -2^p a + 2^p <f, e_1>
        perturbed i in J - I:      <f, e_i>
        perturbed i in (I & J) - p: 0

    Requires f (length n) to lie in the subfamily's span, which is
    span{e_1} + span{e_i : i in I u J}; off-span input is rejected with the
    offending distance.
    """
    n = int(n)
    if n < 3:
        raise ValueError(f"truncation size must be at least 3, got {n}")
    x = as_vector(f, "f")
    if x.shape[0] != n:
        raise ValueError(f"f has dimension {x.shape[0]}, expected {n}")
    plain_set = _check_basis_indices(plain_set, n, "plain")
    perturbed_set = _check_basis_indices(perturbed_set, n, "perturbed")
    pivot = int(pivot)
    if pivot not in plain_set or pivot not in perturbed_set:
        raise ValueError(
            f"pivot {pivot} must belong to both index sets "
            f"(plain {plain_set}, perturbed {perturbed_set})"
        )

    allowed = {1} | set(plain_set) | set(perturbed_set)
    outside = [i for i in range(1, n + 1) if i not in allowed]
    dist = float(np.sqrt(sum(x[i - 1] ** 2 for i in outside)))
    fnorm = float(np.sqrt(x @ x))
    if dist > pol.residual_abs * (1.0 + fnorm):
        raise ValueError(
            f"f lies outside the subfamily span: distance {dist:.3e} "
            f"(components on e_i for i in {outside})"
        )

    comp = {i: float(x[i - 1]) for i in range(1, n + 1)}
    join = set(perturbed_set) - set(plain_set)
    a = sum(comp[i] * 2.0 ** -i for i in sorted(join))
    scale = 2.0 ** pivot

    coeffs = []
    for i in plain_set:
        if i == pivot:
            coeffs.append(scale * a - scale * comp[1] + comp[pivot])
        else:
            coeffs.append(comp[i])
    for i in perturbed_set:
        if i == pivot:
            coeffs.append(-scale * a + scale * comp[1])
        elif i in join:
            coeffs.append(comp[i])
        else:
            coeffs.append(0.0)
    return np.array(coeffs)


def random_frame(d: int, count: int, seed: int = 0, spectrum_hint=None) -> Frame:
    """Seeded random frame: ``count`` Gaussian rows in R^d.

    With ``spectrum_hint`` (a target condition number >= 1 for the frame
    operator restricted to the span), the rows are built from random
    orthonormal factors with a geometric singular-value profile, so the
    achieved condition number matches the hint up to rounding.
    """
    d = int(d)
    count = int(count)
    if d < 1:
        raise ValueError(f"dimension must be at least 1, got {d}")
    if count < 1:
        raise ValueError(f"count must be at least 1, got {count}")
    rng = np.random.default_rng(seed)
    if spectrum_hint is None:
        return Frame(rng.standard_normal((count, d)))
    hint = float(spectrum_hint)
    if not hint >= 1.0:
        raise ValueError(f"spectrum_hint must be at least 1, got {spectrum_hint}")
    r = min(count, d)
    if r == 1 and hint != 1.0:
        raise ValueError("a rank-1 frame operator always has condition 1")
    sing = np.geomspace(1.0, hint**-0.5, r)
    for _ in range(8):
        left = orthonormal_basis_of_span(rng.standard_normal((r, count)))
        right = orthonormal_basis_of_span(rng.standard_normal((r, d)))
        if left.shape[0] == r and right.shape[0] == r:
            return Frame((left.T * sing) @ right)
    raise RuntimeError("failed to draw full-rank orthonormal factors")


def standard_frames(kind: str, d: int) -> Frame:
    """Named deterministic frames: onb, mercedes (d=2), duplicated_onb."""
    d = int(d)
    if kind == "onb":
        if d < 1:
            raise ValueError(f"dimension must be at least 1, got {d}")
        return Frame(np.eye(d), labels=tuple(f"e{i}" for i in range(1, d + 1)))
    if kind == "mercedes":
        if d != 2:
            raise ValueError("the mercedes frame lives in R^2")
        root3 = np.sqrt(3.0)
        vectors = np.array([[0.0, 1.0], [-root3 / 2, -0.5], [root3 / 2, -0.5]])
        return Frame(vectors, labels=("m1", "m2", "m3"))
    if kind == "duplicated_onb":
        if d < 1:
            raise ValueError(f"dimension must be at least 1, got {d}")
        labels = tuple(f"e{i}" for i in range(1, d + 1) for _ in range(2))
        return Frame(np.repeat(np.eye(d), 2, axis=0), labels=labels)
    raise ValueError(f"unknown kind {kind!r}; expected one of {STANDARD_KINDS}")
