"""Frames, their operators, bounds, and canonical duals.

A frame here is a finite family of row vectors in R^d that spans some
subspace. The frame operator S = sum_i f_i f_i^T governs reconstruction:
every f in the span satisfies f = sum_i <f, g_i> f_i where g_i = S^+ f_i
is the canonical dual family. This walk-through builds two small frames,
inspects their spectra, and checks reconstruction to machine precision.
"""

import numpy as np

import framelab as fl

# The "mercedes" frame: three unit vectors at 120 degrees. It is tight
# (S = 1.5 I), the smallest genuinely redundant frame in the plane.
mercedes = fl.standard_frames("mercedes", 2)
print("mercedes vectors:")
print(mercedes.vectors)
print("frame operator:")
print(fl.frame_operator(mercedes))

bounds = fl.frame_bounds(mercedes)
print(f"bounds: lower={bounds.lower:.6f} upper={bounds.upper:.6f} "
      f"span_rank={bounds.span_rank}")

dual = fl.canonical_dual(mercedes)
print("canonical dual (2/3 of the originals, as tightness predicts):")
print(dual.vectors)

f = np.array([0.3, -1.2])
coeffs = fl.analyze(dual, f)  # <f, g_i>
rebuilt = mercedes.vectors.T @ coeffs
print(f"reconstruction error for {f}: {np.linalg.norm(rebuilt - f):.2e}")

# A redundant family built from an orthonormal basis: keep e_2..e_n and
# append perturbed copies e_i + 2^-i e_1. The family spans all of R^n and
# has excess one, but its redundancy is extremely lopsided: every vector
# leans on the first coordinate only through tiny 2^-i components.
fam = fl.perturbed_onb_family(5)
print(f"\nperturbed family: {fam.count} vectors in R^{fam.ambient_dim}, "
      f"excess {fl.excess(fam)}")
print("labels:", list(fam.labels))
report = fl.is_riesz_basis(fam)
print(f"is the whole family a Riesz basis? {report.is_riesz} "
      f"(count {fam.count} vs rank {report.rank})")

# reconstruct() wraps the analyze/synthesize round trip in one call.
g = np.arange(1.0, 6.0)
err = np.linalg.norm(fl.reconstruct(fam, g) - g)
print(f"reconstruct() error on {g}: {err:.2e}")

# Frames serialize to a plain text format: one vector per line, '#'
# comments, optional labels. The round trip is exact (repr floats).
text = fl.frame_to_text(mercedes)
print("\ntext form:")
print(text)
again = fl.parse_frame_text(text)
print("round trip exact:", np.array_equal(again.vectors, mercedes.vectors))
