"""Sign and subset suprema: finite diagnostics for unconditionality.

For a family of terms y_i = c_i x_i, unconditional convergence of
sum c_i x_i is about uniform control of *all* sign patterns and *all*
subsets. At finite scale both suprema are exactly computable:

    sign_sup(family)  = max over signs eps_i of || sum eps_i y_i ||
    subset_sup(rows)  = max over subsets A of f(sum_{i in A} row_i)

A family whose tail sign-suprema decay to zero converges unconditionally;
a near-Riesz family (Riesz basis plus finitely many extras) shows up by
having a small deletion set whose removal restores two-sided bounds.
"""

import numpy as np

import framelab as fl

# Doubled basis with geometric weights: terms c_1 e_1, c_2 e_1, c_3 e_2 ...
# Every basis direction appears twice, so nothing is a Riesz basis, but the
# tails still shrink: s_m is squeezed by 2 max_{k >= m} |c_k|.
n = 4
coeffs = 2.0 ** -np.arange(1, 2 * n + 1)
fam = fl.duplicated_basis_family(n, coeffs)

s = fl.sign_sup(fam, 1)  # tail starting at the first term = the whole sum
print(f"sign_sup over all {2 ** fam.count} patterns: {s!r}")

profile = fl.tail_decay_profile(fam)
print("tail profile (start m -> sup over signs of the tail):")
for m, v in zip(profile.tail_starts, profile.values):
    print(f"  m={m:>2}  s_m={v!r}")
print(f"method: {profile.method}")

# Subset suprema have a closed form for the coordinate-max norm (pick, per
# coordinate, the positive or the negative mass); the library cross-checks
# it against exhaustive enumeration in its tests. The euclidean variant
# enumerates outright below the cap.
rows = fam.terms()
print(f"\nsubset_sup coordinate_max: {fl.subset_sup(rows, 'coordinate_max')!r}")
print(f"subset_sup euclidean:      {fl.subset_sup(rows, 'euclidean'):.6f}")

# Beyond 24 terms exhaustive sign enumeration is off the table; the report
# returns certified lower and upper envelopes instead.
big = fl.duplicated_basis_family(14, 0.8 ** np.arange(28))
bounds = fl.sign_sup_bounds(big, 1, samples=512, seed=3)
print(f"\n28 terms: certified lower {bounds.lower:.4f}, "
      f"triangle upper {bounds.upper:.4f}, exact={bounds.exact}")

# Near-Riesz diagnostic: a duplicated ONB is one deletion away (per pair)
# from an honest Riesz basis; the report names a minimal deletion set.
dup = fl.standard_frames("duplicated_onb", 3)
rep = fl.near_riesz_diagnostic(dup)
print(f"\nduplicated ONB: excess={rep.excess} deletion={rep.deletion} "
      f"kept={rep.kept}")
print(f"post-deletion bounds: ({rep.post_deletion_bounds.lower}, "
      f"{rep.post_deletion_bounds.upper}), unconditional={rep.unconditional}")

# Families serialize like frames do: 'coefficient | entries' per line.
text = fl.family_to_text(fam)
print("\ntext form (first three lines):")
print("\n".join(text.splitlines()[:3]))
