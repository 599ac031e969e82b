"""Extracting a Riesz basis from a redundant frame.

A frame with excess carries more vectors than its span needs. Extraction
picks a linearly independent spanning subfamily — a Riesz basis for the
span — and reports its bounds. Three strategies trade quality for cost:

* exhaustive: best possible lower bound, cost binomial(n, rank);
* greedy: grow the subset by the locally best next vector;
* projection: greedy seed, then rank the rest by projected Gram.

Exhaustive dominates both others by construction. Greedy usually beats
projection but its one-step lookahead is myopic, and on a few percent of
random frames projection wins — worth knowing before trusting greedy
output as near-optimal.
"""

import numpy as np

import framelab as fl

dup = fl.standard_frames("duplicated_onb", 3)
res = fl.extract(dup)
print(f"duplicated ONB: selected {res.selected} "
      f"bounds ({res.riesz_lower}, {res.riesz_upper})")

frame = fl.random_frame(4, 9, seed=91)
for strategy in fl.STRATEGIES:
    r = fl.extract(frame, strategy)
    print(f"{strategy:<11} selected={r.selected} lower={r.riesz_lower:.6f}")
print("(this seed is one of the myopic-greedy examples: projection finds "
      "the exhaustive optimum, greedy does not)")

# Asking for the Riesz bounds of a dependent subfamily raises with a
# certificate: a nonzero combination annihilating the vectors.
two_copies = fl.Frame(np.array([[1.0, 0.0], [1.0, 0.0]]))
try:
    fl.riesz_bounds_of_subset(two_copies, (0, 1))
except fl.DependentFamilyError as exc:
    print(f"\ndependent subset rejected: {exc}")
    print(f"annihilating combination: {exc.null_combination}")

# Perturbation certificates give a cheap sufficient condition: if the
# family is entrywise close to an orthonormal reference with total squared
# deviation mu < 1, it is automatically a Riesz basis with lower bound at
# least (1 - sqrt(mu))^2. The perturbed half of the lopsided family is the
# showcase: mu = sum 4^-i < 1/12, tiny, so the half is certified at once.
n = 6
half = fl.perturbed_onb_subfamily([], range(2, n + 1), n)
cert = fl.perturbation_certificate(half, np.eye(n)[1:])
print(f"\nperturbed half: mu={cert.mu!r} certified={cert.certified}")
print(f"exact geometric sum: {sum(4.0 ** -i for i in range(2, n + 1))!r}")
print(f"guaranteed lower bound: {(1 - cert.mu ** 0.5) ** 2:.6f}")
print(f"actual lower bound:     {fl.frame_bounds(half).lower:.6f}")
