"""Empirical checks of the comparison and determination principles.

Run: python3 demos/04_theorem_playground.py
"""

import numpy as np

import proxcalc as pc
from proxcalc.verify import (
    battery_samples,
    check_comparison,
    check_equivalences,
    check_lipschitz,
    check_support_distance,
)

X = battery_samples(dim=2, seed=7, count=200, radius=6.0)

norm = pc.ScaledNorm(1.0, [0.0, 0.0])
norm2 = pc.ScaledNorm(2.0, [0.0, 0.0])
sq = pc.Quadratic(np.eye(2))

# Comparison principle: smaller prox norms force larger function growth.
# ||prox_{2||.||}(x)|| <= ||prox_{||.||}(x)|| everywhere, hence
# ||x|| <= 2||x|| (up to values at the anchor).
rep = check_comparison(norm2, norm, [0.0, 0.0], X)
print("comparison 2||.|| vs ||.||:", rep.status,
      " hypothesis residual:", rep.hypothesis_residual)

# When the sampled hypothesis fails, nothing is asserted.
rep = check_comparison(norm, sq, [0.0, 0.0], X)
print("comparison ||.|| vs ||.||^2/2:", rep.status)

# Lipschitz characterization, both directions. The norm is 1-Lipschitz and
# satisfies the prox inequality; the quadratic is not, and a witness pair
# violating the inequality appears.
Y = np.vstack([np.zeros((1, 2)), battery_samples(2, 11, 9, 3.0)])
print("\nLipschitz ||.|| with ell=1:   ", check_lipschitz(norm, 1.0, X, Y).status)
rep = check_lipschitz(sq, 1.0, X, Y)
print("Lipschitz ||.||^2/2 with ell=1:", rep.status,
      " witness x:", np.round(rep.witnesses[0][0], 3))

# Five-way equivalence. Adding a constant preserves all five statements;
# the conjugate infima recover the constant.
rep = check_equivalences(norm, pc.AddConst(norm, 2.0), X)
print("\nequivalences ||.|| vs ||.||+2:", rep.status, " constant:",
      rep.details["constant"])

# The sharpness example: two point indicators with equal prox norms but
# different prox maps. Their conjugates are linear, unbounded below, so the
# precondition correctly fails rather than the theorem.
f = pc.IndicatorPoint([1.0, 0.0])
g = pc.IndicatorPoint([0.0, 1.0])
Xs = battery_samples(2, 7, 60, 6.0,
                     extra=[np.array([1.0, 0.0]), np.array([0.0, 1.0])])
rep = check_equivalences(f, g, Xs)
print("point indicators:", rep.status)
for line in rep.details["pattern"]:
    print("   ", line)

# Support-distance corollary: ||prox_f|| equals the distance to C exactly
# when f is the support function of C up to a constant.
rep = check_support_distance(norm, pc.IndicatorBall([0.0, 0.0], 1.0), X)
print("\n||.|| is the support of the unit ball:", rep.status)

# Reports render deterministically as structured text or CSV.
print("\n--- report ---")
print(pc.render_reports([rep]))
