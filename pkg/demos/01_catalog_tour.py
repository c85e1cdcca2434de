"""A tour of the function catalog: evaluation, prox maps, subdifferentials.

Run: python3 demos/01_catalog_tour.py
"""

import numpy as np

import proxcalc as pc

# The catalog covers affine and quadratic functions, scaled norms, and the
# indicator / support functions of points, balls, boxes, and halfspaces.
# Combinators tilt (subtract a linear term), translate, add constants, and
# smooth (Moreau envelope).

norm = pc.ScaledNorm(1.0, [0.0, 0.0])          # ||x||
ball = pc.IndicatorBall([0.0, 0.0], 1.0)       # 0 on the unit ball, +inf off it
half_sq = pc.Quadratic(np.eye(2))              # ||x||^2 / 2

x = np.array([3.0, 4.0])
print("||x|| at (3,4):                ", pc.evaluate(norm, x))
print("ball indicator at (2,0):       ", pc.evaluate(ball, [2.0, 0.0]))
print("tilted quadratic at (1,0):     ",
      pc.evaluate(pc.Tilt(half_sq, [1.0, 0.0]), [1.0, 0.0]))

# prox_{lam f}(x) minimizes f(y) + ||x-y||^2/(2 lam). For the norm it is the
# block soft-threshold; for an indicator it is the projection.
print("\nprox of ||.|| at (3,4):        ", pc.prox_closed_form(norm, 1.0, x))
print("projection onto the ball:      ", pc.prox_closed_form(ball, 1.0, x))
print("inside the threshold collapses:", pc.prox_closed_form(norm, 1.0, [0.5, 0.0]))

# Every prox comes with diagnostics through the engine front end.
res = pc.prox(half_sq, 1.0, [2.0, 0.0])
print("\nprox of ||.||^2/2 at (2,0):    ", res.minimizer,
      " envelope value:", res.envelope_value, " method:", res.method)

# The engine's iterative solver never consults the closed forms, so it
# doubles as an independent cross-check.
res_num = pc.numerical_prox(norm, 1.0, x)
print("iterative solver agrees:       ", res_num.minimizer,
      f" ({res_num.iterations} iterations, residual {res_num.residual:.1e})")

# Subdifferentials are structured sets: the norm at the origin spreads into
# the whole unit ball, elsewhere it is the unit gradient.
print("\nsubdifferential of ||.|| at 0: ", pc.subdifferential(norm, [0.0, 0.0]))
print("least-norm subgradient there:  ", pc.minimal_selection(norm, [0.0, 0.0]))
print("at (3,4):                      ", pc.minimal_selection(norm, x))

# Tilting shifts the subdifferential; the shifted ball still contains 0,
# so the least-norm element stays 0.
tilted = pc.Tilt(norm, [0.5, 0.0])
print("tilted norm at 0:              ", pc.subdifferential(tilted, [0.0, 0.0]))
print("least-norm element:            ", pc.minimal_selection(tilted, [0.0, 0.0]))

# Functions can be loaded from JSON documents (see README for the format).
doc = '{"op": "envelope", "lambda": 1.0, "f": {"atom": "scaled_norm", "ell": 1.0, "center": [0.0, 0.0]}}'
smoothed = pc.parse_document(doc)
print("\nparsed document:               ", smoothed)
print("its value at (3,4):            ", pc.evaluate(smoothed, x))
