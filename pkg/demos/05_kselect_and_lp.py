"""The competition as a standalone tool: k-selection and three linear
programs a WTA device solves exactly.
"""

import numpy as np

from wtanet import kwta, solve_box_lp, solve_ksum_lp, solve_simplex_lp, wta

scores = np.array([3.0, 1.0, 4.0, 1.0, 5.0, 9.0, 2.0, 6.0])
print(f"scores: {scores.tolist()}")
print(f"wta winner: index {wta(scores)}")

top3 = kwta(scores, 3)
print(f"top-3 winners (selection order): {top3.winners}, "
      f"values {top3.values}")

# max c.x subject to sum(x) = 1, x >= 0: the optimum is a unit vertex
c = np.array([0.1, 0.7, 0.2])
sol = solve_simplex_lp(c)
print(f"\nsimplex form, c={c.tolist()}: x={sol.x.tolist()}, "
      f"objective {sol.objective}")

# max c.x subject to sum(x) = k, 0 <= x <= 1: pick the k best coordinates
sol = solve_ksum_lp(scores, 2)
print(f"ksum form, k=2: support {np.nonzero(sol.x)[0].tolist()}, "
      f"objective {sol.objective}")

# max c.x subject to l <= x <= u: each coordinate independently
sol = solve_box_lp([1.0, -2.0, 0.0], [0.0, 0.0, -1.0], [3.0, 5.0, 2.0])
print(f"box form: x={sol.x.tolist()}, objective {sol.objective}")

# Ties always break to the smaller index, consistently everywhere:
tied = [7.0, 7.0, 7.0]
print(f"\ntie policy: wta({tied}) -> {wta(tied)}, "
      f"kwta k=2 -> {kwta(tied, 2).winners}")
