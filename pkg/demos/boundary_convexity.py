# %% [markdown]
# # Strict boundary convexity
#
# A boundary point with principal curvatures kappa is strictly convex for the
# asymptotic subequation at phase theta when II + t P_n is in its interior for
# large t. The curvature case analysis decides this without t.

# %%
import math

import numpy as np

from slpde import boundary

print(boundary.classify_convexity([-1.0, 2.0], 3, math.pi / 2))
print("matrix test:", boundary.matrix_convexity_test([-1.0, 2.0], 3, math.pi / 2))

# %% [markdown]
# A torus with b > 2a has negative Gauss curvature on its inner half, yet it
# is strictly convex at theta = pi/2 everywhere: there H > 0 and K < 0.

# %%
a, b = 1.0, 3.0
S = boundary.torus(a, b)
rng = np.random.default_rng(1)
pts = [boundary.torus_point(a, b, u, v) for u, v in rng.uniform(0, 2 * math.pi, (200, 2))]
rows = boundary.sweep(S, pts, math.pi / 2)
kap = np.array([r.report.kappas for r in rows])
print("kappa_1 range", kap[:, 0].min(), kap[:, 0].max())
print("strict at", sum(r.report.strict for r in rows), "of", len(rows))
print({c.value: sum(r.report.case is c for r in rows) for c in boundary.ConvexityCase})

# %% [markdown]
# Strictness is monotone in theta: going up, the torus first fails inside I_1.

# %%
for theta in (0.0, math.pi / 2, 2.0, 3.0, 4.0):
    rows = boundary.sweep(S, pts, theta)
    print(f"theta = {theta:.3f}: {sum(r.report.strict for r in rows)}/{len(rows)} strict")
