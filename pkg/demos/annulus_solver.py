# %% [markdown]
# # Solving tr arctan D^2 u = psi on an annulus
#
# With psi = 0 and n = 2 the radial first integral Im((r + iy)^2) = c gives
# y = c/(2r), so u = ln|x| is an exact solution. The grid solver uses a
# monotone 8-direction stencil and Newton's method.

# %%
import math
import time

import numpy as np

from slpde import solver


def exact(a, b):
    with np.errstate(divide="ignore"):
        return np.log(np.hypot(a, b))


prof = solver.radial_reference(0.0, 2.0, 2, (0.5, 1.5), u0=math.log(0.5))
print("radial oracle vs ln r:", np.max(np.abs(prof.u - np.log(prof.r))))

# %%
errs = []
for h in (1 / 16, 1 / 32, 1 / 64):
    p = solver.annulus_problem(h, 0.0, exact)
    t0 = time.perf_counter()
    res = solver.solve(p)
    errs.append(solver.sup_error(res, p, exact))
    print(f"h = 1/{round(1 / h)}: error {errs[-1]:.3e}, {res.iterations} Newton steps, {time.perf_counter() - t0:.2f} s")
print("ratios", [errs[i] / errs[i + 1] for i in range(2)])

# %% [markdown]
# Projecting boundary data to the nearest boundary point instead is only
# first order.

# %%
for h in (1 / 16, 1 / 32):
    p = solver.annulus_problem(h, 0.0, exact, boundary="project")
    print(f"h = 1/{round(1 / h)}: projected-data error {solver.sup_error(solver.solve(p), p, exact):.3e}")

# %% [markdown]
# Top-interval phases can use the tame form tan(S/2) = tan(psi/2).

# %%
p = solver.annulus_problem(1 / 16, math.pi / 2 + 0.2, lambda a, b: 0.6 * (a * a + b * b))
r1, r2 = solver.solve(p), solver.tame_solve(p)
inner = p.mask == solver.INTERIOR
print("solve vs tame_solve:", np.max(np.abs(r1.u - r2.u)[inner]), "c(delta) =", solver.tameness_constant(p))
