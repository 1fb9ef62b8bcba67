# %% [markdown]
# # Phases, branches and the asymptotic interior
#
# f(A) = sum arctan lambda_i(A). The special values theta_k = (n - 2k) pi/2 split
# (-n pi/2, n pi/2) into the intervals I_k. On I_k the asymptotic interior is
# Int Lambda_k; at theta_k it is the larger set decided by the sign of
# sigma_{n-1} sigma_n.

# %%
import math

import numpy as np

from slpde import asymptotic, branches, phase, symcore

A = np.diag([-1.0, 2.0, 3.0])
spec = symcore.eigenvalues(A)
print("eigenvalues", spec.eigenvalues, "sigma", spec.sigma, "q =", spec.neg_count)
print("f(A) =", phase.sl_value(A), " pi/2 =", math.pi / 2)

# %% [markdown]
# The phase taxonomy for n = 3.

# %%
for theta in (-2.0, -math.pi / 2, 0.0, math.pi / 2, 2.0):
    pc = phase.classify_phase(3, theta)
    print(f"theta = {theta:+.4f}: {pc.kind.value}({pc.k})")

# %% [markdown]
# f(tA) approaches (n - 2q) pi/2 like -sigma_{n-1}/(t sigma_n). Here
# sigma_2 sigma_3 < 0, so the limit pi/2 is approached from above.

# %%
rep = phase.asymptotic_expansion(A)
for t in (1.0, 10.0, 100.0, 1000.0):
    print(f"t = {t:6.0f}  f(tA) = {phase.sl_value(t * A):.10f}  predictor = {rep.predictor(t):.10f}")
print(rep.monotonicity.value, rep.limit)

# %% [markdown]
# Branch membership by the three routes, and the closed form against the
# sampling oracle at the special value pi/2.

# %%
for k in (1, 2):
    print(
        k,
        branches.lambda_branch(A, k).region.value,
        branches.sigma_branch_critical(A, k).region.value,
        branches.sigma_branch_variation(A, k).region.value,
        branches.decompose_sigma_branch(A, k),
    )
v = asymptotic.asymptotic_interior(A, math.pi / 2)
print(v.branch_case, v.member_interior, "oracle:", asymptotic.definition_oracle(A, math.pi / 2))

# %% [markdown]
# Agreement rate on random matrices (the acceptance test runs 10^4).

# %%
rng = np.random.default_rng(0)
agree = total = 0
for _ in range(300):
    n = int(rng.integers(2, 6))
    M = rng.uniform(-5, 5, (n, n))
    M = 0.5 * (M + M.T)
    for k in range(1, n):
        theta = phase.special_value(n, k)
        agree += asymptotic.asymptotic_interior(M, theta).member_interior == asymptotic.definition_oracle(M, theta)
        total += 1
print(f"{agree}/{total} special-value queries agree")
