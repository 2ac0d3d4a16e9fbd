"""Profiles of the reduced equation: classification, the closed-form family, a singular profile.

Run: python demos/01_profiles.py
"""

import numpy as np

from homstab.profile import HomParams, cbar3, gamma_range, is_admissible, ode_residual, solve_profile

# The parameter set J needs c1, c2 >= -1 and c3 >= cbar3(c1, c2).
print("cbar3(0, 0) =", cbar3(0.0, 0.0))
for c in [(0.0, 0.0, 0.0), (0.0, 0.0, 1.0), (1.0, 0.5, 0.3)]:
    rng = gamma_range(c)
    print(f"c = {c}: gamma in [{rng.gamma_minus:.8f}, {rng.gamma_plus:.8f}]")

# At c = 0 the profiles have the closed form 2 gamma (1 - y^2) / (2 + gamma y).
prof = solve_profile(HomParams(0.0, 0.0, 0.0, 1.0))
y = prof.nodes
exact = 2.0 * (1.0 - y * y) / (2.0 + y)
print(f"closed-form check: max error {np.max(np.abs(prof.u_values - exact)):.2e}, "
      f"residual {ode_residual(prof):.2e}")

# With c3 != 0 and c1 = c2 = 0 the profile still vanishes at both poles,
# but the velocity blows up logarithmically along the axis.
p = HomParams(0.0, 0.0, 1.0, 0.0)
prof = solve_profile(p)
print(f"{p}: class {is_admissible(p).value}, branch {prof.branch.value}, "
      f"U near y = 1: {prof.u_values[-1]:.3e}, dU near y = 1: {prof.du_values[-1]:.4f}")
