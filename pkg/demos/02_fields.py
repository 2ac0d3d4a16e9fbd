"""Velocity fields: stationary residual, axis singularity, force coefficient b and the K norms.

Run: python demos/02_fields.py
"""

import numpy as np

from homstab.field import VelocityField, nse_residual, singularity_fit
from homstab.functionals import compute_b, compute_K
from homstab.profile import HomParams, solve_profile

fld = VelocityField.from_params(HomParams(0.0, 0.0, 1.0, 0.0))
pts = np.array([[1.0, 0.2, 0.3], [0.4, -0.5, 1.2], [-0.8, 0.1, -0.6]])
# Central differences of a smooth stationary solution leave an O(h^2) residual.
for h in (1e-2, 5e-3, 2.5e-3):
    print(f"h = {h:.4f}: max |residual| = {np.abs(nse_residual(fld, pts, h)).max():.3e}")

# |u| grows like 2|c3| ln(1/|x'|) near the axis.
fit = singularity_fit(fld, np.logspace(-6, -3, 12))
print(f"axis log coefficient: {fit.coefficient:.6f} (expected 2)")

# b is finite when both endpoint values vanish.
for p in (HomParams(0.0, 0.0, 0.0, 1.0), HomParams(0.0, 0.0, 0.4, 0.4)):
    b = compute_b(solve_profile(p))
    print(f"b{p.c + (p.gamma,)} = {b.value:.12f} +- {b.error:.1e}")

# K shrinks with the background strength.
for c3 in (1.0, 0.5, 0.25):
    k = compute_K(VelocityField.from_params(HomParams(0.0, 0.0, c3, 0.0)))
    print(f"c3 = {c3}: K cone {k.k_cone:.4f}, outer {k.k_outer:.4f}, grad {k.k_grad:.4f}")
