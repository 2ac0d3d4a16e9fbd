"""Decay constants: the closed-form product against the integral it summarizes.

Run: python demos/03_decay_constants.py
"""

from homstab.decay import constant_via_quadrature, decay_envelope, integral_constant, sharp_constant

print(f"{'q':>6} {'tau':>5} {'product':>12} {'quadrature':>12} {'integral form':>14}")
for q in (3.5, 6.0, 20.0):
    for tau in (0.1, 0.5, 0.9):
        print(f"{q:6.1f} {tau:5.2f} {sharp_constant(q, tau):12.8f} {constant_via_quadrature(q, tau):12.8f} "
              f"{integral_constant(q, tau):14.8f}")
# The product and the quadrature agree only in the limit q -> 3.
print("q = 3 + 1e-9:", sharp_constant(3.0 + 1e-9, 0.5), constant_via_quadrature(3.0 + 1e-9, 0.5))

# Envelope for the L^6 norm of a perturbation with ||w0||_3 = 0.05.
for t in (0.5, 1.0, 5.0, 50.0):
    print(f"t = {t:5.1f}: envelope {decay_envelope(6.0, 0.5, 0.05, t):.5f}")
